#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "coendo/commands.hpp"

using namespace coendo;

namespace {

int emit(const cli::Report& rep, bool timing, double ms, const std::string& out_path) {
  std::string text = rep.render(timing ? std::optional<double>(ms) : std::nullopt);
  if (out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coendo: coendomorphism bialgebroids of finite ring extensions"};
  app.require_subcommand(1);

  cli::Options o;
  std::string algebra, complex, out = "-";
  bool timing = false;
  std::string ring = "B";

  auto common = [&](CLI::App* sub) {
    sub->add_option("algebra", algebra, "algebra file (- for stdin)")->required();
    sub->add_option("-o,--output", out, "report path (- for stdout)");
    sub->add_flag("--timing", timing, "include wall time in the report");
  };

  auto* build = app.add_subcommand("build", "build Q, D and L' and print dimension tables");
  common(build);
  build->add_option("-d,--degree", o.degree, "truncation degree")->default_val(2);

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  common(verify);
  verify->add_option("-d,--degree", o.degree, "truncation degree")->default_val(2);
  verify->add_option("--suite", o.suites, "suite(s) to run; all when omitted")
      ->check(CLI::IsMember(cli::kSuites));
  verify->add_option("--seed", o.seed, "seed for property suites")->default_val(0);
  verify->add_option("--cases", o.cases, "cases for property suites")->default_val(100);

  auto* transport = app.add_subcommand("transport", "push a complex through Q");
  common(transport);
  transport->add_option("complex", complex, "complex file (- for stdin)")->required();
  transport->add_option("-d,--degree", o.degree, "build degree; defaults to the support of the complex plus one");
  transport->add_option("--ring", ring, "B or C")->check(CLI::IsMember({"B", "C"}))->default_val("B");
  transport->add_flag("--roundtrip", o.roundtrip, "check the inverse functor");

  CLI11_PARSE(app, argc, argv);
  o.ring = ring == "C" ? RingKind::C : RingKind::B;
  o.threads = cli::thread_cap();

  const std::string command = app.get_subcommands().front()->get_name();
  cli::Report rep(command);
  const auto start = std::chrono::steady_clock::now();
  std::string alg_text, cx_text;
  try {
    alg_text = io::slurp(algebra);
    if (command == "transport") {
      if (algebra == "-" && complex == "-") throw io::ParseError("only one input can come from stdin");
      cx_text = io::slurp(complex);
    }
  } catch (const io::ParseError& e) {
    rep.error("io", e.what());
    return emit(rep, false, 0, out);
  }
  cli::execute(command, alg_text, command == "transport" ? &cx_text : nullptr, o, rep);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return emit(rep, timing, ms, out);
}
