#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "coendo/coideal.hpp"
#include "coendo/equivalence.hpp"
#include "coendo/flatness.hpp"
#include "coendo/io.hpp"
#include "coendo/splitting.hpp"

namespace coendo::cli {

using io::json;

const std::vector<std::string> kSuites = {"coring", "bialgebroid", "can", "comodules", "splitting", "flatness", "takeuchi"};

struct Options {
  int degree = -1;  // -1: command default
  std::vector<std::string> suites;
  RingKind ring = RingKind::B;
  bool roundtrip = false;
  uint64_t seed = 0;
  int cases = 100;
  int threads = 1;
};

// Worker count from COENDO_THREADS, defaulting to the hardware.
inline int thread_cap() {
  if (const char* s = std::getenv("COENDO_THREADS")) {
    int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0..n-1) on up to `threads` workers; results stay in index order.
template <class T>
std::vector<T> parallel_map(int n, int threads, const std::function<T(int)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errs(n);
  const int w = std::max(1, std::min(threads, n));
  if (w == 1) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += w) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

// Line-delimited JSON report. Lines appear in insertion order.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set_header(const std::string& digest, const std::string& field, json truncation) {
    digest_ = digest;
    field_ = field;
    truncation_ = std::move(truncation);
  }
  void check(const Check& c, const json& payload = nullptr) {
    json line;
    line["type"] = "check";
    line["suite"] = c.suite;
    line["name"] = c.name;
    line["status"] = c.pass ? "pass" : "fail";
    line["count"] = c.count;
    std::string unit = c.unit;
    if (c.count == 1 && unit.ends_with("s")) unit.pop_back();
    line["statement"] = c.name + " on " + std::to_string(c.count) + " " + unit;
    if (!c.pass) line["counterexample"] = c.detail;
    if (!payload.is_null()) line["payload"] = payload;
    if (!c.pass) ++failed_;
    ++checks_;
    lines_.push_back(std::move(line));
  }
  void checks(const std::vector<Check>& cs) {
    for (const auto& c : cs) check(c);
  }
  void skip(const std::string& suite, const std::string& name, const std::string& why) {
    json line;
    line["type"] = "check";
    line["suite"] = suite;
    line["name"] = name;
    line["status"] = "skipped";
    line["reason"] = why;
    ++skipped_;
    lines_.push_back(std::move(line));
  }
  void table(const std::string& name, const std::vector<std::string>& columns, const json& rows) {
    json line;
    line["type"] = "table";
    line["name"] = name;
    line["columns"] = columns;
    line["rows"] = rows;
    lines_.push_back(std::move(line));
  }
  void data(const std::string& name, const json& value) {
    json line;
    line["type"] = "data";
    line["name"] = name;
    line["value"] = value;
    lines_.push_back(std::move(line));
  }
  void error(const std::string& kind, const std::string& message) {
    error_ = true;
    json line;
    line["type"] = "error";
    line["kind"] = kind;
    line["message"] = message;
    lines_.push_back(std::move(line));
  }

  bool ok() const { return !error_ && failed_ == 0; }
  int exit_code() const { return error_ ? 2 : failed_ ? 1 : 0; }

  std::string render(std::optional<double> wall_ms = std::nullopt) const {
    std::string out;
    json head;
    head["type"] = "report";
    head["command"] = command_;
    head["inputs_digest"] = digest_;
    head["field"] = field_;
    head["truncation"] = truncation_;
    out += head.dump() + "\n";
    for (const auto& l : lines_) out += l.dump() + "\n";
    json tail;
    tail["type"] = "summary";
    tail["status"] = error_ ? "error" : failed_ ? "fail" : "pass";
    tail["checks"] = checks_;
    tail["failed"] = failed_;
    tail["skipped"] = skipped_;
    if (wall_ms) tail["wall_time_ms"] = *wall_ms;
    out += tail.dump() + "\n";
    return out;
  }

 private:
  std::string command_, digest_, field_;
  json truncation_ = json::object();
  std::vector<json> lines_;
  long checks_ = 0, failed_ = 0, skipped_ = 0;
  bool error_ = false;
};

// Merges checks with equal suite and name: counts add, the first failure is kept.
inline std::vector<Check> merge_checks(const std::vector<Check>& cs) {
  std::vector<Check> out;
  std::map<std::pair<std::string, std::string>, size_t> at;
  for (const auto& c : cs) {
    auto key = std::make_pair(c.suite, c.name);
    auto it = at.find(key);
    if (it == at.end()) {
      at.emplace(key, out.size());
      out.push_back(c);
      continue;
    }
    Check& m = out[it->second];
    m.count += c.count;
    if (!c.pass) m.fail(c.detail);
  }
  return out;
}

inline std::vector<Check> relabel(std::vector<Check> cs, const std::string& suite, const std::string& prefix) {
  for (auto& c : cs) {
    c.suite = suite;
    if (!prefix.empty()) c.name = prefix + ": " + c.name;
  }
  return cs;
}

// Everything a suite needs, built once per invocation.
template <class F>
struct Build {
  RRingExt<F> ext;
  int d;
  QPtr<F> q;
  ComatrixPtr<F> D;
  WordModelPtr<F> W;
  std::unique_ptr<CanonicalMaps<F>> cm;

  Build(const RRingExt<F>& e, int degree) : ext(e), d(degree) {
    q = std::make_shared<const QComplex<F>>(ext, d + 1);
    D = std::make_shared<const Comatrix<F>>(q, d, RingKind::B);
    if (d >= 1) {
      W = std::make_shared<const WordModel<F>>(q, d);
      cm = std::make_unique<CanonicalMaps<F>>(D, W);
    }
  }
};

template <class F>
json dims_table(int top, const std::function<int(int)>& upto) {
  json rows = json::array();
  for (int n = 0; n <= top; ++n) rows.push_back({n, upto(n) - (n ? upto(n - 1) : 0), upto(n)});
  return rows;
}

// A f.g. projective as a left R-module, naming the failure.
template <class F>
Check projectivity_check(const RRingExt<F>& ext) {
  Check c{"build", "A is finitely generated projective as a left R-module"};
  std::vector<Mat<F>> left;
  for (int k = 0; k < ext.R->n; ++k) left.push_back(ext.A->lmul(ext.u.col(k)));
  auto db = dual_basis_left(ext.R, left, ext.A->n);
  if (!db) c.fail("no dual basis for A over R: A is not a summand of a free left R-module");
  else if (auto err = db->verify(ext.R, left, ext.A->n)) c.fail("dual basis fails: " + *err);
  ++c.count;
  return c;
}

template <class F>
void cmd_build(const RRingExt<F>& ext, const Options& o, Report& rep) {
  const int d = o.degree < 0 ? 2 : o.degree;
  Check proj = projectivity_check(ext);
  rep.check(proj);
  if (!proj.pass) return;
  Build<F> b(ext, d);
  json qrows = json::array();
  for (int n = 0; n <= b.q->degree(); ++n) qrows.push_back({n, b.q->dim(n), b.q->dual_dim(n)});
  rep.table("Q", {"degree", "dim Q_n", "dim *Q_n"}, qrows);
  rep.table("D", {"degree", "dim", "cumulative"}, dims_table<F>(d, [&](int n) { return b.D->dim_upto(n); }));
  if (!b.W) {
    rep.skip("build", "word model", "degree 0 keeps only the degree-0 subring R (x) R^op");
    return;
  }
  rep.table("L'", {"degree", "dim", "cumulative"}, dims_table<F>(d, [&](int n) { return b.W->dim_upto(n); }));
  Check same{"build", "D and L' have the same dimension in each degree"};
  for (int n = 0; n <= d; ++n) {
    if (b.D->dim_upto(n) != b.W->dim_upto(n)) same.fail("degree " + std::to_string(n));
    ++same.count;
  }
  rep.check(same);
}

struct SuiteOutput {
  std::vector<Check> checks;
  std::vector<std::pair<std::string, json>> tables;  // name -> {columns, rows}
  std::vector<std::pair<std::string, json>> data;
  std::vector<std::pair<std::string, std::string>> skipped;
};

template <class F>
SuiteOutput suite_takeuchi(const Build<F>& b, const Options& o) {
  SuiteOutput out;
  const F& f = b.q->field();
  Equivalence<F> E(b.q, b.d, RingKind::B);
  auto k = E.coeff();
  out.checks = E.gamma0_checks();
  const int half = b.d / 2;
  std::vector<Check> g2;
  std::mt19937_64 rng(o.seed);
  std::vector<std::pair<ChainComplex<F>, ChainComplex<F>>> pairs;
  for (int c = 0; c < o.cases; ++c) {
    auto X = random_complex(k, 2, half, rng);
    auto Y = random_complex(k, 2, b.d - half, rng);
    pairs.emplace_back(X, Y);
  }
  auto res = parallel_map<std::vector<Check>>(o.cases, o.threads, [&](int i) {
    return E.gamma2(pairs[i].first, pairs[i].second).checks;
  });
  for (auto& r : res) g2.insert(g2.end(), r.begin(), r.end());
  for (auto& c : merge_checks(g2)) out.checks.push_back(c);
  // coherence on a seeded triple with total degree within the truncation
  const int t = b.d / 3;
  auto X = random_complex(k, 2, t, rng), Y = random_complex(k, 2, t, rng), Z = random_complex(k, 2, b.d - 2 * t, rng);
  ChainMap<F> fx, gy;
  for (int n = 0; n <= X.top(); ++n) fx.push_back(Mat<F>::identity(f, X.dims[n]).scaled(f.from_int(2)));
  auto basis = chain_map_space(Y, Y);
  for (int n = 0; n <= Y.top(); ++n) {
    Mat<F> m(f, Y.dims[n], Y.dims[n]);
    for (size_t i = 0; i < basis.size(); ++i) m.add_scaled(f.from_int(static_cast<long long>(i) + 1), basis[i][n]);
    gy.push_back(m);
  }
  for (auto& c : E.coherence(X, Y, Z, fx, gy)) out.checks.push_back(c);
  return out;
}

template <class F>
SuiteOutput run_suite(const std::string& name, const Build<F>& b, const Options& o) {
  SuiteOutput out;
  const auto& q = *b.q;
  const int d = b.d;
  auto need_words = [&] {
    if (!b.W) {
      out.skipped.emplace_back(name, "needs --degree >= 1");
      return false;
    }
    return true;
  };
  if (name == "coring") {
    auto CD = make_coring(b.D);
    for (auto& c : relabel(check_coring(*CD), "coring", "D")) out.checks.push_back(c);
    if (need_words())
      for (auto& c : relabel(check_coring(*b.cm->word_coring()), "coring", "L'")) out.checks.push_back(c);
  } else if (name == "bialgebroid") {
    auto CD = make_coring(b.D);
    for (auto& c : relabel(check_bialgebroid(*CD), "bialgebroid", "D")) out.checks.push_back(c);
    for (auto& c : relabel(check_suma0(*b.D, *CD), "bialgebroid", "D")) out.checks.push_back(c);
    if (need_words())
      for (auto& c : relabel(check_bialgebroid(*b.cm->word_coring()), "bialgebroid", "L'")) out.checks.push_back(c);
  } else if (name == "can") {
    if (!need_words()) return out;
    for (auto& c : b.cm->checks()) out.checks.push_back(c);
    auto DC = std::make_shared<const Comatrix<F>>(b.q, d, RingKind::C);
    auto cs = coideal_suite(*b.cm, DC);
    for (auto& c : relabel(cs.checks, "can", "")) out.checks.push_back(c);
    json rows = json::array();
    for (size_t n = 0; n < cs.dim_J.size(); ++n) rows.push_back({n, cs.dim_J[n], cs.dim_ker_theta[n]});
    out.tables.emplace_back("coideal", json{{"columns", {"degree", "dim J", "dim Ker theta"}}, {"rows", rows}});
    if (b.ext.R->is_commutative()) out.checks.push_back(check_two_sided(*b.cm));
    else out.skipped.emplace_back("J is two-sided", "R is not commutative");
  } else if (name == "comodules") {
    if (!need_words()) return out;
    std::vector<std::vector<FormalCoaction<F>>> lam;
    for (int n = 0; n <= d; ++n) lam.push_back(b.cm->lambda(n));
    out.checks = merge_checks(comodule_suite(q, b.cm->word_coring(), lam, "L'"));
  } else if (name == "splitting") {
    const bool splits = unit_splits_right(b.ext).has_value();
    auto cert = check_split_exact(q, d);
    Check ex{"splitting", "Q is split exact through degree " + std::to_string(d)};
    if (!cert.ok) ex.fail("first failing degree " + std::to_string(cert.failing_degree) + ": " + cert.reason);
    ex.count = d;
    ex.unit = "degrees";
    out.checks.push_back(ex);
    Check iff{"splitting", "the unit splits iff Q is split exact"};
    if (splits != cert.ok)
      iff.fail(std::string("unit ") + (splits ? "splits" : "does not split") + " but Q is " + (cert.ok ? "" : "not ") +
               "split exact");
    ++iff.count;
    out.checks.push_back(iff);
    json dims = {{"split_exact", cert.ok}, {"unit_splits", splits}, {"failing_degree", cert.failing_degree}};
    out.data.emplace_back("splitting", dims);
    if (splits) {
      auto om = omega_comparison(q, d);
      Check oc{"splitting", "omega is a degreewise isomorphism of complexes"};
      if (!om.ok) oc.fail(om.reason);
      oc.count = d + 1;
      oc.unit = "degrees";
      out.checks.push_back(oc);
    } else {
      out.skipped.emplace_back("omega comparison", "the unit does not split");
    }
  } else if (name == "flatness") {
    auto fc = flatness_certificate(q, d);
    out.checks = fc.checks;
    json rows = json::array();
    for (size_t m = 0; m < fc.rank.size(); ++m) rows.push_back({m, fc.qbar_dims[m], fc.rank[m], bool(fc.free[m])});
    out.tables.emplace_back("pieces", json{{"columns", {"m", "dim Qbar_m", "copies of eT", "free"}}, {"rows", rows}});
  } else if (name == "takeuchi") {
    if (!need_words()) return out;
    if (b.ext.R->n != 1) {
      out.skipped.emplace_back("Gamma", "the monoidal structure is over B, which needs R = k");
      return out;
    }
    return suite_takeuchi(b, o);
  } else {
    throw std::invalid_argument("unknown suite " + name);
  }
  return out;
}

template <class F>
void cmd_verify(const RRingExt<F>& ext, const Options& o, Report& rep) {
  const int d = o.degree < 0 ? 2 : o.degree;
  Check proj = projectivity_check(ext);
  rep.check(proj);
  if (!proj.pass) return;
  std::vector<std::string> suites = o.suites.empty() ? kSuites : o.suites;
  Build<F> b(ext, d);
  auto outs = parallel_map<SuiteOutput>(static_cast<int>(suites.size()), o.threads,
                                        [&](int i) { return run_suite(suites[i], b, o); });
  for (size_t i = 0; i < suites.size(); ++i) {
    for (const auto& c : outs[i].checks) rep.check(c);
    for (const auto& [name, why] : outs[i].skipped) rep.skip(suites[i], name, why);
    for (const auto& [name, t] : outs[i].tables) rep.table(suites[i] + ": " + name, t["columns"], t["rows"]);
    for (const auto& [name, v] : outs[i].data) rep.data(suites[i] + ": " + name, v);
  }
}

template <class F>
void cmd_transport(const RRingExt<F>& ext, const ChainComplex<F>& V, const Options& o, Report& rep) {
  const F& f = ext.field();
  const int top = V.top();
  const int d = o.degree < 0 ? std::max(top + 1, 1) : o.degree;
  if (top > d - 1)
    throw std::out_of_range("complex reaches degree " + std::to_string(top) + "; transport needs --degree " +
                            std::to_string(top + 1) + " or more");
  const bool overR = V.R->n > 1;
  if (o.ring == RingKind::B && ext.R->n != 1 && overR)
    throw std::invalid_argument("ring B takes complexes of vector spaces");
  if (o.ring == RingKind::C && ext.R->n != V.R->n)
    throw std::invalid_argument("ring C takes complexes of R-modules (scope \"R\")");
  Check proj = projectivity_check(ext);
  rep.check(proj);
  if (!proj.pass) return;
  auto q = std::make_shared<const QComplex<F>>(ext, std::max(d, 1));
  Equivalence<F> E(q, std::max(d, 1), o.ring);
  json vrows = json::array();
  for (int n = 0; n <= top; ++n) vrows.push_back({n, V.dims[n]});
  rep.table("complex", {"degree", "dim"}, vrows);
  auto T = E.transport(V);
  rep.checks(T.checks);
  rep.data("comodule", json{{"coring", o.ring == RingKind::B ? "L'" : "L-bar"},
                            {"coring_dim", E.coring()->dim},
                            {"dim", T.M.dim()},
                            {"budget", T.M.budget()}});
  if (!o.roundtrip) return;
  auto rt = E.roundtrip(V);
  Check c{"equivalence", "round trip returns an isomorphic complex"};
  if (!rt.ok) c.fail(rt.detail);
  c.count = top + 1;
  c.unit = "degrees";
  json payload;
  if (rt.mismatch_degree >= 0) payload["first_mismatch_degree"] = rt.mismatch_degree;
  rep.check(c, payload);
  json rows = json::array();
  for (int n = 0; n <= top; ++n) rows.push_back({n, V.dims[n], n < static_cast<int>(rt.out_dims.size()) ? rt.out_dims[n] : 0});
  rep.table("roundtrip", {"degree", "dim V_n", "dim W_n"}, rows);
  if (rt.ok) {
    json mats = json::array();
    for (const auto& m : rt.iso) mats.push_back(io::matrix_json(m));
    rep.data("isomorphism", json{{"method", rt.method}, {"matrices", mats}});
  }
  (void)f;
}

// Parses, dispatches on the field and fills the report. Returns the exit code.
inline int execute(const std::string& command, const std::string& algebra_text, const std::string* complex_text,
                   const Options& o, Report& rep) {
  std::vector<std::string> parts{command, algebra_text};
  if (complex_text) parts.push_back(*complex_text);
  json trunc;
  trunc["degree"] = o.degree;
  if (command == "verify") {
    trunc["suites"] = o.suites.empty() ? kSuites : o.suites;
    trunc["seed"] = o.seed;
    trunc["cases"] = o.cases;
  }
  if (command == "transport") {
    trunc["ring"] = ring_name(o.ring);
    trunc["roundtrip"] = o.roundtrip;
  }
  parts.push_back(trunc.dump());
  std::string field_name = "?";
  try {
    json doc = io::parse_json(algebra_text, "algebra file");
    FieldSpec spec = io::field_of(doc);
    field_name = spec.name();
    rep.set_header(io::digest(parts), field_name, trunc);
    auto run = [&](const auto& f) {
      using F = std::decay_t<decltype(f)>;
      RRingExt<F> ext = io::ring_extension(f, doc);
      if (command == "build") {
        cmd_build(ext, o, rep);
      } else if (command == "verify") {
        cmd_verify(ext, o, rep);
      } else {
        json cdoc = io::parse_json(*complex_text, "complex file");
        ChainComplex<F> V = io::complex(f, cdoc, ext.R);
        cmd_transport(ext, V, o, rep);
      }
    };
    if (spec.kind == FieldSpec::Kind::rationals)
      run(Qf{});
    else
      run(Fp(spec.p));
  } catch (const io::ParseError& e) {
    rep.set_header(io::digest(parts), field_name, trunc);
    rep.error("parse", e.what());
  } catch (const std::out_of_range& e) {
    rep.error("budget", e.what());
  } catch (const std::exception& e) {
    rep.error("hypothesis", e.what());
  }
  return rep.exit_code();
}

}  // namespace coendo::cli
