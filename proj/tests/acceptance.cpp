// One line per acceptance criterion: "criterion N: PASS|FAIL <summary> (<ms> ms)".
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coendo/commands.hpp"
#include "coendo/flatness.hpp"
#include "coendo/io.hpp"

using namespace coendo;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void need(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
  void all(const std::vector<Check>& cs, const std::string& where) {
    for (const auto& c : cs) need(c.pass, where + ": " + c.name + ": " + c.detail);
  }
};

struct Criterion {
  int id;
  std::string summary;
  double budget_ms;  // 0: no limit
  std::function<void(Outcome&)> body;
};

template <class F>
struct Models {
  QPtr<F> q;
  ComatrixPtr<F> D;
  WordModelPtr<F> W;
  std::unique_ptr<CanonicalMaps<F>> cm;
  Models(const RRingExt<F>& ext, int d, int qdeg = -1) {
    q = std::make_shared<const QComplex<F>>(ext, qdeg < 0 ? d : qdeg);
    D = std::make_shared<const Comatrix<F>>(q, d, RingKind::B);
    W = std::make_shared<const WordModel<F>>(q, d);
    cm = std::make_unique<CanonicalMaps<F>>(D, W);
  }
};

template <class F>
Equivalence<F> equivalence(const RRingExt<F>& ext, int d, RingKind kind) {
  return Equivalence<F>(std::make_shared<const QComplex<F>>(ext, d + 1), d, kind);
}

template <class F>
std::vector<std::pair<std::string, RRingExt<F>>> ground_fixtures(const F& f) {
  return {{"trivial extension", fixtures::trivial_extension_ground(f)},
          {"k[t]/t^3", fixtures::over_ground(f, fixtures::truncated_poly(f, 3))}};
}

// x^2 = 0, xy + yx = 0, Delta, eps and lambda(t) in a coring with chosen x, y, 1.
template <class F>
void main_example(Outcome& o, const std::string& where, const CoringData<F>& C, const SpVec<F>& x, const SpVec<F>& y,
                  const SpVec<F>& one, const Comodule<F>& Q1) {
  const F& f = C.field();
  auto xx = C.mul_elems(x, x), xy = C.mul_elems(x, y), yx = C.mul_elems(y, x);
  o.need(xx && xx->empty(), where + ": x^2 != 0");
  o.need(xy && yx && sp_add(f, *xy, *yx).empty(), where + ": xy + yx != 0");
  o.need(xy && !xy->empty(), where + ": xy vanishes");
  const auto& cc = *C.cc;
  o.need(sp_eq(f, C.delta_of(x), sp_add(f, cc.tensor(x, one), cc.tensor(y, x))), where + ": Delta(x)");
  o.need(sp_eq(f, C.delta_of(y), cc.tensor(y, y)), where + ": Delta(y)");
  o.need(is_zero_vec(f, C.eps_of(x)), where + ": eps(x) != 0");
  o.need(vec_eq(f, C.eps_of(y), unit_vec(f, 1, 0)), where + ": eps(y) != 1");
  Vec<F> u = unit_vec(f, 2, 0), t = unit_vec(f, 2, 1);
  SpVec<F> expect = sp_add(f, Q1.cm->tensor(x, to_sparse(f, u)), Q1.cm->tensor(y, to_sparse(f, t)));
  o.need(sp_eq(f, Q1.coaction[1], expect), where + ": lambda(t) != x (x) 1 + y (x) t");
  o.need(sp_eq(f, Q1.coaction[0], Q1.cm->tensor(one, to_sparse(f, u))), where + ": lambda(1) != 1 (x) 1");
}

void criterion1(Outcome& o) {
  Qf f;
  Models<Qf> m(fixtures::trivial_extension_ground(f), 2);
  const auto& q = *m.q;
  auto star = [&](int k) { return q.dual(1).coords_or_throw(Mat<Qf>::from_rows(f, {unit_vec(f, 2, k)}, 2)); };
  Vec<Qf> t = unit_vec(f, 2, 1), k1 = unit_vec(f, 1, 0);
  {
    auto C = m.cm->word_coring();
    auto Q1 = make_comodule(C, qn_bimod(q, 1), m.cm->lambda(1));
    main_example(o, "L'", *C, m.W->gen(t, star(0)), m.W->gen(t, star(1)), m.W->re_elem(k1, k1), Q1);
  }
  {
    auto C = m.cm->comatrix_coring();
    auto Q1 = make_comodule(C, qn_bimod(q, 1), comatrix_coaction(*m.D, 1));
    SpVec<Qf> one = m.D->cls_pure(0, unit_vec(f, 1, 0), unit_vec(f, 1, 0));
    main_example(o, "D", *C, m.D->cls_pure(1, t, star(0)), m.D->cls_pure(1, t, star(1)), one, Q1);
  }
  o.need(m.W->dim() == 5 && m.D->dim() == 5, "truncations are not 5-dimensional");
}

void criterion2(Outcome& o) {
  auto run = [&](const auto& ext, const std::string& name) {
    for (int d = 1; d <= 4; ++d) {
      auto t0 = std::chrono::steady_clock::now();
      using F = std::decay_t<decltype(ext.R->f)>;
      Models<F> m(ext, d);
      for (const auto& c : m.cm->checks())
        if (c.name == "can o zeta = id" || c.name == "zeta o can = id" || c.name == "dimensions agree")
          o.need(c.pass && c.count > 0, name + " d=" + std::to_string(d) + ": " + c.name + ": " + c.detail);
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      o.need(ms < 30000, name + " d=" + std::to_string(d) + " took " + std::to_string(ms) + " ms");
    }
  };
  Fp f5(5);
  Qf q;
  run(fixtures::trivial_extension_ground(f5), "trivial extension over F5");
  run(fixtures::trivial_extension_ground(q), "trivial extension over Q");
  run(fixtures::over_ground(f5, fixtures::truncated_poly(f5, 3)), "F5[t]/t^3");
}

void criterion3(Outcome& o) {
  Fp f(5);
  auto fx = ground_fixtures(f);
  fx.emplace_back("k x k", fixtures::over_ground(f, fixtures::split_product(f)));
  fx.emplace_back("T2 trivial extension", fixtures::trivial_extension_upper(f));
  fx.emplace_back("dual numbers trivial extension", fixtures::trivial_extension_dual_numbers(f));
  for (const auto& [name, ext] : fx)
    for (int d = 1; d <= 3; ++d) {
      const std::string w = name + " d=" + std::to_string(d);
      Models<Fp> m(ext, d);
      auto CD = make_coring(m.D);
      o.all(check_coring(*CD), w + " D");
      o.all({check_takeuchi(*CD)}, w + " D");
      o.all(check_bialgebroid(*CD), w + " D");
      o.all(check_suma0(*m.D, *CD), w + " D");
      auto DC = std::make_shared<const Comatrix<Fp>>(m.q, d, RingKind::C);
      o.all(check_coring(*make_coring(DC)), w + " D_C");
      o.all(check_coring(*m.cm->word_coring()), w + " L'");
      o.all(check_bialgebroid(*m.cm->word_coring()), w + " L'");
    }
  Qf q;
  Models<Qf> m(fixtures::trivial_extension_ground(q), 3);
  o.all(check_coring(*make_coring(m.D)), "trivial extension over Q D");
  o.all(check_bialgebroid(*m.cm->word_coring()), "trivial extension over Q L'");
}

void criterion4(Outcome& o) {
  Fp f(5);
  auto fx = ground_fixtures(f);
  fx.emplace_back("T2 trivial extension", fixtures::trivial_extension_upper(f));
  for (const auto& [name, ext] : fx) {
    Models<Fp> m(ext, 4);
    std::vector<std::vector<FormalCoaction<Fp>>> lw, ld;
    for (int n = 0; n <= 4; ++n) {
      lw.push_back(m.cm->lambda(n));
      ld.push_back(comatrix_coaction(*m.D, n));
    }
    auto sw = comodule_suite(*m.q, m.cm->word_coring(), lw, "L'");
    auto sd = comodule_suite(*m.q, m.cm->comatrix_coring(), ld, "D");
    o.all(sw, name);
    o.all(sd, name);
    bool colinear = false, merge = false;
    for (const auto& c : sw) {
      colinear |= c.name.find("d_3 is colinear") != std::string::npos;
      merge |= c.name.find("lambda(u (x)_A dv)") != std::string::npos;
    }
    o.need(colinear && merge, name + ": colinearity or merge checks missing");
  }
}

void criterion5(Outcome& o) {
  Fp f(5);
  auto fx = ground_fixtures(f);
  fx.emplace_back("k x k", fixtures::over_ground(f, fixtures::split_product(f)));
  fx.emplace_back("T2 trivial extension", fixtures::trivial_extension_upper(f));
  fx.emplace_back("T2 in M2", fixtures::upper_in_full(f));
  int split = 0, nonsplit = 0;
  for (const auto& [name, ext] : fx) {
    QComplex<Fp> q(ext, 5);
    const bool splits = unit_splits_right(ext).has_value();
    for (int d = 1; d <= 4; ++d) {
      auto cert = check_split_exact(q, d);
      o.need(splits == cert.ok, name + " d=" + std::to_string(d) + ": unit_splits_right and check_split_exact disagree");
    }
    if (splits) {
      ++split;
      auto om = omega_comparison(q, 4);
      o.need(om.ok, name + ": omega: " + om.reason);
    } else {
      ++nonsplit;
    }
  }
  o.need(split >= 3 && nonsplit >= 1, "fixture mix lacks a split or a non-split case");
}

void criterion6(Outcome& o) {
  Fp f(5);
  auto rt = [&](const Equivalence<Fp>& E, const ChainComplex<Fp>& V, const std::string& w) {
    auto r = E.roundtrip(V);
    o.need(r.ok, w + ": " + r.detail);
  };
  int count = 0;
  {
    auto E = equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::B);
    for (const auto& V : exhaustive_family(E.coeff(), 2, 2)) rt(E, V, "B family #" + std::to_string(count++));
    std::mt19937_64 rng(20261019);
    for (int i = 0; i < 100; ++i) rt(E, random_complex(E.coeff(), 2, 2, rng), "B random #" + std::to_string(i));
  }
  {
    auto E = equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::C);
    int i = 0;
    for (const auto& V : exhaustive_family(E.coeff(), 2, 2)) rt(E, V, "C(k) family #" + std::to_string(i++));
  }
  {
    auto E = equivalence(fixtures::trivial_extension_upper(f), 2, RingKind::C);
    auto T2 = E.coeff();
    Vec<Fp> e11 = T2->basis(0), e12 = T2->basis(1), e22 = T2->basis(2);
    auto k = std::make_shared<const FinAlgebra<Fp>>(fixtures::ground(f));
    std::vector<ChainComplex<Fp>> family = {projective_complex<Fp>(T2, {{e22}, {e11}}, {{{e12}}}),
                                            projective_complex<Fp>(T2, {{e11}}, {}),
                                            projective_complex<Fp>(T2, {{e22}}, {}),
                                            projective_complex<Fp>(T2, {{e11}, {e11}}, {{{e11}}})};
    for (const auto& V : exhaustive_family(k, 1, 2)) family.push_back(base_change(T2, V));
    int i = 0;
    for (const auto& V : family) rt(E, V, "C(T2) #" + std::to_string(i++));
  }
  o.need(count > 0, "empty family");
}

void criterion7(Outcome& o) {
  Fp f(5);
  QComplex<Fp> q(fixtures::trivial_extension_ground(f), 5);
  auto fc = flatness_certificate(q, 4);
  o.all(fc.checks, "trivial extension");
  for (const char* name : {"dual-basis identity", "Q^(m) is isomorphic to a power of eT", "dh + hd = id"}) {
    bool seen = false;
    for (const auto& c : fc.checks) seen |= c.name == name && c.pass && c.count > 0;
    o.need(seen, std::string("missing ") + name);
  }
  o.need(fc.rank == std::vector<int>{1, 1, 1, 1, 1}, "pieces are not single copies of eT");
  for (int m = 0; m <= 4; ++m) o.need(fc.free[m], "Q^(" + std::to_string(m) + ") is not free");
}

// Gamma^2 on (r (x) x) (x) (u (x) y) against r u (x) (x (x) y), and the mirrored case.
void edge_formulas(Outcome& o, const Equivalence<Fp>& E, const Gamma2<Fp>& G, const std::string& w) {
  const auto& q = E.complex();
  const Fp& f = E.field();
  const int r = q.dim(0);
  const auto& X = G.X.V;
  const auto& Y = G.Y.V;
  for (int k = 0; k < r; ++k) {
    Vec<Fp> rv = unit_vec(f, r, k);
    for (int m = 0; m <= Y.top(); ++m)
      for (int u = 0; u < q.dim(m); ++u) {
        Vec<Fp> uv = unit_vec(f, q.dim(m), u);
        for (int a = 0; a < X.dims[0]; ++a)
          for (int b = 0; b < Y.dims[m]; ++b) {
            SpVec<Fp> lhs = G.apply(G.X.cls(0, rv, a), G.Y.cls(m, uv, b));
            SpVec<Fp> rhs = G.P.cls(m, q.bimodule(m).left[k] * uv, G.prod.index(0, a, m, b));
            o.need(sp_eq(f, lhs, rhs), w + ": n = 0 formula");
          }
        for (int a = 0; a < Y.dims[0]; ++a)
          for (int b = 0; m <= X.top() && b < X.dims[m]; ++b) {
            SpVec<Fp> lhs = G.apply(G.X.cls(m, uv, b), G.Y.cls(0, rv, a));
            SpVec<Fp> rhs = G.P.cls(m, q.bimodule(m).right[k] * uv, G.prod.index(m, b, 0, a));
            o.need(sp_eq(f, lhs, rhs), w + ": m = 0 formula");
          }
      }
  }
}

void criterion8(Outcome& o) {
  Fp f(5);
  auto E = equivalence(fixtures::trivial_extension_ground(f), 4, RingKind::B);
  auto k = E.coeff();
  o.all(E.gamma0_checks(), "Gamma^0");
  auto family = exhaustive_family(k, 2, 2);
  const int n = static_cast<int>(family.size());
  auto res = cli::parallel_map<Outcome>(n * n, cli::thread_cap(), [&](int idx) {
    Outcome p;
    const auto& X = family[idx / n];
    const auto& Y = family[idx % n];
    const std::string w = "pair (" + std::to_string(idx / n) + ", " + std::to_string(idx % n) + ")";
    auto G = E.gamma2(X, Y);
    p.all(G.checks, w);
    edge_formulas(p, E, G, w);
    ChainMap<Fp> fx, gy;
    for (int d : X.dims) fx.push_back(Mat<Fp>::identity(f, d).scaled(f.from_int(2)));
    auto basis = chain_map_space(Y, Y);
    for (int m = 0; m <= Y.top(); ++m) {
      Mat<Fp> g(f, Y.dims[m], Y.dims[m]);
      for (size_t i = 0; i < basis.size(); ++i) g.add_scaled(f.from_int(static_cast<long long>(i) + 1), basis[i][m]);
      gy.push_back(g);
    }
    p.all(E.coherence(X, Y, unit_complex(k), fx, gy), w);
    return p;
  });
  for (const auto& p : res) o.need(p.ok, p.detail);
  // associativity with three nonzero factors
  auto X = normal_form_complex(k, {1, 1}, {1}), Y = normal_form_complex(k, {1, 1}, {0});
  ChainMap<Fp> fx{Mat<Fp>::identity(f, 1), Mat<Fp>::identity(f, 1)}, gy{Mat<Fp>::identity(f, 1), Mat<Fp>(f, 1, 1)};
  o.all(E.coherence(X, Y, normal_form_complex(k, {1, 1}, {1}), fx, gy), "triple");
}

void criterion9(Outcome& o) {
  Fp f(5);
  for (int d = 1; d <= 3; ++d) {
    Models<Fp> m(fixtures::trivial_extension_upper(f), d);
    auto DC = std::make_shared<const Comatrix<Fp>>(m.q, d, RingKind::C);
    auto s = coideal_suite(*m.cm, DC);
    const std::string w = "T2 d=" + std::to_string(d);
    o.all(s.checks, w);
    for (int n = 0; n <= d; ++n) o.need(s.dim_J[n] == s.dim_ker_theta[n], w + ": dimensions differ in degree " + std::to_string(n));
    o.need(s.dim_J.back() > 0, w + ": J vanishes");
  }
  Models<Fp> m(fixtures::trivial_extension_dual_numbers(f), 3);
  o.all({check_two_sided(*m.cm)}, "dual numbers");
  auto DC = std::make_shared<const Comatrix<Fp>>(m.q, 3, RingKind::C);
  o.all(coideal_suite(*m.cm, DC).checks, "dual numbers");
}

void criterion10(Outcome& o) {
  const std::string dir = COENDO_INPUTS_DIR;
  auto render = [&](const std::string& cmd, const std::string& alg, const std::string* cx, cli::Options opt) {
    cli::Report rep(cmd);
    cli::execute(cmd, io::slurp(dir + "/" + alg), cx, opt, rep);
    return rep.render();
  };
  cli::Options v;
  v.degree = 3;
  v.threads = 4;
  cli::Options one = v;
  one.threads = 1;
  for (const char* alg : {"trivial_f5.json", "trivial_q.json", "upper_trivial_f5.json", "upper_in_full_f5.json"}) {
    const std::string a = render("verify", alg, nullptr, v), b = render("verify", alg, nullptr, v);
    o.need(a == b, std::string("verify ") + alg + " differs between runs");
    o.need(a == render("verify", alg, nullptr, one), std::string("verify ") + alg + " depends on the thread count");
  }
  cli::Options t;
  t.roundtrip = true;
  const std::string cx = io::slurp(dir + "/cone_deg1.json");
  o.need(render("transport", "trivial_f5.json", &cx, t) == render("transport", "trivial_f5.json", &cx, t),
         "transport differs between runs");
  cli::Options tc = t;
  tc.ring = RingKind::C;
  const std::string px = io::slurp(dir + "/upper_projective.json");
  o.need(render("transport", "upper_trivial_f5.json", &px, tc) == render("transport", "upper_trivial_f5.json", &px, tc),
         "transport over C differs between runs");
}

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "main example exact in L'<=2 and D<=2", 1000, criterion1},
      {2, "can o zeta = id and zeta o can = id for d <= 4 on three fixtures", 0, criterion2},
      {3, "coring and bialgebroid axioms for d <= 3 on all fixtures", 60000, criterion3},
      {4, "Q_n comodules, colinear differentials and merge identities for n <= 4", 10000, criterion4},
      {5, "unit splitting iff split exactness for degrees <= 4, omega isomorphism", 0, criterion5},
      {6, "round trip on the trivial extension over B and C", 120000, criterion6},
      {7, "flatness certificate for the trivial extension to degree 4", 0, criterion7},
      {8, "Gamma^2 and Gamma^0 bijective colinear and coherent on the family", 0, criterion8},
      {9, "coideal certificates on T2 and two-sidedness over dual numbers", 0, criterion9},
      {10, "byte-identical reports across runs", 0, criterion10},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_ms > 0) o.need(ms < c.budget_ms, "over the time budget");
    std::printf("criterion %d: %s %s (%.0f ms)\n", c.id, o.ok ? "PASS" : "FAIL", c.summary.c_str(), ms);
    if (!o.ok) {
      std::printf("  %s\n", o.detail.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed;
}
