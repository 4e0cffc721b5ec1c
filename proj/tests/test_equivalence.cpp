#include <random>

#include "coendo/equivalence.hpp"
#include "coendo/fixtures.hpp"
#include "coendo/flatness.hpp"
#include "doctest.h"

using namespace coendo;

namespace {

void require_all(const std::vector<Check>& cs) {
  for (const auto& c : cs) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}

template <class F>
Equivalence<F> make_equivalence(const RRingExt<F>& ext, int d, RingKind kind) {
  return Equivalence<F>(std::make_shared<const QComplex<F>>(ext, d + 1), d, kind);
}

}  // namespace

TEST_CASE("*Q_n are right comodules") {
  Fp f(5);
  require_all(make_equivalence(fixtures::trivial_extension_ground(f), 3, RingKind::B).dual_checks());
  require_all(make_equivalence(fixtures::trivial_extension_upper(f), 2, RingKind::C).dual_checks());
}

TEST_CASE("transport of small complexes over the trivial extension") {
  Fp f(5);
  auto E = make_equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::B);
  auto k = E.coeff();

  auto U = E.transport(unit_complex(k));
  require_all(U.checks);
  CHECK(U.M.dim() == 1);

  auto P = E.transport(ChainComplex<Fp>::over_ground(k, {0, 1}, {Mat<Fp>(f, 0, 1)}));
  require_all(P.checks);
  CHECK(P.M.dim() == 1);

  auto Z = E.transport(ChainComplex<Fp>::over_ground(k, {}, {}));
  CHECK(Z.M.dim() == 0);

  for (int v0 = 0; v0 <= 2; ++v0)
    for (int v1 = 0; v1 <= 2; ++v1) {
      auto T = E.transport(normal_form_complex(k, {v0, v1}, {0}));
      require_all(T.checks);
      CHECK(T.M.dim() == v0 + v1);
    }

  CHECK_THROWS_AS(E.transport(normal_form_complex(k, {1, 1, 1, 1}, {0, 0, 0})), std::out_of_range);
}

TEST_CASE("round trip over B on the exhaustive family") {
  Fp f(5);
  auto E = make_equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::B);
  for (const auto& V : exhaustive_family(E.coeff(), 2, 2)) {
    auto rt = E.roundtrip(V);
    CAPTURE(rt.detail);
    CHECK(rt.ok);
  }
}

TEST_CASE("round trip over C") {
  Fp f(5);
  SUBCASE("R = k") {
    auto E = make_equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::C);
    for (const auto& V : exhaustive_family(E.coeff(), 2, 2)) {
      auto rt = E.roundtrip(V);
      CAPTURE(rt.detail);
      CHECK(rt.ok);
    }
  }
  SUBCASE("R upper triangular") {
    auto E = make_equivalence(fixtures::trivial_extension_upper(f), 2, RingKind::C);
    auto T2 = E.coeff();
    Vec<Fp> e11 = T2->basis(0), e12 = T2->basis(1), e22 = T2->basis(2);
    std::vector<ChainComplex<Fp>> family = {
        projective_complex<Fp>(T2, {{e22}, {e11}}, {{{e12}}}),
        projective_complex<Fp>(T2, {{e11}}, {}),
        base_change(T2, normal_form_complex(std::make_shared<const FinAlgebra<Fp>>(fixtures::ground(f)), {1, 1}, {1})),
    };
    for (const auto& V : family) {
      auto rt = E.roundtrip(V);
      require_all(rt.checks);
      CAPTURE(rt.detail);
      CHECK(rt.ok);
    }
  }
}

TEST_CASE("Hom spaces agree") {
  Fp f(5);
  auto E = make_equivalence(fixtures::trivial_extension_ground(f), 2, RingKind::B);
  auto k = E.coeff();
  auto A = normal_form_complex(k, {1, 1}, {1}), B = normal_form_complex(k, {1, 1}, {0});
  for (const auto* X : {&A, &B})
    for (const auto* Y : {&A, &B}) {
      auto TX = E.transport(*X), TY = E.transport(*Y);
      CHECK(static_cast<int>(chain_map_space(*X, *Y).size()) == colinear_hom_dim(TX.M, TY.M));
    }
}

TEST_CASE("Gamma is monoidal") {
  Fp f(5);
  auto E = make_equivalence(fixtures::trivial_extension_ground(f), 4, RingKind::B);
  auto k = E.coeff();
  require_all(E.gamma0_checks());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    auto X = random_complex(k, 2, 2, rng), Y = random_complex(k, 2, 2, rng);
    require_all(E.gamma2(X, Y).checks);
  }
  auto X = normal_form_complex(k, {1, 1}, {1}), Y = normal_form_complex(k, {1, 1}, {0});
  auto Z = normal_form_complex(k, {1, 1}, {1});
  ChainMap<Fp> fx, gy;
  for (int d : X.dims) fx.push_back(Mat<Fp>::identity(f, d).scaled(f.from_int(2)));
  gy = {Mat<Fp>::identity(f, 1), Mat<Fp>(f, 1, 1)};
  REQUIRE(!check_chain_map(Y, Y, gy));
  require_all(E.coherence(X, Y, Z, fx, gy));
}

TEST_CASE("flatness certificates") {
  Fp f(5);
  for (const auto& ext : {fixtures::trivial_extension_ground(f), fixtures::trivial_extension_upper(f),
                          fixtures::over_ground(f, fixtures::truncated_poly(f, 3))}) {
    const int top = ext.R->n > 1 ? 2 : 4;
    QComplex<Fp> q(ext, top + 1);
    auto fc = flatness_certificate(q, top);
    require_all(fc.checks);
    CHECK(fc.ok);
    if (ext.R->n == 1)
      for (int m = 0; m <= top; ++m) CHECK(fc.free[m]);
  }
  SUBCASE("trivial extension pieces are single copies of eT") {
    QComplex<Fp> q(fixtures::trivial_extension_ground(f), 5);
    auto fc = flatness_certificate(q, 4);
    CHECK(fc.rank == std::vector<int>{1, 1, 1, 1, 1});
  }
  SUBCASE("non-split unit is rejected") {
    auto M2 = fixtures::upper_in_full(f);
    QComplex<Fp> q(M2, 3);
    auto fc = flatness_certificate(q, 2);
    CHECK(!fc.ok);
  }
}
