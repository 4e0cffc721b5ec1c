#include "coendo/fixtures.hpp"
#include "coendo/idempotent.hpp"
#include "doctest.h"

using namespace coendo;

namespace {

template <class F>
AlgPtr<F> ground_ptr(const F& f) {
  return std::make_shared<const FinAlgebra<F>>(fixtures::ground(f));
}

// Total complex of X (x) Y on the flat space sum_i X_i (x) sum_j Y_j:
// D = dX (x) 1 + sX (x) dY with sX = (-1)^i on X_i.  Oracle for the product.
template <class F>
Mat<F> flat_tensor_differential(const ChainComplex<F>& X, const ChainComplex<F>& Y) {
  const F& f = X.field();
  auto flat = [&](const ChainComplex<F>& V) {
    Mat<F> d(f, V.total(), V.total());
    int o = 0;
    for (int n = 0; n < V.top(); ++n) {
      for (int i = 0; i < V.dims[n]; ++i)
        for (int j = 0; j < V.dims[n + 1]; ++j) d(o + i, o + V.dims[n] + j) = V.diff[n](i, j);
      o += V.dims[n];
    }
    return d;
  };
  Mat<F> sx(f, X.total(), X.total());
  int o = 0;
  for (int n = 0; n <= X.top(); ++n)
    for (int i = 0; i < X.dims[n]; ++i, ++o) sx(o, o) = n % 2 ? f.neg(f.one()) : f.one();
  return kron(flat(X), Mat<F>::identity(f, Y.total())) + kron(sx, flat(Y));
}

}  // namespace

TEST_CASE("ring relations of B and C as multiplication tables") {
  Fp f(5);
  auto k = ground_ptr(f);
  auto T2 = std::make_shared<const FinAlgebra<Fp>>(fixtures::upper_triangular(f));
  for (const auto& ring : {IdemRing<Fp>(RingKind::B, k, 4), IdemRing<Fp>(RingKind::C, T2, 3)})
    for (const auto& c : ring.check_relations()) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  CHECK_THROWS(IdemRing<Fp>(RingKind::B, T2, 2));
}

TEST_CASE("O on objects: zero complex, unit object, round trip") {
  Fp f(5);
  auto k = ground_ptr(f);
  auto B = std::make_shared<const IdemRing<Fp>>(RingKind::B, k, 3);

  ChainComplex<Fp> zero = ChainComplex<Fp>::over_ground(k, {}, {});
  auto Z = O_functor(B, zero);
  CHECK(Z.dim == 0);

  auto U = O_functor(B, unit_complex(k));
  CHECK(U.graded_dims() == std::vector<int>{1, 0, 0, 0});
  for (int n = 0; n < 3; ++n) CHECK(U.act[B->elem(B->v(n), 0)].is_zero());
  for (const auto& c : U.checks("unit")) CHECK(c.pass);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto V = random_complex(k, 3, 2, rng);
    REQUIRE(!V.validate());
    auto M = O_functor(B, V);
    for (const auto& c : M.checks("O(V)")) CHECK(c.pass);
    CHECK(same_complex(O_inverse(M), V));
  }
}

TEST_CASE("O on morphisms round trips") {
  Fp f(5);
  auto k = ground_ptr(f);
  auto B = std::make_shared<const IdemRing<Fp>>(RingKind::B, k, 2);
  auto V = normal_form_complex(k, {1, 2, 1}, {1, 1});
  // multiplication by 2 is a chain map
  ChainMap<Fp> g;
  for (int d : V.dims) g.push_back(Mat<Fp>::identity(f, d).scaled(f.from_int(2)));
  REQUIRE(!check_chain_map(V, V, g));
  auto M = O_functor(B, V);
  Mat<Fp> Og = O_map(V, V, g);
  for (int a = 0; a < B->alg()->n; ++a) CHECK(Og * M.act[a] == M.act[a] * Og);
  auto back = O_inverse_map(M, M, Og);
  for (int n = 0; n <= 2; ++n) CHECK(back[n] == g[n]);
}

TEST_CASE("C-modules from complexes of R-modules") {
  Fp f(5);
  auto T2 = std::make_shared<const FinAlgebra<Fp>>(fixtures::upper_triangular(f));
  auto C = std::make_shared<const IdemRing<Fp>>(RingKind::C, T2, 2);
  // R e11 --(. e12)--> R e22 in degrees 1 -> 0
  Vec<Fp> e11 = T2->basis(0), e12 = T2->basis(1), e22 = T2->basis(2);
  auto V = projective_complex<Fp>(T2, {{e22}, {e11}}, {{{e12}}});
  REQUIRE(!V.validate());
  CHECK(V.dims == std::vector<int>{2, 1});
  CHECK(!V.diff[0].is_zero());
  auto M = O_functor(C, V);
  for (const auto& c : M.checks("O(V) over C")) CHECK(c.pass);
  CHECK(same_complex(O_inverse(M), V));

  auto W = base_change(T2, normal_form_complex(ground_ptr(f), {1, 1}, {1}));
  REQUIRE(!W.validate());
  for (const auto& c : O_functor(C, W).checks("R (x) V")) CHECK(c.pass);
}

TEST_CASE("product of modules over B") {
  Qf f;
  auto k = ground_ptr(f);
  auto B = std::make_shared<const IdemRing<Qf>>(RingKind::B, k, 4);
  std::mt19937_64 rng(11);

  SUBCASE("unit object") {
    auto X = random_complex(k, 2, 2, rng);
    auto P = product_complex(X, unit_complex(k), 4);
    CHECK(same_complex(P.V, X));
  }
  SUBCASE("Leibniz sign on h_1 x (x) h_1 y") {
    auto X = normal_form_complex(k, {1, 1}, {1});
    auto P = product_complex(X, X);
    // degree 1 piece: X_0 (x) X_1 then X_1 (x) X_0
    Mat<Qf> want(f, 2, 1);
    want(0, 0) = f.one();
    want(1, 0) = f.neg(f.one());
    CHECK(P.V.diff[1] == want);
  }
  SUBCASE("agrees with the flat tensor differential") {
    for (int trial = 0; trial < 10; ++trial) {
      auto X = random_complex(k, 2, 1, rng), Y = random_complex(k, 2, 1, rng);
      auto P = product_complex(X, Y);
      REQUIRE(!P.V.validate());
      Mat<Qf> flat = flat_tensor_differential(X, Y);
      // compare entrywise through the index maps
      auto flat_index = [&](int i, int a, int j, int b) {
        int ox = 0, oy = 0;
        for (int n = 0; n < i; ++n) ox += X.dims[n];
        for (int n = 0; n < j; ++n) oy += Y.dims[n];
        return (ox + a) * Y.total() + oy + b;
      };
      for (int n = 0; n < P.V.top(); ++n)
        for (int i = 0; i <= n + 1; ++i)
          for (int i2 = 0; i2 <= n; ++i2) {
            if (P.off[n + 1][i] < 0 || P.off[n][i2] < 0) continue;
            for (int a = 0; a < X.dims[i]; ++a)
              for (int b = 0; b < Y.dims[n + 1 - i]; ++b)
                for (int a2 = 0; a2 < X.dims[i2]; ++a2)
                  for (int b2 = 0; b2 < Y.dims[n - i2]; ++b2)
                    CHECK(P.V.diff[n](P.index(i2, a2, n - i2, b2), P.index(i, a, n + 1 - i, b)) ==
                          flat(flat_index(i2, a2, n - i2, b2), flat_index(i, a, n + 1 - i, b)));
          }
      auto M = module_product(O_functor(B, X), O_functor(B, Y));
      for (const auto& c : M.checks("X (-) Y")) CHECK(c.pass);
    }
  }
  SUBCASE("associator is a chain isomorphism") {
    for (int trial = 0; trial < 5; ++trial) {
      auto X = random_complex(k, 2, 1, rng), Y = random_complex(k, 1, 1, rng), Z = random_complex(k, 2, 1, rng);
      auto L = product_complex(product_complex(X, Y).V, Z, 3).V;
      auto R = product_complex(X, product_complex(Y, Z).V, 3).V;
      auto a = associator(X, Y, Z, 3);
      CHECK(L.dims == R.dims);
      CHECK(!check_chain_map(L, R, a));
      for (const auto& m : a) CHECK(inverse(m).has_value());
    }
  }
}

TEST_CASE("right action of B and C on Q") {
  Fp f(5);
  auto k = ground_ptr(f);
  auto ext = fixtures::trivial_extension_ground(f);
  QComplex<Fp> q(ext, 4);
  auto B = std::make_shared<const IdemRing<Fp>>(RingKind::B, k, 4);
  auto Q = right_Q_action(q, B);
  CHECK(Q.graded_dims() == std::vector<int>{1, 2, 2, 2, 2});
  for (const auto& c : Q.checks("Q_B")) CHECK(c.pass);
  // (Q v_n) v_{n+1} = 0
  for (int n = 0; n + 1 < 4; ++n) CHECK((Q.act[B->elem(B->v(n + 1), 0)] * Q.act[B->elem(B->v(n), 0)]).is_zero());

  auto ext2 = fixtures::trivial_extension_upper(f);
  QComplex<Fp> q2(ext2, 3);
  auto C = std::make_shared<const IdemRing<Fp>>(RingKind::C, ext2.R, 3);
  auto Q2 = right_Q_action(q2, C);
  CHECK(Q2.graded_dims()[0] == 3);
  for (const auto& c : Q2.checks("Q_C")) CHECK(c.pass);
}
