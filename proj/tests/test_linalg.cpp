#include <random>

#include "coendo/linalg.hpp"
#include "doctest.h"

using namespace coendo;

namespace {

Mat<Fp> from_ints(const Fp& f, std::vector<std::vector<int>> rows) {
  Mat<Fp> m(f, static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = f.from_int(rows[i][j]);
  return m;
}

Mat<Fp> random_mat(const Fp& f, std::mt19937& g, int r, int c, int zero_bias = 0) {
  Mat<Fp> m(f, r, c);
  std::uniform_int_distribution<int> d(0, static_cast<int>(f.p()) - 1 + zero_bias);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      int v = d(g);
      m(i, j) = v < static_cast<int>(f.p()) ? f.from_int(v) : 0;
    }
  return m;
}

// Enumerates F_p^n and counts solutions of m x = 0.
long brute_kernel_size(const Mat<Fp>& m) {
  const Fp& f = m.field();
  long total = 1;
  for (int i = 0; i < m.cols(); ++i) total *= f.p();
  long count = 0;
  for (long code = 0; code < total; ++code) {
    Vec<Fp> x(m.cols());
    long c = code;
    for (int i = 0; i < m.cols(); ++i) {
      x[i] = static_cast<uint32_t>(c % f.p());
      c /= f.p();
    }
    if (is_zero_vec(f, m * x)) ++count;
  }
  return count;
}

long ipow(long b, int e) {
  long r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_CASE("rref of zero and identity") {
  Fp f(5);
  auto [z, zp] = rref(Mat<Fp>(f, 2, 3));
  CHECK(z.is_zero());
  CHECK(zp.empty());
  auto [id, ip] = rref(Mat<Fp>::identity(f, 3));
  CHECK(id == Mat<Fp>::identity(f, 3));
  CHECK(ip == std::vector<int>{0, 1, 2});
}

TEST_CASE("rref of a rank one matrix over F5") {
  Fp f(5);
  auto [r, p] = rref(from_ints(f, {{1, 2}, {2, 4}}));
  CHECK(r == from_ints(f, {{1, 2}, {0, 0}}));
  CHECK(p == std::vector<int>{0});
}

TEST_CASE("kernel examples") {
  Fp f(5);
  CHECK(kernel(Mat<Fp>::identity(f, 4)).dim() == 0);
  auto k = kernel(from_ints(f, {{1, 2}, {2, 4}}));
  REQUIRE(k.dim() == 1);
  // span{(3,1)} in RREF is (1,2)
  CHECK(k.contains(Vec<Fp>{3, 1}));
  CHECK(!k.contains(Vec<Fp>{1, 1}));
  // multiplication of k + kt: basis pairs (1,1),(1,t),(t,1),(t,t) -> 1,t,t,0
  auto mu = from_ints(f, {{1, 0, 0, 0}, {0, 1, 1, 0}});
  CHECK(kernel(mu).dim() == 2);
}

TEST_CASE("kernel size agrees with enumeration and rank-nullity") {
  Fp f(5);
  std::mt19937 g(7);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    auto m = random_mat(f, g, r, c, trial % 3 == 0 ? 6 : 0);
    auto k = kernel(m);
    CHECK(brute_kernel_size(m) == ipow(5, k.dim()));
    CHECK(k.dim() + rank(m) == c);
    CHECK(rank(m) == rank(m.transpose()));
    for (int i = 0; i < k.dim(); ++i) CHECK(is_zero_vec(f, m * k.basis_vector(i)));
  }
}

TEST_CASE("sparse kernel of columns matches dense kernel") {
  Fp f(7);
  std::mt19937 g(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = random_mat(f, g, 3 + trial % 3, 5, 8);
    std::vector<SpVec<Fp>> cols;
    for (int j = 0; j < m.cols(); ++j) cols.push_back(m.sparse_col(j));
    CHECK(kernel_of_columns(f, m.rows(), cols) == kernel(m));
  }
}

TEST_CASE("membership coordinates") {
  Qf q;
  std::vector<Vec<Qf>> gens{{1, 2, 0, 1}, {0, 0, 1, mpq_class(1, 2)}};
  auto s = Subspace<Qf>::span_dense(q, 4, gens);
  auto z = s.coords(zeros(q, 4));
  REQUIRE(z);
  CHECK(is_zero_vec(q, *z));
  auto c = s.coords(s.basis_vector(0));
  REQUIRE(c);
  CHECK(vec_eq(q, *c, unit_vec(q, 2, 0)));
  CHECK(!s.coords(unit_vec(q, 4, 3)));
  CHECK_THROWS_AS(s.coords(zeros(q, 3)), std::invalid_argument);
  auto v = vadd(q, vscale(q, mpq_class(3), gens[0]), vscale(q, mpq_class(-2, 7), gens[1]));
  auto cv = s.coords(v);
  REQUIRE(cv);
  CHECK(vec_eq(q, to_dense(q, s.element(*cv), 4), v));
}

TEST_CASE("normal form projection") {
  Fp f(5);
  SUBCASE("no relations") {
    NormalForm<Fp> nf(f, 4);
    CHECK(nf.dim() == 4);
    CHECK(nf.project(SpVec<Fp>{{2, 3}}) == SpVec<Fp>{{2, 3}});
  }
  SUBCASE("everything") {
    Echelon<Fp> e(f, 3);
    for (int i = 0; i < 3; ++i) e.insert(sp_unit(f, i));
    NormalForm<Fp> nf(e);
    CHECK(nf.dim() == 0);
    CHECK(nf.project(SpVec<Fp>{{0, 1}, {2, 4}}).empty());
  }
  SUBCASE("dim 5 modulo 2 relations is idempotent") {
    std::mt19937 g(3);
    for (int trial = 0; trial < 20; ++trial) {
      auto rel = random_mat(f, g, 2, 5);
      if (rank(rel) != 2) continue;
      Echelon<Fp> e(f, 5);
      for (int i = 0; i < 2; ++i) e.insert(to_sparse(f, rel.row(i)));
      NormalForm<Fp> nf(e);
      REQUIRE(nf.dim() == 3);
      // P = section o projection as a 5x5 matrix
      Mat<Fp> P(f, 5, 5);
      for (int j = 0; j < 5; ++j) P.set_col(j, to_dense(f, nf.lift(nf.project_col(j)), 5));
      CHECK(P * P == P);
      for (int q = 0; q < 3; ++q) CHECK(nf.project_col(nf.section(q)) == sp_unit(f, q));
      // kernel of the projection is the relation span
      auto kp = kernel(P);
      CHECK(kp.dim() == 2);
      for (int i = 0; i < kp.dim(); ++i) CHECK(e.contains(kp.row(i)));
      for (int i = 0; i < 2; ++i) CHECK(nf.project(to_sparse(f, rel.row(i))).empty());
    }
  }
}

TEST_CASE("solve and inverse") {
  Qf q;
  Mat<Qf> m(q, 2, 2);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 1;
  auto inv = inverse(m);
  REQUIRE(inv);
  CHECK(m * *inv == Mat<Qf>::identity(q, 2));
  auto x = solve(m, Vec<Qf>{3, 2});
  REQUIRE(x);
  CHECK(vec_eq(q, m * *x, Vec<Qf>{3, 2}));
  Mat<Qf> sing(q, 2, 2);
  sing(0, 0) = 1;
  CHECK(!inverse(sing));
  CHECK(!solve(sing, Vec<Qf>{0, 1}));
}

TEST_CASE("field parsing") {
  Fp f(5);
  CHECK(f.parse("3/2") == f.mul(3, f.inv(2)));
  CHECK(f.parse("-1") == 4);
  Qf q;
  CHECK(q.parse("-6/4") == mpq_class(-3, 2));
  CHECK_THROWS(q.parse("1/0"));
  CHECK_THROWS(FieldSpec::prime(6));
}
