#pragma once

#include <memory>
#include <string>

#include "coendo/algebra.hpp"

namespace coendo::fixtures {

template <class F>
FinAlgebra<F> ground(const F& f) {
  FinAlgebra<F> k(f, 1);
  k.labels = {"1"};
  k.prod[0][0] = sp_unit(f, 0);
  k.unit = unit_vec(f, 1, 0);
  return k;
}

// k[t]/(t^m), basis 1, t, ..., t^{m-1}
template <class F>
FinAlgebra<F> truncated_poly(const F& f, int m, const std::string& var = "t") {
  FinAlgebra<F> a(f, m);
  for (int i = 0; i < m; ++i)
    a.labels[i] = i == 0 ? "1" : (i == 1 ? var : var + "^" + std::to_string(i));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i + j < m) a.prod[i][j] = sp_unit(f, i + j);
  a.unit = unit_vec(f, m, 0);
  return a;
}

// Upper triangular 2x2 matrices, basis e11, e12, e22.
template <class F>
FinAlgebra<F> upper_triangular(const F& f) {
  FinAlgebra<F> a(f, 3);
  a.labels = {"e11", "e12", "e22"};
  a.prod[0][0] = sp_unit(f, 0);
  a.prod[0][1] = sp_unit(f, 1);
  a.prod[1][2] = sp_unit(f, 1);
  a.prod[2][2] = sp_unit(f, 2);
  a.unit = zeros(f, 3);
  a.unit[0] = a.unit[2] = f.one();
  return a;
}

// Full 2x2 matrices, basis e11, e12, e21, e22.
template <class F>
FinAlgebra<F> matrices2(const F& f) {
  FinAlgebra<F> a(f, 4);
  a.labels = {"e11", "e12", "e21", "e22"};
  auto idx = [](int i, int j) { return 2 * i + j; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) a.prod[idx(i, j)][idx(j, k)] = sp_unit(f, idx(i, k));
  a.unit = zeros(f, 4);
  a.unit[0] = a.unit[3] = f.one();
  return a;
}

// k x k with orthogonal idempotents.
template <class F>
FinAlgebra<F> split_product(const F& f) {
  FinAlgebra<F> a(f, 2);
  a.labels = {"p", "q"};
  a.prod[0][0] = sp_unit(f, 0);
  a.prod[1][1] = sp_unit(f, 1);
  a.unit = Vec<F>{f.one(), f.one()};
  return a;
}

// A = R + Rt with t central and t^2 = 0; basis r_k then r_k t.
template <class F>
RRingExt<F> trivial_extension(const AlgPtr<F>& R) {
  const F& f = R->f;
  const int n = R->n;
  FinAlgebra<F> a(f, 2 * n);
  for (int k = 0; k < n; ++k) {
    a.labels[k] = R->labels[k];
    a.labels[n + k] = R->n == 1 ? "t" : R->labels[k] + "t";
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& p = R->prod[i][j];
      a.prod[i][j] = p;
      SpVec<F> shifted;
      for (const auto& [k, v] : p) shifted.emplace_back(n + k, v);
      a.prod[i][n + j] = shifted;
      a.prod[n + i][j] = shifted;
    }
  a.unit = zeros(f, 2 * n);
  for (int k = 0; k < n; ++k) a.unit[k] = R->unit[k];
  RRingExt<F> ext;
  ext.R = R;
  ext.A = std::make_shared<const FinAlgebra<F>>(std::move(a));
  ext.u = Mat<F>(f, 2 * n, n);
  for (int k = 0; k < n; ++k) ext.u(k, k) = f.one();
  return ext;
}

// A over k through the unit.
template <class F>
RRingExt<F> over_ground(const F& f, FinAlgebra<F> A) {
  RRingExt<F> ext;
  ext.R = std::make_shared<const FinAlgebra<F>>(ground(f));
  ext.u = Mat<F>(f, A.n, 1);
  ext.u.set_col(0, A.unit);
  ext.A = std::make_shared<const FinAlgebra<F>>(std::move(A));
  return ext;
}

template <class F>
RRingExt<F> trivial_extension_ground(const F& f) {
  return trivial_extension<F>(std::make_shared<const FinAlgebra<F>>(ground(f)));
}

template <class F>
RRingExt<F> trivial_extension_upper(const F& f) {
  return trivial_extension<F>(std::make_shared<const FinAlgebra<F>>(upper_triangular(f)));
}

// Commutative R = k[s]/(s^2) with A = R[t]/(t^2).
template <class F>
RRingExt<F> trivial_extension_dual_numbers(const F& f) {
  return trivial_extension<F>(std::make_shared<const FinAlgebra<F>>(truncated_poly(f, 2, "s")));
}

// Upper triangular inside full matrices: the unit has no right retraction.
template <class F>
RRingExt<F> upper_in_full(const F& f) {
  RRingExt<F> ext;
  ext.R = std::make_shared<const FinAlgebra<F>>(upper_triangular(f));
  ext.A = std::make_shared<const FinAlgebra<F>>(matrices2(f));
  ext.u = Mat<F>(f, 4, 3);
  ext.u(0, 0) = f.one();  // e11
  ext.u(1, 1) = f.one();  // e12
  ext.u(3, 2) = f.one();  // e22
  return ext;
}

}  // namespace coendo::fixtures
