#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coendo/linalg.hpp"

namespace coendo {

// Finite-dimensional algebra given by structure constants e_i e_j = prod[i][j].
template <class F>
struct FinAlgebra {
  using E = typename F::E;

  F f;
  int n = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<SpVec<F>>> prod;
  Vec<F> unit;

  FinAlgebra() = default;
  FinAlgebra(const F& field, int dim) : f(field), n(dim), prod(dim, std::vector<SpVec<F>>(dim)) {
    for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i));
    unit = zeros(f, dim);
  }

  Vec<F> basis(int i) const { return unit_vec(f, n, i); }
  const SpVec<F>& mul_basis(int i, int j) const { return prod[i][j]; }

  Vec<F> mul(const Vec<F>& x, const Vec<F>& y) const {
    Vec<F> out = zeros(f, n);
    for (int i = 0; i < n; ++i) {
      if (f.is_zero(x[i])) continue;
      for (int j = 0; j < n; ++j) {
        if (f.is_zero(y[j])) continue;
        E c = f.mul(x[i], y[j]);
        for (const auto& [k, v] : prod[i][j]) f.addmul(out[k], c, v);
      }
    }
    return out;
  }

  // x -> a x
  Mat<F> lmul(const Vec<F>& a) const {
    Mat<F> m(f, n, n);
    for (int j = 0; j < n; ++j) m.set_col(j, mul(a, basis(j)));
    return m;
  }
  // x -> x a
  Mat<F> rmul(const Vec<F>& a) const {
    Mat<F> m(f, n, n);
    for (int j = 0; j < n; ++j) m.set_col(j, mul(basis(j), a));
    return m;
  }

  // First failing axiom, or nullopt.
  std::optional<std::string> validate() const {
    if (static_cast<int>(unit.size()) != n) return "unit vector has wrong length";
    for (int i = 0; i < n; ++i) {
      if (!vec_eq(f, mul(unit, basis(i)), basis(i)))
        return "unit is not a left identity on " + labels[i];
      if (!vec_eq(f, mul(basis(i), unit), basis(i)))
        return "unit is not a right identity on " + labels[i];
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          auto lhs = mul(mul(basis(i), basis(j)), basis(k));
          auto rhs = mul(basis(i), mul(basis(j), basis(k)));
          if (!vec_eq(f, lhs, rhs))
            return "associativity fails on (" + labels[i] + "," + labels[j] + "," + labels[k] + ")";
        }
    return std::nullopt;
  }

  bool is_commutative() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (prod[i][j] != prod[j][i]) return false;
    return true;
  }

  FinAlgebra opposite() const {
    FinAlgebra o(*this);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) o.prod[i][j] = prod[j][i];
    for (auto& l : o.labels) l += "°";
    return o;
  }
};

template <class F>
using AlgPtr = std::shared_ptr<const FinAlgebra<F>>;

// A (x)_k B with basis index i * B.n + j.
template <class F>
FinAlgebra<F> algebra_tensor(const FinAlgebra<F>& A, const FinAlgebra<F>& B) {
  const F& f = A.f;
  FinAlgebra<F> T(f, A.n * B.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < B.n; ++j) T.labels[i * B.n + j] = A.labels[i] + "*" + B.labels[j];
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < B.n; ++j)
      for (int k = 0; k < A.n; ++k)
        for (int l = 0; l < B.n; ++l) {
          SpAccum<F> acc(f);
          for (const auto& [a, x] : A.prod[i][k])
            for (const auto& [b, y] : B.prod[j][l]) acc.add(a * B.n + b, f.mul(x, y));
          T.prod[i * B.n + j][k * B.n + l] = acc.take();
        }
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < B.n; ++j) T.unit[i * B.n + j] = f.mul(A.unit[i], B.unit[j]);
  return T;
}

// Algebra map R -> A; column k of u is the image of the k-th basis vector of R.
template <class F>
struct RRingExt {
  AlgPtr<F> R, A;
  Mat<F> u;

  const F& field() const { return R->f; }
  Vec<F> unit_of(const Vec<F>& r) const { return u * r; }

  std::optional<std::string> validate() const {
    if (auto e = R->validate()) return "R: " + *e;
    if (auto e = A->validate()) return "A: " + *e;
    const F& f = field();
    if (u.rows() != A->n || u.cols() != R->n) return "unit map has wrong shape";
    if (!vec_eq(f, u * R->unit, A->unit)) return "unit map is not unital";
    for (int i = 0; i < R->n; ++i)
      for (int j = 0; j < R->n; ++j)
        if (!vec_eq(f, u * R->mul(R->basis(i), R->basis(j)),
                    A->mul(u * R->basis(i), u * R->basis(j))))
          return "unit map is not multiplicative on (" + R->labels[i] + "," + R->labels[j] + ")";
    return std::nullopt;
  }
};

// (L, S)-bimodule with a k-basis; left[i] is x -> e_i x, right[j] is x -> x e_j.
template <class F>
struct Bimodule {
  AlgPtr<F> L, S;
  int dim = 0;
  std::vector<Mat<F>> left, right;

  const F& field() const { return L->f; }

  Mat<F> left_by(const Vec<F>& r) const {
    Mat<F> m(field(), dim, dim);
    for (int i = 0; i < L->n; ++i) m.add_scaled(r[i], left[i]);
    return m;
  }
  Mat<F> right_by(const Vec<F>& s) const {
    Mat<F> m(field(), dim, dim);
    for (int i = 0; i < S->n; ++i) m.add_scaled(s[i], right[i]);
    return m;
  }

  static Bimodule regular(const AlgPtr<F>& A) {
    Bimodule b;
    b.L = b.S = A;
    b.dim = A->n;
    for (int i = 0; i < A->n; ++i) {
      b.left.push_back(A->lmul(A->basis(i)));
      b.right.push_back(A->rmul(A->basis(i)));
    }
    return b;
  }

  // Restriction of scalars along uL: L2 -> L and uS: S2 -> S.
  Bimodule restrict(const AlgPtr<F>& L2, const Mat<F>& uL, const AlgPtr<F>& S2,
                    const Mat<F>& uS) const {
    Bimodule b;
    b.L = L2;
    b.S = S2;
    b.dim = dim;
    for (int k = 0; k < L2->n; ++k) b.left.push_back(left_by(uL.col(k)));
    for (int k = 0; k < S2->n; ++k) b.right.push_back(right_by(uS.col(k)));
    return b;
  }

  std::optional<std::string> validate() const {
    const F& f = field();
    auto I = Mat<F>::identity(f, dim);
    if (left_by(L->unit) != I) return "left unit does not act as identity";
    if (right_by(S->unit) != I) return "right unit does not act as identity";
    for (int i = 0; i < L->n; ++i)
      for (int j = 0; j < L->n; ++j)
        if (left_by(L->mul(L->basis(i), L->basis(j))) != left[i] * left[j])
          return "left action not multiplicative on (" + L->labels[i] + "," + L->labels[j] + ")";
    for (int i = 0; i < S->n; ++i)
      for (int j = 0; j < S->n; ++j)
        if (right_by(S->mul(S->basis(i), S->basis(j))) != right[j] * right[i])
          return "right action not multiplicative on (" + S->labels[i] + "," + S->labels[j] + ")";
    for (int i = 0; i < L->n; ++i)
      for (int j = 0; j < S->n; ++j)
        if (left[i] * right[j] != right[j] * left[i]) return "left and right actions do not commute";
    return std::nullopt;
  }
};

// Space of X (p x q) with X P_t = Q_t X for all t, as vec(X) row-major.
template <class F>
std::vector<SpVec<F>> intertwiner_columns(const F& f, int p, int q, const std::vector<Mat<F>>& P,
                                          const std::vector<Mat<F>>& Q) {
  const int blocks = static_cast<int>(P.size());
  std::vector<SpVec<F>> cols(size_t(p) * q);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      SpAccum<F> acc(f);
      for (int t = 0; t < blocks; ++t) {
        int off = t * p * q;
        for (int j = 0; j < q; ++j) acc.add(off + a * q + j, P[t](b, j));
        for (int i = 0; i < p; ++i) acc.add(off + i * q + b, f.neg(Q[t](i, a)));
      }
      cols[size_t(a) * q + b] = acc.take();
    }
  return cols;
}

template <class F>
Subspace<F> intertwiners(const F& f, int p, int q, const std::vector<Mat<F>>& P,
                         const std::vector<Mat<F>>& Q) {
  auto cols = intertwiner_columns(f, p, q, P, Q);
  return kernel_of_columns(f, static_cast<int>(P.size()) * p * q, cols);
}

template <class F>
Mat<F> unflatten(const F& f, int p, int q, const Vec<F>& v) {
  Mat<F> m(f, p, q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = v[size_t(i) * q + j];
  return m;
}

template <class F>
Vec<F> flatten(const Mat<F>& m) {
  Vec<F> v;
  v.reserve(size_t(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

// Some X with X P_t = Q_t X for all t and X C = D, or nullopt.
template <class F>
std::optional<Mat<F>> solve_intertwiner(const F& f, int p, int q, const std::vector<Mat<F>>& P,
                                        const std::vector<Mat<F>>& Q, const Mat<F>& C,
                                        const Mat<F>& D) {
  auto cols = intertwiner_columns(f, p, q, P, Q);
  const int base = static_cast<int>(P.size()) * p * q;
  const int c = C.cols();
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      auto& col = cols[size_t(a) * q + b];
      for (int k = 0; k < c; ++k)
        if (!f.is_zero(C(b, k))) col.emplace_back(base + a * c + k, C(b, k));
    }
  SpVec<F> rhs;
  for (int a = 0; a < p; ++a)
    for (int k = 0; k < c; ++k)
      if (!f.is_zero(D(a, k))) rhs.emplace_back(base + a * c + k, D(a, k));
  auto x = ColumnSolver<F>(f, base + p * c, cols).solve(rhs);
  if (!x) return std::nullopt;
  return unflatten(f, p, q, *x);
}

// Left dual Hom_{L-}(M, L) of an (L,S)-bimodule M.  A functional is an
// L.n x M.dim matrix; the result is an (S, L)-bimodule with
// (s f)(x) = f(x s) and (f l)(x) = f(x) l.
template <class F>
struct DualModule {
  Bimodule<F> dual;
  Subspace<F> space;  // flattened functionals
  int ldim = 0, mdim = 0;

  int dim() const { return dual.dim; }
  const F& field() const { return space.field(); }
  Mat<F> functional(const Vec<F>& c) const {
    return unflatten(field(), ldim, mdim, to_dense(field(), space.element(c), ldim * mdim));
  }
  Mat<F> functional(int b) const { return functional(unit_vec(field(), dim(), b)); }
  std::optional<Vec<F>> coords(const Mat<F>& fn) const { return space.coords(flatten(fn)); }
  Vec<F> coords_or_throw(const Mat<F>& fn) const {
    auto c = coords(fn);
    if (!c) throw std::logic_error("map is not a left-linear functional");
    return *c;
  }
};

template <class F>
DualModule<F> left_dual(const Bimodule<F>& M) {
  const F& f = M.field();
  const int l = M.L->n, m = M.dim;
  std::vector<Mat<F>> P = M.left, Q;
  for (int i = 0; i < l; ++i) Q.push_back(M.L->lmul(M.L->basis(i)));
  DualModule<F> d;
  d.ldim = l;
  d.mdim = m;
  d.space = intertwiners(f, l, m, P, Q);
  d.dual.L = M.S;
  d.dual.S = M.L;
  d.dual.dim = d.space.dim();
  std::vector<Mat<F>> basis;
  for (int b = 0; b < d.dual.dim; ++b) basis.push_back(d.functional(b));
  for (int s = 0; s < M.S->n; ++s) {
    Mat<F> act(f, d.dual.dim, d.dual.dim);
    for (int b = 0; b < d.dual.dim; ++b) act.set_col(b, d.coords_or_throw(basis[b] * M.right[s]));
    d.dual.left.push_back(act);
  }
  for (int r = 0; r < l; ++r) {
    Mat<F> act(f, d.dual.dim, d.dual.dim);
    Mat<F> rm = M.L->rmul(M.L->basis(r));
    for (int b = 0; b < d.dual.dim; ++b) act.set_col(b, d.coords_or_throw(rm * basis[b]));
    d.dual.right.push_back(act);
  }
  return d;
}

// M (L,S) tensor N (S,T) over S.
template <class F>
struct TensorOverR {
  Bimodule<F> P;
  NormalForm<F> nf;
  int mdim = 0, ndim = 0;

  SpVec<F> pair(int i, int j) const { return nf.project_col(i * ndim + j); }
  SpVec<F> tensor(const Vec<F>& x, const Vec<F>& y) const {
    const F& f = nf.field();
    SpAccum<F> acc(f);
    for (int i = 0; i < mdim; ++i) {
      if (f.is_zero(x[i])) continue;
      for (int j = 0; j < ndim; ++j)
        if (!f.is_zero(y[j])) acc.add(i * ndim + j, f.mul(x[i], y[j]));
    }
    return nf.project(acc.take());
  }
};

template <class F>
TensorOverR<F> tensor_over_R(const Bimodule<F>& M, const Bimodule<F>& N) {
  if (M.S.get() != N.L.get() && (M.S->n != N.L->n || M.S->prod != N.L->prod))
    throw std::invalid_argument("tensor_over_R: middle algebras differ");
  const F& f = M.field();
  const int m = M.dim, n = N.dim;
  Echelon<F> rel(f, m * n);
  const bool ground = M.S->n == 1;
  if (!ground)
    for (int s = 0; s < M.S->n; ++s)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          SpAccum<F> acc(f);
          for (int a = 0; a < m; ++a) acc.add(a * n + j, M.right[s](a, i));
          for (int b = 0; b < n; ++b) acc.add(i * n + b, f.neg(N.left[s](b, j)));
          rel.insert(acc.take());
        }
  TensorOverR<F> t;
  t.mdim = m;
  t.ndim = n;
  t.nf = NormalForm<F>(std::move(rel));
  t.P.L = M.L;
  t.P.S = N.S;
  t.P.dim = t.nf.dim();
  auto induced = [&](auto&& image_of_pair) {
    Mat<F> act(f, t.P.dim, t.P.dim);
    for (int q = 0; q < t.P.dim; ++q) {
      int c = t.nf.section(q);
      act.set_col(q, t.nf.project_dense(image_of_pair(c / n, c % n)));
    }
    return act;
  };
  for (int l = 0; l < M.L->n; ++l)
    t.P.left.push_back(induced([&](int i, int j) {
      SpAccum<F> acc(f);
      for (int a = 0; a < m; ++a) acc.add(a * n + j, M.left[l](a, i));
      return acc.take();
    }));
  for (int r = 0; r < N.S->n; ++r)
    t.P.right.push_back(induced([&](int i, int j) {
      SpAccum<F> acc(f);
      for (int b = 0; b < n; ++b) acc.add(i * n + b, N.right[r](b, j));
      return acc.take();
    }));
  return t;
}

// Pairs (e_i, *e_i) with x = sum_i *e_i(x) e_i; *e_i is an L.n x dim matrix.
template <class F>
struct DualBasis {
  std::vector<Vec<F>> elems;
  std::vector<Mat<F>> funcs;

  int size() const { return static_cast<int>(elems.size()); }

  // Checks reconstruction and left-linearity against the left module M.
  std::optional<std::string> verify(const AlgPtr<F>& L, const std::vector<Mat<F>>& left, int dim) const {
    const F& f = L->f;
    for (int x = 0; x < dim; ++x) {
      Vec<F> acc = zeros(f, dim);
      for (int i = 0; i < size(); ++i) {
        Vec<F> r = funcs[i].col(x);
        Mat<F> act(f, dim, dim);
        for (int k = 0; k < L->n; ++k) act.add_scaled(r[k], left[k]);
        acc = vadd(f, acc, act * elems[i]);
      }
      if (!vec_eq(f, acc, unit_vec(f, dim, x)))
        return "reconstruction fails on basis vector " + std::to_string(x);
    }
    for (int i = 0; i < size(); ++i)
      for (int k = 0; k < L->n; ++k)
        if (funcs[i] * left[k] != L->lmul(L->basis(k)) * funcs[i])
          return "functional " + std::to_string(i) + " is not left linear";
    return std::nullopt;
  }
};

// Dual basis of a left L-module (action matrices `left`), or nullopt when
// the module is not projective.
template <class F>
std::optional<DualBasis<F>> dual_basis_left(const AlgPtr<F>& L, const std::vector<Mat<F>>& left, int dim) {
  const F& f = L->f;
  const int l = L->n;
  DualBasis<F> db;
  if (dim == 0) return db;
  if (l == 1) {
    for (int x = 0; x < dim; ++x) {
      db.elems.push_back(unit_vec(f, dim, x));
      Mat<F> fn(f, 1, dim);
      fn(0, x) = f.one();
      db.funcs.push_back(fn);
    }
    return db;
  }
  auto orbit = [&](const Vec<F>& g) {
    std::vector<SpVec<F>> v;
    for (int a = 0; a < l; ++a) v.push_back(to_sparse(f, left[a] * g));
    return v;
  };
  Echelon<F> span(f, dim);
  std::vector<Vec<F>> gens;
  while (span.rank() < dim) {
    int best = -1, gain = 0;
    for (int x = 0; x < dim; ++x) {
      Echelon<F> trial(span);
      int before = trial.rank();
      for (const auto& v : orbit(unit_vec(f, dim, x))) trial.insert(v);
      if (trial.rank() - before > gain) {
        gain = trial.rank() - before;
        best = x;
      }
    }
    gens.push_back(unit_vec(f, dim, best));
    for (const auto& v : orbit(gens.back())) span.insert(v);
  }
  // merge g_i, g_j into g_i + g_j when the sum generates both
  for (bool merged = true; merged;) {
    merged = false;
    for (size_t i = 0; i < gens.size() && !merged; ++i)
      for (size_t j = i + 1; j < gens.size() && !merged; ++j) {
        Echelon<F> both(f, dim), sum(f, dim);
        for (const auto& v : orbit(gens[i])) both.insert(v);
        for (const auto& v : orbit(gens[j])) both.insert(v);
        for (const auto& v : orbit(vadd(f, gens[i], gens[j]))) sum.insert(v);
        if (sum.rank() == both.rank()) {
          gens[i] = vadd(f, gens[i], gens[j]);
          gens.erase(gens.begin() + j);
          merged = true;
        }
      }
  }
  const int k = static_cast<int>(gens.size());
  // pi: L^k -> M, column (i, a) = e_a g_i
  Mat<F> pi(f, dim, k * l);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < l; ++a) pi.set_col(i * l + a, left[a] * gens[i]);
  std::vector<Mat<F>> P = left, Q;
  for (int a = 0; a < l; ++a) {
    Mat<F> blk(f, k * l, k * l);
    Mat<F> la = L->lmul(L->basis(a));
    for (int i = 0; i < k; ++i)
      for (int r = 0; r < l; ++r)
        for (int c = 0; c < l; ++c) blk(i * l + r, i * l + c) = la(r, c);
    Q.push_back(blk);
  }
  // section s: M -> L^k, left linear, with pi s = id
  auto cols = intertwiner_columns(f, k * l, dim, P, Q);
  const int base = l * k * l * dim;
  for (int a = 0; a < k * l; ++a)
    for (int b = 0; b < dim; ++b) {
      auto& col = cols[size_t(a) * dim + b];
      // (pi s)(x, b) += pi(x, a) s(a, b)
      for (int x = 0; x < dim; ++x)
        if (!f.is_zero(pi(x, a))) col.emplace_back(base + x * dim + b, pi(x, a));
    }
  SpVec<F> rhs;
  for (int x = 0; x < dim; ++x) rhs.emplace_back(base + x * dim + x, f.one());
  auto sol = ColumnSolver<F>(f, base + dim * dim, cols).solve(rhs);
  if (!sol) return std::nullopt;
  Mat<F> s = unflatten(f, k * l, dim, *sol);
  for (int i = 0; i < k; ++i) {
    db.elems.push_back(gens[i]);
    Mat<F> fn(f, l, dim);
    for (int r = 0; r < l; ++r)
      for (int x = 0; x < dim; ++x) fn(r, x) = s(i * l + r, x);
    db.funcs.push_back(fn);
  }
  return db;
}

// Right-module dual basis x = sum_i e_i *e_i(x) with *e_i right linear,
// obtained as a left dual basis over the opposite algebra.
template <class F>
std::optional<DualBasis<F>> dual_basis_right(const AlgPtr<F>& L, const std::vector<Mat<F>>& right, int dim) {
  auto op = std::make_shared<const FinAlgebra<F>>(L->opposite());
  return dual_basis_left<F>(op, right, dim);
}

// Right R-linear retraction nu: A -> R of the unit, or nullopt.
template <class F>
std::optional<Mat<F>> unit_splits_right(const RRingExt<F>& ext) {
  const F& f = ext.field();
  const int r = ext.R->n, a = ext.A->n;
  std::vector<Mat<F>> P, Q;
  for (int k = 0; k < r; ++k) {
    P.push_back(ext.A->rmul(ext.u.col(k)));
    Q.push_back(ext.R->rmul(ext.R->basis(k)));
  }
  return solve_intertwiner(f, r, a, P, Q, ext.u, Mat<F>::identity(f, r));
}

}  // namespace coendo
