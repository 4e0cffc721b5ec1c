#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coendo/check.hpp"
#include "coendo/fixtures.hpp"
#include "coendo/qcomplex.hpp"

namespace coendo {

enum class RingKind { B, C };

inline const char* ring_name(RingKind k) { return k == RingKind::B ? "B" : "C"; }

// Chain complex of left R-modules V_0 <- V_1 <- ... <- V_top, each V_n given by
// a k-basis and the action matrices of the basis of R.
template <class F>
struct ChainComplex {
  AlgPtr<F> R;
  std::vector<int> dims;
  std::vector<std::vector<Mat<F>>> act;  // act[n][k]: e_k on V_n
  std::vector<Mat<F>> diff;              // diff[n]: V_{n+1} -> V_n

  const F& field() const { return R->f; }
  int top() const { return static_cast<int>(dims.size()) - 1; }
  int dim(int n) const { return n >= 0 && n <= top() ? dims[n] : 0; }
  int total() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  Mat<F> action(int n, const Vec<F>& r) const {
    Mat<F> m(field(), dims[n], dims[n]);
    for (int k = 0; k < R->n; ++k) m.add_scaled(r[k], act[n][k]);
    return m;
  }

  // Complex of k-vector spaces (R the ground field) with the given differentials.
  static ChainComplex over_ground(const AlgPtr<F>& k, const std::vector<int>& dims, const std::vector<Mat<F>>& diff) {
    ChainComplex V;
    V.R = k;
    V.dims = dims;
    V.diff = diff;
    for (int d : dims) V.act.push_back({Mat<F>::identity(k->f, d)});
    return V;
  }

  // Free modules R^{rank_n} (row vectors) with d_n(x) = x M_n, M_n a
  // rank_{n+1} x rank_n matrix with entries in R.
  static ChainComplex free(const AlgPtr<F>& R, const std::vector<int>& ranks,
                           const std::vector<std::vector<std::vector<Vec<F>>>>& mats) {
    const F& f = R->f;
    const int r = R->n;
    ChainComplex V;
    V.R = R;
    for (int n : ranks) V.dims.push_back(n * r);
    for (size_t n = 0; n < ranks.size(); ++n) {
      V.act.emplace_back();
      for (int k = 0; k < r; ++k) {
        Mat<F> m(f, V.dims[n], V.dims[n]);
        Mat<F> lk = R->lmul(R->basis(k));
        for (int i = 0; i < ranks[n]; ++i)
          for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) m(i * r + a, i * r + b) = lk(a, b);
        V.act.back().push_back(m);
      }
    }
    for (size_t n = 0; n + 1 < ranks.size(); ++n) {
      Mat<F> d(f, V.dims[n], V.dims[n + 1]);
      for (int i = 0; i < ranks[n + 1]; ++i)
        for (int j = 0; j < ranks[n]; ++j) {
          Mat<F> rm = R->rmul(mats[n][i][j]);
          for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) d(j * r + a, i * r + b) = rm(a, b);
        }
      V.diff.push_back(d);
    }
    return V;
  }

  // First violated condition: shapes, module axioms, R-linearity of d, d^2 = 0.
  std::optional<std::string> validate() const {
    const F& f = field();
    if (static_cast<int>(act.size()) != top() + 1 || static_cast<int>(diff.size()) != std::max(top(), 0))
      return "wrong number of pieces";
    for (int n = 0; n <= top(); ++n) {
      if (static_cast<int>(act[n].size()) != R->n) return "degree " + std::to_string(n) + ": wrong number of actions";
      for (const auto& a : act[n])
        if (a.rows() != dims[n] || a.cols() != dims[n]) return "degree " + std::to_string(n) + ": action has wrong shape";
      if (action(n, R->unit) != Mat<F>::identity(f, dims[n])) return "degree " + std::to_string(n) + ": 1 does not act as 1";
      for (int k = 0; k < R->n; ++k)
        for (int l = 0; l < R->n; ++l)
          if (act[n][k] * act[n][l] != action(n, R->mul(R->basis(k), R->basis(l))))
            return "degree " + std::to_string(n) + ": action is not associative";
    }
    for (int n = 0; n < top(); ++n) {
      if (diff[n].rows() != dims[n] || diff[n].cols() != dims[n + 1])
        return "d_" + std::to_string(n + 1) + " has wrong shape";
      for (int k = 0; k < R->n; ++k)
        if (diff[n] * act[n + 1][k] != act[n][k] * diff[n]) return "d_" + std::to_string(n + 1) + " is not R-linear";
    }
    for (int n = 0; n + 1 < top(); ++n)
      if (!(diff[n] * diff[n + 1]).is_zero()) return "d^2 != 0 in degree " + std::to_string(n + 2);
    return std::nullopt;
  }

  // Drops zero pieces above the last nonzero one.
  ChainComplex trimmed() const {
    ChainComplex V = *this;
    while (!V.dims.empty() && V.dims.back() == 0) {
      V.dims.pop_back();
      V.act.pop_back();
      if (!V.diff.empty()) V.diff.pop_back();
    }
    return V;
  }
};

template <class F>
using ChainMap = std::vector<Mat<F>>;  // f_n: V_n -> W_n

template <class F>
bool same_complex(const ChainComplex<F>& V, const ChainComplex<F>& W) {
  auto a = V.trimmed(), b = W.trimmed();
  return a.dims == b.dims && a.act == b.act && a.diff == b.diff;
}

// d_n: V_{n+1} -> V_n, the zero map outside the support.
template <class F>
Mat<F> diff_or_zero(const ChainComplex<F>& V, int n) {
  if (n >= 0 && n < V.top()) return V.diff[n];
  return Mat<F>(V.field(), V.dim(n), V.dim(n + 1));
}

// f commutes with d and the R-actions; f[n] is W_n x V_n for n up to the larger top.
template <class F>
std::optional<std::string> check_chain_map(const ChainComplex<F>& V, const ChainComplex<F>& W, const ChainMap<F>& f) {
  const int top = std::max(V.top(), W.top());
  if (static_cast<int>(f.size()) < top + 1) return "too few components";
  for (int n = 0; n <= top; ++n) {
    if (f[n].rows() != W.dim(n) || f[n].cols() != V.dim(n)) return "degree " + std::to_string(n) + ": wrong shape";
    if (V.dim(n) > 0 && W.dim(n) > 0)
      for (int k = 0; k < V.R->n; ++k)
        if (f[n] * V.act[n][k] != W.act[n][k] * f[n]) return "degree " + std::to_string(n) + ": not R-linear";
    if (n < top && f[n] * diff_or_zero(V, n) != diff_or_zero(W, n) * f[n + 1])
      return "degree " + std::to_string(n + 1) + ": does not commute with d";
  }
  return std::nullopt;
}

// The k-points of B (coefficients k) or C (coefficients R) in degrees <= D:
// the algebra with basis g (x) e_k, g in {h_0..h_D, v_0..v_{D-1}}, index g * R.n + k.
template <class F>
class IdemRing {
 public:
  IdemRing(RingKind kind, AlgPtr<F> coeff, int D) : kind_(kind), R_(std::move(coeff)), D_(D) {
    if (D < 0) throw std::invalid_argument("truncation must be nonnegative");
    if (kind == RingKind::B && R_->n != 1) throw std::invalid_argument("B has coefficients in the ground field");
    const F& f = R_->f;
    const int g = gens();
    FinAlgebra<F> core(f, g);
    for (int n = 0; n <= D; ++n) core.labels[n] = "h" + std::to_string(n);
    for (int n = 0; n < D; ++n) core.labels[D + 1 + n] = (kind == RingKind::B ? "v" : "u") + std::to_string(n);
    for (int n = 0; n <= D; ++n) {
      core.prod[h(n)][h(n)] = sp_unit(f, h(n));
      core.unit[h(n)] = f.one();
    }
    for (int n = 0; n < D; ++n) {
      core.prod[h(n)][v(n)] = sp_unit(f, v(n));
      core.prod[v(n)][h(n + 1)] = sp_unit(f, v(n));
    }
    alg_ = std::make_shared<const FinAlgebra<F>>(algebra_tensor(core, *R_));
  }

  RingKind kind() const { return kind_; }
  const AlgPtr<F>& coeff() const { return R_; }
  const AlgPtr<F>& alg() const { return alg_; }
  const F& field() const { return R_->f; }
  int degree() const { return D_; }
  int gens() const { return 2 * D_ + 1; }
  int h(int n) const { return n; }
  int v(int n) const { return D_ + 1 + n; }
  int elem(int g, int k) const { return g * R_->n + k; }
  Vec<F> basis(int g, int k) const { return alg_->basis(elem(g, k)); }
  Vec<F> with_unit(int g) const {
    Vec<F> x = zeros(field(), alg_->n);
    for (int k = 0; k < R_->n; ++k) x[elem(g, k)] = R_->unit[k];
    return x;
  }

  // The defining relations as multiplication-table identities.
  std::vector<Check> check_relations() const {
    const F& f = field();
    const std::string s = ring_name(kind_);
    Check hh{"rings", s + ": h_n h_m = delta h_n"}, vv{"rings", s + ": v_n v_m = 0"},
        vh{"rings", s + ": v_n h_{n+1} = v_n = h_n v_n"}, as{"rings", s + ": associative and unital"};
    auto prod = [&](int a, int b) { return alg_->mul(with_unit(a), with_unit(b)); };
    for (int n = 0; n <= D_; ++n)
      for (int m = 0; m <= D_; ++m) {
        Vec<F> want = n == m ? with_unit(h(n)) : zeros(f, alg_->n);
        if (!vec_eq(f, prod(h(n), h(m)), want)) hh.fail("fails for (" + std::to_string(n) + ", " + std::to_string(m) + ")");
        ++hh.count;
      }
    for (int n = 0; n < D_; ++n)
      for (int m = 0; m < D_; ++m) {
        if (!is_zero_vec(f, prod(v(n), v(m)))) vv.fail("fails for (" + std::to_string(n) + ", " + std::to_string(m) + ")");
        ++vv.count;
      }
    for (int n = 0; n < D_; ++n) {
      if (!vec_eq(f, prod(v(n), h(n + 1)), with_unit(v(n))) || !vec_eq(f, prod(h(n), v(n)), with_unit(v(n))))
        vh.fail("fails for n = " + std::to_string(n));
      ++vh.count;
    }
    if (auto e = alg_->validate()) as.fail(*e);
    ++as.count;
    return {hh, vv, vh, as};
  }

 private:
  RingKind kind_;
  AlgPtr<F> R_;
  int D_;
  AlgPtr<F> alg_;
};

template <class F>
using IdemRingPtr = std::shared_ptr<const IdemRing<F>>;

// Unital module over a truncated idempotent ring; act[a] is the action of
// the a-th basis element of ring->alg().
template <class F>
struct UnitalModule {
  IdemRingPtr<F> ring;
  bool right = false;
  int dim = 0;
  std::vector<Mat<F>> act;

  const F& field() const { return ring->field(); }
  std::vector<int> graded_dims() const {
    std::vector<int> out;
    for (int n = 0; n <= ring->degree(); ++n) out.push_back(rank(piece(n)));
    return out;
  }
  Mat<F> piece(int n) const {
    Mat<F> m(field(), dim, dim);
    const auto& R = *ring->coeff();
    for (int k = 0; k < R.n; ++k) m.add_scaled(R.unit[k], act[ring->elem(ring->h(n), k)]);
    return m;
  }

  // Module axioms for all pairs of basis elements and sum_n h_n = id.
  std::vector<Check> checks(const std::string& label) const {
    const F& f = field();
    const auto& A = *ring->alg();
    Check ax{"rings", label + ": module axioms"}, un{"rings", label + ": unital"};
    for (int a = 0; a < A.n; ++a)
      for (int b = 0; b < A.n; ++b) {
        Vec<F> ab = A.mul(A.basis(a), A.basis(b));
        Mat<F> lhs(f, dim, dim);
        for (int c = 0; c < A.n; ++c) lhs.add_scaled(ab[c], act[c]);
        Mat<F> rhs = right ? act[b] * act[a] : act[a] * act[b];
        if (lhs != rhs) ax.fail("fails on (" + A.labels[a] + ", " + A.labels[b] + ")");
        ++ax.count;
      }
    Mat<F> sum(f, dim, dim);
    for (int n = 0; n <= ring->degree(); ++n) sum = sum + piece(n);
    if (sum != Mat<F>::identity(f, dim)) un.fail("sum of the h_n is not the identity");
    ++un.count;
    return {ax, un};
  }
};

// Matrices of maps between subspaces: column j is the coordinate vector of a * src_j in dst.
template <class F>
std::vector<Mat<F>> restrict_to(const Subspace<F>& src, const Subspace<F>& dst, const std::vector<Mat<F>>& acts) {
  const F& f = src.field();
  std::vector<Mat<F>> out;
  for (const auto& a : acts) {
    Mat<F> m(f, dst.dim(), src.dim());
    for (int j = 0; j < src.dim(); ++j) {
      auto c = dst.coords(a * src.basis_vector(j));
      if (!c) throw std::logic_error("map leaves the target subspace");
      m.set_col(j, *c);
    }
    out.push_back(m);
  }
  return out;
}

// O: the module sum_n V_n with h_n projecting to V_n and v_n acting by d.
template <class F>
UnitalModule<F> O_functor(const IdemRingPtr<F>& ring, const ChainComplex<F>& V) {
  const F& f = ring->field();
  if (V.R->n != ring->coeff()->n) throw std::invalid_argument("complex and ring have different coefficients");
  if (V.top() > ring->degree()) throw std::out_of_range("complex exceeds the truncation of the ring");
  UnitalModule<F> M;
  M.ring = ring;
  M.dim = V.total();
  std::vector<int> off;
  int o = 0;
  for (int d : V.dims) {
    off.push_back(o);
    o += d;
  }
  const int r = V.R->n;
  M.act.assign(ring->alg()->n, Mat<F>(f, M.dim, M.dim));
  for (int n = 0; n <= V.top(); ++n)
    for (int k = 0; k < r; ++k) {
      Mat<F>& hk = M.act[ring->elem(ring->h(n), k)];
      for (int i = 0; i < V.dims[n]; ++i)
        for (int j = 0; j < V.dims[n]; ++j) hk(off[n] + i, off[n] + j) = V.act[n][k](i, j);
      if (n < V.top()) {
        Mat<F> dk = V.act[n][k] * V.diff[n];
        Mat<F>& vk = M.act[ring->elem(ring->v(n), k)];
        for (int i = 0; i < V.dims[n]; ++i)
          for (int j = 0; j < V.dims[n + 1]; ++j) vk(off[n] + i, off[n + 1] + j) = dk(i, j);
      }
    }
  return M;
}

// O^{-1}: V_n = h_n M with the restricted actions; subspace bases are the
// echelon bases of the images.
template <class F>
ChainComplex<F> O_inverse(const UnitalModule<F>& M, std::vector<Subspace<F>>* pieces = nullptr) {
  const F& f = M.field();
  const auto& ring = *M.ring;
  const int r = ring.coeff()->n;
  ChainComplex<F> V;
  V.R = ring.coeff();
  std::vector<Subspace<F>> S;
  for (int n = 0; n <= ring.degree(); ++n) {
    Mat<F> p = M.piece(n);
    std::vector<SpVec<F>> cols;
    for (int j = 0; j < M.dim; ++j) cols.push_back(p.sparse_col(j));
    S.push_back(Subspace<F>::span(f, M.dim, cols));
    V.dims.push_back(S.back().dim());
    std::vector<Mat<F>> acts;
    for (int k = 0; k < r; ++k) acts.push_back(M.act[ring.elem(ring.h(n), k)]);
    V.act.push_back(restrict_to(S.back(), S.back(), acts));
  }
  for (int n = 0; n < ring.degree(); ++n) {
    Mat<F> d(f, S[n].dim(), S[n + 1].dim());
    Mat<F> act(f, M.dim, M.dim);
    for (int k = 0; k < r; ++k) act.add_scaled(ring.coeff()->unit[k], M.act[ring.elem(ring.v(n), k)]);
    for (int j = 0; j < S[n + 1].dim(); ++j) {
      auto c = S[n].coords(act * S[n + 1].basis_vector(j));
      if (!c) throw std::logic_error("v_n does not map h_{n+1}M into h_nM");
      d.set_col(j, *c);
    }
    V.diff.push_back(d);
  }
  if (pieces) *pieces = S;
  return V;
}

// O on morphisms: the block diagonal map.
template <class F>
Mat<F> O_map(const ChainComplex<F>& V, const ChainComplex<F>& W, const ChainMap<F>& g) {
  const F& f = V.field();
  Mat<F> m(f, W.total(), V.total());
  int ro = 0, co = 0;
  for (int n = 0; n <= std::max(V.top(), W.top()); ++n) {
    if (V.dim(n) > 0 && W.dim(n) > 0)
      for (int i = 0; i < W.dim(n); ++i)
        for (int j = 0; j < V.dim(n); ++j) m(ro + i, co + j) = g[n](i, j);
    ro += W.dim(n);
    co += V.dim(n);
  }
  return m;
}

// O^{-1} on morphisms, relative to the piece bases chosen by O_inverse.
template <class F>
ChainMap<F> O_inverse_map(const UnitalModule<F>& M, const UnitalModule<F>& N, const Mat<F>& g) {
  std::vector<Subspace<F>> SM, SN;
  O_inverse(M, &SM);
  O_inverse(N, &SN);
  ChainMap<F> out;
  for (size_t n = 0; n < SM.size(); ++n) out.push_back(restrict_to(SM[n], SN[n], {g})[0]);
  return out;
}

// X (-) Y over B: piece n is the sum of X_i (x) Y_{n-i}, ordered by i, with
// d(x (x) y) = dx (x) y + (-1)^i x (x) dy.
template <class F>
struct ProductComplex {
  ChainComplex<F> V;
  std::vector<std::vector<int>> off;  // off[n][i], -1 when X_i (x) Y_{n-i} is absent
  std::vector<int> ydims;
  int index(int i, int a, int j, int b) const { return off[i + j][i] + a * ydims[j] + b; }
};

template <class F>
ProductComplex<F> product_complex(const ChainComplex<F>& X, const ChainComplex<F>& Y, int D = -1) {
  const F& f = X.field();
  if (X.R->n != 1 || Y.R->n != 1) throw std::invalid_argument("the product is defined for complexes over the ground field");
  if (D < 0) D = std::max(X.top() + Y.top(), 0);
  ProductComplex<F> P;
  P.ydims.assign(D + 1, 0);
  for (int j = 0; j <= std::min(Y.top(), D); ++j) P.ydims[j] = Y.dims[j];
  P.V.R = X.R;
  for (int n = 0; n <= D; ++n) {
    P.off.emplace_back(n + 1, -1);
    int o = 0;
    for (int i = 0; i <= n; ++i) {
      if (i > X.top() || n - i > Y.top()) continue;
      P.off[n][i] = o;
      o += X.dims[i] * Y.dims[n - i];
    }
    P.V.dims.push_back(o);
    P.V.act.push_back({Mat<F>::identity(f, o)});
  }
  const typename F::E minus = f.neg(f.one());
  for (int n = 0; n < D; ++n) {
    Mat<F> d(f, P.V.dims[n], P.V.dims[n + 1]);
    for (int i = 0; i <= n + 1; ++i) {
      const int j = n + 1 - i;
      if (P.off[n + 1][i] < 0) continue;
      for (int a = 0; a < X.dims[i]; ++a)
        for (int b = 0; b < Y.dims[j]; ++b) {
          const int col = P.index(i, a, j, b);
          if (i >= 1 && P.off[n][i - 1] >= 0)
            for (int a2 = 0; a2 < X.dims[i - 1]; ++a2) {
              const auto& c = X.diff[i - 1](a2, a);
              if (!f.is_zero(c)) f.addmul(d(P.index(i - 1, a2, j, b), col), c, f.one());
            }
          if (j >= 1 && P.off[n][i] >= 0)
            for (int b2 = 0; b2 < Y.dims[j - 1]; ++b2) {
              const auto& c = Y.diff[j - 1](b2, b);
              if (!f.is_zero(c)) f.addmul(d(P.index(i, a, j - 1, b2), col), c, i % 2 ? minus : f.one());
            }
        }
    }
    P.V.diff.push_back(d);
  }
  return P;
}

template <class F>
UnitalModule<F> module_product(const UnitalModule<F>& X, const UnitalModule<F>& Y) {
  if (X.ring->kind() != RingKind::B || Y.ring->kind() != RingKind::B) throw std::invalid_argument("the product is defined over B");
  if (X.ring->degree() != Y.ring->degree()) throw std::invalid_argument("modules over different truncations");
  return O_functor(X.ring, product_complex(O_inverse(X), O_inverse(Y), X.ring->degree()).V);
}

// f (-) g on the pieces of the two products.
template <class F>
ChainMap<F> product_map(const ProductComplex<F>& P, const ProductComplex<F>& P2, const ChainComplex<F>& X,
                        const ChainComplex<F>& Y, const ChainMap<F>& fx, const ChainMap<F>& gy) {
  const F& f = X.field();
  ChainMap<F> out;
  for (int n = 0; n <= P.V.top(); ++n) {
    Mat<F> m(f, P2.V.dims[n], P.V.dims[n]);
    for (int i = 0; i <= n; ++i) {
      if (P.off[n][i] < 0 || P2.off[n][i] < 0) continue;
      Mat<F> k = kron(fx[i], gy[n - i]);
      for (int r = 0; r < k.rows(); ++r)
        for (int c = 0; c < k.cols(); ++c) m(P2.off[n][i] + r, P.off[n][i] + c) = k(r, c);
    }
    out.push_back(m);
  }
  return out;
}

// (X (-) Y) (-) Z -> X (-) (Y (-) Z), (x (x) y) (x) z -> x (x) (y (x) z).
template <class F>
ChainMap<F> associator(const ChainComplex<F>& X, const ChainComplex<F>& Y, const ChainComplex<F>& Z, int D = -1) {
  const F& f = X.field();
  if (D < 0) D = std::max(X.top() + Y.top() + Z.top(), 0);
  auto XY = product_complex(X, Y, D), YZ = product_complex(Y, Z, D);
  auto L = product_complex(XY.V, Z, D), R = product_complex(X, YZ.V, D);
  ChainMap<F> out;
  for (int n = 0; n <= D; ++n) out.emplace_back(f, R.V.dims[n], L.V.dims[n]);
  for (int i = 0; i <= X.top(); ++i)
    for (int j = 0; j <= Y.top(); ++j)
      for (int k = 0; k <= Z.top(); ++k) {
        if (i + j + k > D) continue;
        for (int a = 0; a < X.dims[i]; ++a)
          for (int b = 0; b < Y.dims[j]; ++b)
            for (int c = 0; c < Z.dims[k]; ++c)
              out[i + j + k](R.index(i, a, j + k, YZ.index(j, b, k, c)), L.index(i + j, XY.index(i, a, j, b), k, c)) =
                  f.one();
      }
  return out;
}

// k concentrated in degree 0.
template <class F>
ChainComplex<F> unit_complex(const AlgPtr<F>& k) {
  return ChainComplex<F>::over_ground(k, {1}, {});
}

// Complex over the ground field with d_n of rank ranks[n] in normal form:
// d_n sends the i-th basis vector of V_{n+1} to the (r_{n-1} + i)-th of V_n.
template <class F>
ChainComplex<F> normal_form_complex(const AlgPtr<F>& k, const std::vector<int>& dims, const std::vector<int>& ranks) {
  const F& f = k->f;
  std::vector<Mat<F>> diff;
  for (size_t n = 0; n + 1 < dims.size(); ++n) {
    Mat<F> d(f, dims[n], dims[n + 1]);
    const int shift = n == 0 ? 0 : ranks[n - 1];
    for (int i = 0; i < ranks[n]; ++i) d(shift + i, i) = f.one();
    diff.push_back(d);
  }
  return ChainComplex<F>::over_ground(k, dims, diff);
}

// One complex per isomorphism class with dims <= maxdim in degrees 0..top.
template <class F>
std::vector<ChainComplex<F>> exhaustive_family(const AlgPtr<F>& k, int maxdim, int top) {
  std::vector<ChainComplex<F>> out;
  std::vector<int> dims(top + 1, 0);
  while (true) {
    std::vector<int> ranks(top, 0);
    while (true) {
      bool ok = true;
      for (int n = 0; n < top && ok; ++n) {
        const int used_below = n == 0 ? 0 : ranks[n - 1];
        ok = ranks[n] <= dims[n] - used_below && ranks[n] <= dims[n + 1];
      }
      if (ok) out.push_back(normal_form_complex(k, dims, ranks));
      int i = top - 1;
      while (i >= 0 && ++ranks[i] > maxdim) ranks[i--] = 0;
      if (i < 0) break;
    }
    int i = top;
    while (i >= 0 && ++dims[i] > maxdim) dims[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

template <class F>
typename F::E random_scalar(const F& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  return f.from_int(d(rng));
}

template <class F>
Mat<F> random_invertible(const F& f, int n, std::mt19937_64& rng) {
  while (true) {
    Mat<F> m(f, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = random_scalar(f, rng);
    if (inverse(m)) return m;
  }
}

// Random complex over the ground field: random dims <= maxdim and ranks,
// normal form conjugated by random invertible matrices.
template <class F>
ChainComplex<F> random_complex(const AlgPtr<F>& k, int maxdim, int top, std::mt19937_64& rng) {
  const F& f = k->f;
  std::uniform_int_distribution<int> dd(0, maxdim);
  std::vector<int> dims(top + 1), ranks(top, 0);
  for (auto& d : dims) d = dd(rng);
  for (int n = 0; n < top; ++n) {
    const int room = std::min(dims[n] - (n == 0 ? 0 : ranks[n - 1]), dims[n + 1]);
    ranks[n] = std::uniform_int_distribution<int>(0, std::max(room, 0))(rng);
  }
  ChainComplex<F> V = normal_form_complex(k, dims, ranks);
  std::vector<Mat<F>> P, Pinv;
  for (int d : dims) {
    P.push_back(random_invertible(f, d, rng));
    Pinv.push_back(*inverse(P.back()));
  }
  for (int n = 0; n < top; ++n) V.diff[n] = P[n] * V.diff[n] * Pinv[n + 1];
  return V;
}

// R (x)_k V for V over the ground field; basis (i, a) has index i * R.n + a.
template <class F>
ChainComplex<F> base_change(const AlgPtr<F>& R, const ChainComplex<F>& V) {
  const F& f = R->f;
  ChainComplex<F> W;
  W.R = R;
  for (int n = 0; n <= V.top(); ++n) {
    W.dims.push_back(V.dims[n] * R->n);
    W.act.emplace_back();
    for (int k = 0; k < R->n; ++k) W.act.back().push_back(kron(Mat<F>::identity(f, V.dims[n]), R->lmul(R->basis(k))));
  }
  for (const auto& d : V.diff) W.diff.push_back(kron(d, Mat<F>::identity(f, R->n)));
  return W;
}

// V_n = sum_i R eps_{n,i} inside R^{k_n}, d_n(x)_j = sum_i x_i m_{n,ij}; the
// entries must satisfy m_{n,ij} in eps_{n+1,i} R eps_{n,j}.
template <class F>
ChainComplex<F> projective_complex(const AlgPtr<F>& R, const std::vector<std::vector<Vec<F>>>& eps,
                                   const std::vector<std::vector<std::vector<Vec<F>>>>& mats) {
  const F& f = R->f;
  const int r = R->n;
  std::vector<int> ranks;
  for (const auto& e : eps) ranks.push_back(static_cast<int>(e.size()));
  ChainComplex<F> Fr = ChainComplex<F>::free(R, ranks, mats);
  std::vector<Subspace<F>> S;
  for (size_t n = 0; n < eps.size(); ++n) {
    std::vector<SpVec<F>> gens;
    for (size_t i = 0; i < eps[n].size(); ++i)
      for (int a = 0; a < r; ++a) {
        Vec<F> x = R->mul(R->basis(a), eps[n][i]);
        SpVec<F> g;
        for (int b = 0; b < r; ++b)
          if (!f.is_zero(x[b])) g.emplace_back(static_cast<int>(i) * r + b, x[b]);
        gens.push_back(g);
      }
    S.push_back(Subspace<F>::span(f, Fr.dims[n], gens));
  }
  ChainComplex<F> V;
  V.R = R;
  for (size_t n = 0; n < eps.size(); ++n) {
    V.dims.push_back(S[n].dim());
    V.act.push_back(restrict_to(S[n], S[n], Fr.act[n]));
  }
  for (size_t n = 0; n + 1 < eps.size(); ++n) V.diff.push_back(restrict_to(S[n + 1], S[n], {Fr.diff[n]})[0]);
  return V;
}

// Q_{<=D} as a right module: x h_n = x restricted to Q_n (times r for C),
// x v_n = d(x restricted to Q_n) in Q_{n+1}.
template <class F>
UnitalModule<F> right_Q_action(const QComplex<F>& q, const IdemRingPtr<F>& ring) {
  const F& f = q.field();
  const int D = ring->degree();
  if (D > q.degree()) throw std::out_of_range("Q is not built to the truncation of the ring");
  const bool overR = ring->kind() == RingKind::C;
  if (overR && ring->coeff()->n != q.ext().R->n) throw std::invalid_argument("C must have coefficients in R");
  const int r = ring->coeff()->n;
  std::vector<int> off;
  int total = 0;
  for (int n = 0; n <= D; ++n) {
    off.push_back(total);
    total += q.dim(n);
  }
  UnitalModule<F> M;
  M.ring = ring;
  M.right = true;
  M.dim = total;
  M.act.assign(ring->alg()->n, Mat<F>(f, total, total));
  for (int n = 0; n <= D; ++n)
    for (int k = 0; k < r; ++k) {
      Mat<F> rk = overR ? q.bimodule(n).right[k] : Mat<F>::identity(f, q.dim(n));
      Mat<F>& hk = M.act[ring->elem(ring->h(n), k)];
      for (int i = 0; i < q.dim(n); ++i)
        for (int j = 0; j < q.dim(n); ++j) hk(off[n] + i, off[n] + j) = rk(i, j);
      if (n < D) {
        Mat<F> dk = (overR ? q.bimodule(n + 1).right[k] : Mat<F>::identity(f, q.dim(n + 1))) * q.diff(n);
        Mat<F>& vk = M.act[ring->elem(ring->v(n), k)];
        for (int i = 0; i < q.dim(n + 1); ++i)
          for (int j = 0; j < q.dim(n); ++j) vk(off[n + 1] + i, off[n] + j) = dk(i, j);
      }
    }
  return M;
}

}  // namespace coendo
