#pragma once

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "coendo/tensor.hpp"

namespace coendo {

// The complex Q_0 = R, Q_1 = A, Q_n = K^{(x)_A (n-1)} inside A^{(x)_R n},
// with differential, left-A-linear retractions T_n -> Q_n, left duals,
// dual bases and the convolution product on the duals.
template <class F>
class QComplex {
 public:
  using E = typename F::E;

  QComplex(const RRingExt<F>& ext, int d) : ext_(ext), d_(d) {
    if (d < 0) throw std::invalid_argument("negative degree");
    const F& f = ext.field();
    const int a = ext.A->n, r = ext.R->n;
    auto Ar = Bimodule<F>::regular(ext.A);
    Abim_ = Ar.restrict(ext.R, ext.u, ext.R, ext.u);
    tp_ = TensorPowers<F>(Abim_, std::max(d, 1));
    for (int j = 0; j < a; ++j) {
      lmulA_.push_back(ext.A->lmul(ext.A->basis(j)));
      rmulA_.push_back(ext.A->rmul(ext.A->basis(j)));
    }
    one_ = to_sparse(f, ext.A->unit);

    space_.resize(d + 1);
    space_[0] = Subspace<F>::span(f, r, [&] {
      std::vector<SpVec<F>> g;
      for (int k = 0; k < r; ++k) g.push_back(sp_unit(f, k));
      return g;
    }());
    if (d >= 1) {
      std::vector<SpVec<F>> g;
      for (int k = 0; k < a; ++k) g.push_back(sp_unit(f, k));
      space_[1] = Subspace<F>::span(f, a, g);
    }
    for (int n = 2; n <= d; ++n) {
      std::vector<SpVec<F>> gens;
      for (int i = 0; i < dim(n - 1); ++i) {
        SpVec<F> x = space_[n - 1].row(i);
        for (int j = 0; j < a; ++j) {
          SpVec<F> xe = tp_.extend(n - 1, x, sp_unit(f, j));
          SpVec<F> xej = tp_.extend(n - 1, tp_.map_last(n - 1, x, rmulA_[j]), one_);
          gens.push_back(sp_sub(f, xe, xej));
        }
      }
      space_[n] = Subspace<F>::span(f, tp_.dim(n), gens);
    }

    // differentials
    for (int n = 0; n < d; ++n) {
      Mat<F> D(f, dim(n + 1), dim(n));
      for (int i = 0; i < dim(n); ++i)
        D.set_col(i, coords(n + 1, coboundary(n, embed(n, unit_vec(f, dim(n), i)))));
      diff_.push_back(D);
    }

    // retractions rho_n : T_n -> Q_n in Q-coordinates
    rho_.resize(d + 1);
    for (int n = 1; n <= d; ++n) {
      Mat<F> P(f, dim(n), tp_.dim(n));
      std::vector<SpVec<F>> img(tp_.dim(n));
      for (int b = 0; b < tp_.dim(n); ++b) {
        const auto& w = tp_.word(n, b);
        SpVec<F> v;
        if (n == 1) {
          v = sp_unit(f, w[0]);
        } else {
          std::vector<int> prefix(w.begin(), w.end() - 1);
          int pb = prefix_index(n - 1, prefix);
          SpVec<F> x = rho_img_[n - 1][pb];
          SpVec<F> xe = tp_.extend(n - 1, x, sp_unit(f, w.back()));
          SpVec<F> xej = tp_.extend(n - 1, tp_.map_last(n - 1, x, rmulA_[w.back()]), one_);
          v = sp_sub(f, xe, xej);
        }
        img[b] = v;
        P.set_col(b, coords(n, v));
      }
      rho_img_.resize(n + 1);
      rho_img_[n] = std::move(img);
      rho_[n] = P;
    }

    // bimodule structures and duals
    for (int n = 0; n <= d; ++n) {
      Bimodule<F> B;
      B.L = B.S = ext.R;
      B.dim = dim(n);
      for (int k = 0; k < r; ++k) {
        B.left.push_back(n == 0 ? ext.R->lmul(ext.R->basis(k)) : act_A(n, ext.u.col(k), true));
        B.right.push_back(n == 0 ? ext.R->rmul(ext.R->basis(k)) : act_A(n, ext.u.col(k), false));
      }
      bim_.push_back(B);
      duals_.push_back(left_dual(B));
      auto db = dual_basis_left<F>(ext.R, B.left, B.dim);
      if (!db) throw std::runtime_error("Q_" + std::to_string(n) + " is not projective as a left R-module");
      dbases_.push_back(*db);
    }

    // splits of the Q_{n+m} basis into T_n (x) T_m terms, n + m <= d
    splits_.assign(d + 1, std::vector<std::vector<std::vector<SplitTerm>>>(d + 1));
    for (int n = 0; n <= d; ++n)
      for (int m = 0; n + m <= d; ++m) {
        auto& out = splits_[n][m];
        const int k = n + m;
        for (int z = 0; z < dim(k); ++z) {
          std::vector<SplitTerm> terms;
          SpVec<F> zt = embed(k, unit_vec(f, dim(k), z));
          if (n == 0 || m == 0) {
            SpVec<F> one_r = to_sparse(f, ext.R->unit);
            if (n == 0)
              terms.push_back({f.one(), one_r, zt});
            else
              terms.push_back({f.one(), zt, one_r});
          } else {
            for (const auto& [b, c] : zt) {
              const auto& w = tp_.word(k, b);
              std::vector<int> w1(w.begin(), w.begin() + n), w2(w.begin() + n, w.end());
              terms.push_back({c, tp_.nf_word(w1), tp_.nf_word(w2)});
            }
          }
          out.push_back(std::move(terms));
        }
      }
  }

  const RRingExt<F>& ext() const { return ext_; }
  const F& field() const { return ext_.field(); }
  int degree() const { return d_; }
  int dim(int n) const { return space_[n].dim(); }
  int tdim(int n) const { return n == 0 ? ext_.R->n : tp_.dim(n); }
  const TensorPowers<F>& tensors() const { return tp_; }
  const Subspace<F>& space(int n) const { return space_[n]; }
  const Mat<F>& diff(int n) const { return diff_.at(n); }
  const Mat<F>& retraction(int n) const { return rho_.at(n); }
  const Bimodule<F>& bimodule(int n) const { return bim_.at(n); }
  const DualModule<F>& dual(int n) const { return duals_.at(n); }
  const DualBasis<F>& dual_basis(int n) const { return dbases_.at(n); }
  int dual_dim(int n) const { return duals_.at(n).dim(); }

  // Q-coordinates <-> T-coordinates (R-coordinates in degree 0)
  SpVec<F> embed(int n, const Vec<F>& c) const { return space_[n].element(c); }
  Vec<F> coords(int n, const SpVec<F>& t) const {
    auto c = space_[n].coords(t);
    if (!c) throw std::logic_error("element does not lie in Q_" + std::to_string(n));
    return *c;
  }
  std::optional<Vec<F>> try_coords(int n, const SpVec<F>& t) const { return space_[n].coords(t); }

  // Alternating insertion of 1_A on T_n (u on T_0 = R).
  SpVec<F> coboundary(int n, const SpVec<F>& x) const {
    const F& f = field();
    if (n == 0) return to_sparse(f, ext_.u * to_dense(f, x, ext_.R->n));
    SpAccum<F> acc(f);
    for (const auto& [b, c] : x) {
      const auto& w = tp_.word(n, b);
      for (int i = 0; i <= n; ++i) {
        std::vector<SpVec<F>> letters;
        for (int k = 0; k < i; ++k) letters.push_back(sp_unit(f, w[k]));
        letters.push_back(one_);
        for (int k = i; k < n; ++k) letters.push_back(sp_unit(f, w[k]));
        acc.add_vec(i % 2 ? f.neg(c) : c, tp_.nf_letters(letters));
      }
    }
    return acc.take();
  }

  // Left (left = true) or right multiplication by a in A on Q_n, n >= 1.
  Mat<F> act_A(int n, const Vec<F>& a, bool left) const {
    const F& f = field();
    Mat<F> g = left ? ext_.A->lmul(a) : ext_.A->rmul(a);
    Mat<F> out(f, dim(n), dim(n));
    for (int i = 0; i < dim(n); ++i) {
      SpVec<F> x = space_[n].row(i);
      out.set_col(i, coords(n, left ? tp_.map_first(n, x, g) : tp_.map_last(n, x, g)));
    }
    return out;
  }

  // Right R-action on T_n (R itself for n = 0).
  SpVec<F> t_right_R(int n, const SpVec<F>& x, const Vec<F>& r) const {
    const F& f = field();
    if (n == 0) return to_sparse(f, ext_.R->mul(to_dense(f, x, ext_.R->n), r));
    return tp_.map_last(n, x, ext_.A->rmul(ext_.u * r));
  }
  SpVec<F> t_left_R(int n, const SpVec<F>& x, const Vec<F>& r) const {
    const F& f = field();
    if (n == 0) return to_sparse(f, ext_.R->mul(r, to_dense(f, x, ext_.R->n)));
    return tp_.map_first(n, x, ext_.A->lmul(ext_.u * r));
  }

  // x (x)_A y : Q_n (x) Q_m -> Q_{n+m-1}, n, m >= 1.
  Vec<F> merge(int n, const Vec<F>& x, int m, const Vec<F>& y) const {
    return coords(n + m - 1, merge_t(n, embed(n, x), m, embed(m, y)));
  }
  SpVec<F> merge_t(int n, const SpVec<F>& x, int m, const SpVec<F>& y) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [i, xv] : x)
      for (const auto& [j, yv] : y) {
        const auto &wx = tp_.word(n, i), &wy = tp_.word(m, j);
        std::vector<SpVec<F>> letters;
        for (int k = 0; k + 1 < n; ++k) letters.push_back(sp_unit(f, wx[k]));
        letters.push_back(ext_.A->prod[wx.back()][wy.front()]);
        if (letters.back().empty()) continue;
        for (int k = 1; k < m; ++k) letters.push_back(sp_unit(f, wy[k]));
        acc.add_vec(f.mul(xv, yv), tp_.nf_letters(letters));
      }
    return acc.take();
  }

  // phi o rho_n as an r x tdim(n) matrix (phi itself in degree 0).
  Mat<F> functional_on_T(int n, const Vec<F>& phi) const {
    Mat<F> fn = duals_[n].functional(phi);
    return n == 0 ? fn : fn * rho_[n];
  }

  // Convolution *Q_n x *Q_m -> *Q_{n+m}:
  // (phi * psi)(z) = sum phi~(z' psi~(z'')) over the split z = z' (x) z''.
  Vec<F> convolve(int n, const Vec<F>& phi, int m, const Vec<F>& psi) const {
    if (n + m > d_) throw std::out_of_range("convolution beyond truncation degree");
    const F& f = field();
    const int r = ext_.R->n;
    Mat<F> ft = functional_on_T(n, phi), gt = functional_on_T(m, psi);
    Mat<F> out(f, r, dim(n + m));
    for (int z = 0; z < dim(n + m); ++z) {
      Vec<F> val = zeros(f, r);
      for (const auto& term : splits_[n][m][z]) {
        Vec<F> inner = to_dense(f, gt.apply(term.right), r);
        SpVec<F> moved = t_right_R(n, term.left, inner);
        axpy(f, val, term.c, to_dense(f, ft.apply(moved), r));
      }
      out.set_col(z, val);
    }
    return duals_[n + m].coords_or_throw(out);
  }

  // d phi = phi o d_{m-1}, *Q_m -> *Q_{m-1}
  Vec<F> dual_diff(int m, const Vec<F>& phi) const {
    return duals_[m - 1].coords_or_throw(duals_[m].functional(phi) * diff_.at(m - 1));
  }

  // *Q_0 element x -> x s
  Vec<F> star0(const Vec<F>& s) const { return duals_[0].coords_or_throw(ext_.R->rmul(s)); }

  // Right dual basis pairs are not needed; left dual basis in Q-coordinates and *Q-coordinates.
  std::vector<std::pair<Vec<F>, Vec<F>>> dual_pairs(int n) const {
    std::vector<std::pair<Vec<F>, Vec<F>>> out;
    const auto& db = dbases_[n];
    for (int i = 0; i < db.size(); ++i) out.emplace_back(db.elems[i], duals_[n].coords_or_throw(db.funcs[i]));
    return out;
  }

  // phi(x) in R
  Vec<F> eval(int n, const Vec<F>& phi, const Vec<F>& x) const { return duals_[n].functional(phi) * x; }

 private:
  struct SplitTerm {
    E c;
    SpVec<F> left, right;
  };

  int prefix_index(int n, const std::vector<int>& w) const {
    SpVec<F> v = tp_.nf_word(w);
    if (v.size() != 1 || !field().is_one(v[0].second)) throw std::logic_error("prefix is not a basis word");
    return v[0].first;
  }

  RRingExt<F> ext_;
  int d_;
  Bimodule<F> Abim_;
  TensorPowers<F> tp_;
  std::vector<Mat<F>> lmulA_, rmulA_;
  SpVec<F> one_;
  std::vector<Subspace<F>> space_;
  std::vector<Mat<F>> diff_;
  std::vector<Mat<F>> rho_;
  std::vector<std::vector<SpVec<F>>> rho_img_;
  std::vector<Bimodule<F>> bim_;
  std::vector<DualModule<F>> duals_;
  std::vector<DualBasis<F>> dbases_;
  std::vector<std::vector<std::vector<std::vector<SplitTerm>>>> splits_;
};

template <class F>
using QPtr = std::shared_ptr<const QComplex<F>>;

}  // namespace coendo
