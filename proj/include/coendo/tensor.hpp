#pragma once

#include <vector>

#include "coendo/algebra.hpp"

namespace coendo {

// Balanced tensor powers T_n = M^{(x)_S n} of an (S,S)-bimodule M, n = 1..N.
// Basis elements of T_n are words of letters (basis indices of M); T_n is
// realized as the quotient of T_{n-1} (x)_k M by the balancing relations.
template <class F>
class TensorPowers {
 public:
  TensorPowers() = default;
  TensorPowers(const Bimodule<F>& M, int N) : M_(M), N_(N) {
    const F& f = M.field();
    const int m = M.dim;
    nf_.resize(N + 1);
    words_.resize(N + 1);
    ext_.resize(N + 1);
    if (N < 1) return;
    nf_[1] = NormalForm<F>(f, m);
    for (int i = 0; i < m; ++i) words_[1].push_back({i});
    const bool ground = M.L->n == 1;
    for (int n = 2; n <= N; ++n) {
      const int prev = dim(n - 1);
      Echelon<F> rel(f, prev * m);
      if (!ground)
        for (int s = 0; s < M.L->n; ++s)
          for (int b = 0; b < prev; ++b) {
            SpVec<F> xs = map_last(n - 1, sp_unit(f, b), M.right[s]);
            for (int y = 0; y < m; ++y) {
              SpAccum<F> acc(f);
              for (const auto& [c, v] : xs) acc.add(c * m + y, v);
              for (int z = 0; z < m; ++z) acc.add(b * m + z, f.neg(M.left[s](z, y)));
              rel.insert(acc.take());
            }
          }
      nf_[n] = NormalForm<F>(std::move(rel));
      for (int q = 0; q < nf_[n].dim(); ++q) {
        int c = nf_[n].section(q);
        auto w = words_[n - 1][c / m];
        w.push_back(c % m);
        words_[n].push_back(std::move(w));
      }
      ext_[n - 1].resize(size_t(prev) * m);
      for (int c = 0; c < prev * m; ++c) ext_[n - 1][c] = nf_[n].project_col(c);
    }
  }

  const Bimodule<F>& module() const { return M_; }
  const F& field() const { return M_.field(); }
  int letters() const { return M_.dim; }
  int max_power() const { return N_; }
  int dim(int n) const { return nf_[n].dim(); }
  const std::vector<int>& word(int n, int b) const { return words_[n][b]; }

  // x (x) letter, from T_n to T_{n+1}
  SpVec<F> extend(int n, const SpVec<F>& x, const SpVec<F>& letter) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [b, xv] : x)
      for (const auto& [l, lv] : letter) acc.add_vec(f.mul(xv, lv), ext_[n][size_t(b) * letters() + l]);
    return acc.take();
  }

  SpVec<F> nf_letters(const std::vector<SpVec<F>>& ls) const {
    SpVec<F> x = ls[0];
    for (size_t k = 1; k < ls.size(); ++k) x = extend(static_cast<int>(k), x, ls[k]);
    return x;
  }
  SpVec<F> nf_word(const std::vector<int>& w) const {
    const F& f = field();
    SpVec<F> x = sp_unit(f, w[0]);
    for (size_t k = 1; k < w.size(); ++k) x = extend(static_cast<int>(k), x, sp_unit(f, w[k]));
    return x;
  }

  // T_p (x) T_q -> T_{p+q}
  SpVec<F> concat(int p, const SpVec<F>& x, int q, const SpVec<F>& y) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [a, xv] : x) {
      for (const auto& [b, yv] : y) {
        SpVec<F> z = sp_unit(f, a);
        const auto& w = word(q, b);
        for (int k = 0; k < q; ++k) z = extend(p + k, z, sp_unit(f, w[k]));
        acc.add_vec(f.mul(xv, yv), z);
      }
    }
    return acc.take();
  }

  // Applies g (right S-linear) to the first letter.
  SpVec<F> map_first(int n, const SpVec<F>& x, const Mat<F>& g) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [b, xv] : x) {
      const auto& w = word(n, b);
      SpVec<F> z = g.apply(sp_unit(f, w[0]));
      for (int k = 1; k < n; ++k) z = extend(k, z, sp_unit(f, w[k]));
      acc.add_vec(xv, z);
    }
    return acc.take();
  }
  // Applies g (left S-linear) to the last letter.
  SpVec<F> map_last(int n, const SpVec<F>& x, const Mat<F>& g) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [b, xv] : x) {
      const auto& w = word(n, b);
      SpVec<F> z;
      if (n == 1) {
        z = g.apply(sp_unit(f, w[0]));
      } else {
        z = sp_unit(f, w[0]);
        for (int k = 1; k < n - 1; ++k) z = extend(k, z, sp_unit(f, w[k]));
        z = extend(n - 1, z, g.apply(sp_unit(f, w[n - 1])));
      }
      acc.add_vec(xv, z);
    }
    return acc.take();
  }

 private:
  Bimodule<F> M_;
  int N_ = 0;
  std::vector<NormalForm<F>> nf_;
  std::vector<std::vector<std::vector<int>>> words_;
  std::vector<std::vector<SpVec<F>>> ext_;  // ext_[n][b*m + l]: class of word_b (x) l in T_{n+1}
};

}  // namespace coendo
