#pragma once

#include <map>
#include <memory>
#include <vector>

#include "coendo/check.hpp"
#include "coendo/comatrix.hpp"
#include "coendo/coring_checks.hpp"
#include "coendo/wordmodel.hpp"

namespace coendo {

// A coaction value sum_b c_b (x) v_b with c_b a basis element of the coring
// and v_b a module vector; a representative in C (x)_k M.
template <class F>
using FormalCoaction = std::vector<std::pair<int, Vec<F>>>;

template <class F>
FormalCoaction<F> formal_add(const F& f, const FormalCoaction<F>& x, const FormalCoaction<F>& y) {
  std::map<int, Vec<F>> acc;
  for (const auto* z : {&x, &y})
    for (const auto& [b, v] : *z) {
      auto it = acc.find(b);
      if (it == acc.end())
        acc.emplace(b, v);
      else
        it->second = vadd(f, it->second, v);
    }
  FormalCoaction<F> out;
  for (auto& [b, v] : acc)
    if (!is_zero_vec(f, v)) out.emplace_back(b, std::move(v));
  return out;
}

// lambda_n on the Q_n basis with values in the word model:
// a_1 (x) ... (x) a_n -> sum pi(a_1 (x) *e_i1) ... pi(a_n (x) *e_in) (x) rho_n(e_i1 (x) ... (x) e_in).
template <class F>
std::vector<FormalCoaction<F>> word_coaction(const WordModel<F>& W, int n) {
  const QComplex<F>& q = W.complex();
  const auto& ext = q.ext();
  const F& f = q.field();
  const int da = q.dual_dim(1);
  (void)da;
  std::vector<FormalCoaction<F>> out;
  if (n == 0) {
    for (int i = 0; i < ext.R->n; ++i) {
      SpVec<F> c = W.re_elem(ext.R->basis(i), ext.R->unit);
      std::map<int, Vec<F>> acc;
      for (const auto& [b, v] : c) acc[b] = vscale(f, v, ext.R->unit);
      out.emplace_back(acc.begin(), acc.end());
    }
    return out;
  }
  const auto pairs = q.dual_pairs(1);
  const auto& tp = q.tensors();
  for (int i = 0; i < q.dim(n); ++i) {
    std::map<int, Vec<F>> acc;
    for (const auto& [w, cw] : q.embed(n, unit_vec(f, q.dim(n), i))) {
      const auto& word = tp.word(n, w);
      std::vector<int> idx(n, 0);
      while (true) {
        std::vector<SpVec<F>> left, right;
        for (int k = 0; k < n; ++k) {
          left.push_back(W.letter(ext.A->basis(word[k]), pairs[idx[k]].second));
          right.push_back(to_sparse(f, pairs[idx[k]].first));
        }
        SpVec<F> cls = W.cls_letters(left);
        if (!cls.empty()) {
          Vec<F> v = q.retraction(n) * to_dense(f, tp.nf_letters(right), q.tdim(n));
          for (const auto& [b, c] : cls) {
            auto it = acc.find(b);
            Vec<F> add = vscale(f, f.mul(cw, c), v);
            if (it == acc.end())
              acc.emplace(b, add);
            else
              it->second = vadd(f, it->second, add);
          }
        }
        int k = n - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(pairs.size())) idx[k--] = 0;
        if (k < 0) break;
      }
    }
    FormalCoaction<F> lam;
    for (auto& [b, v] : acc)
      if (!is_zero_vec(f, v)) lam.emplace_back(b, std::move(v));
    out.push_back(std::move(lam));
  }
  return out;
}

// lambda_n with values in D: u -> sum_a [u (x) *w_a] (x) w_a.
template <class F>
std::vector<FormalCoaction<F>> comatrix_coaction(const Comatrix<F>& D, int n) {
  const QComplex<F>& q = D.complex();
  const F& f = q.field();
  std::vector<FormalCoaction<F>> out;
  for (int i = 0; i < q.dim(n); ++i) {
    FormalCoaction<F> lam;
    for (const auto& [w, sw] : q.dual_pairs(n)) {
      FormalCoaction<F> term;
      for (const auto& [b, c] : D.cls_pure(n, unit_vec(f, q.dim(n), i), sw)) term.emplace_back(b, vscale(f, c, w));
      lam = formal_add(f, lam, term);
    }
    out.push_back(std::move(lam));
  }
  return out;
}

// can_B, zeta and the checks relating D_B with the word model.
template <class F>
class CanonicalMaps {
 public:
  CanonicalMaps(ComatrixPtr<F> D, WordModelPtr<F> W) : D_(std::move(D)), W_(std::move(W)) {
    if (D_->kind() != RingKind::B) throw std::invalid_argument("can_B needs the B-comatrix");
    if (D_->degree() != W_->degree()) throw std::invalid_argument("truncation degrees differ");
    CD_ = make_coring(D_);
    CL_ = make_coring(W_);
    const QComplex<F>& q = D_->complex();
    const F& f = field();
    for (int n = 0; n <= D_->degree(); ++n) lambda_.push_back(word_coaction(*W_, n));
    can_ = Mat<F>(f, W_->dim(), D_->dim());
    for (int b = 0; b < D_->dim(); ++b) {
      auto [n, i, j] = D_->section(b);
      can_.set_col(b, to_dense(f, can_pure(n, i, unit_vec(f, q.dual_dim(n), j)), W_->dim()));
    }
    zeta_ = Mat<F>(f, D_->dim(), W_->dim());
    for (int b = 0; b < W_->dim(); ++b) {
      auto [n, w] = W_->section(b);
      zeta_.set_col(b, to_dense(f, zeta_t(n, sp_unit(f, w)), D_->dim()));
    }
  }

  const F& field() const { return D_->field(); }
  const Comatrix<F>& comatrix() const { return *D_; }
  const WordModel<F>& words() const { return *W_; }
  const CoringPtr<F>& comatrix_coring() const { return CD_; }
  const CoringPtr<F>& word_coring() const { return CL_; }
  const Mat<F>& can() const { return can_; }
  const Mat<F>& zeta() const { return zeta_; }
  const std::vector<FormalCoaction<F>>& lambda(int n) const { return lambda_.at(n); }

  // sum_b t(phi(v_b)) l_b over lambda_n(u_i)
  SpVec<F> can_pure(int n, int i, const Vec<F>& phi) const {
    const QComplex<F>& q = D_->complex();
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [b, v] : lambda_[n][i]) {
      Vec<F> s = q.eval(n, phi, v);
      acc.add_vec(f.one(), RBimod<F>::apply_combo(f, CL_->bimod.right, s, sp_unit(f, b)));
    }
    return acc.take();
  }

  // zeta on a T_n element of the word model (multiplicative extension of a (x) phi -> [a (x) phi]).
  SpVec<F> zeta_t(int n, const SpVec<F>& x) const {
    const F& f = field();
    const auto& R = *D_->complex().ext().R;
    const int r = R.n, da = D_->complex().dual_dim(1), a = D_->complex().ext().A->n;
    SpAccum<F> acc(f);
    for (const auto& [w, c] : x) {
      SpVec<F> z;
      if (n == 0) {
        z = D_->unit_elem(R.basis(w / r), R.basis(w % r));
      } else {
        const auto& word = W_->words().word(n, w);
        for (int k = 0; k < n; ++k) {
          SpVec<F> g = D_->cls_pure(1, unit_vec(f, a, word[k] / da), unit_vec(f, da, word[k] % da));
          if (k == 0) {
            z = g;
          } else {
            auto p = CD_->mul_elems(z, g);
            if (!p) throw std::logic_error("zeta beyond truncation");
            z = *p;
          }
        }
      }
      acc.add_vec(c, z);
    }
    return acc.take();
  }

  // zeta on a relation row of the ambient word space
  SpVec<F> zeta_ambient(const SpVec<F>& amb) const {
    const F& f = field();
    std::map<int, SpVec<F>> by_degree;
    for (const auto& [c, v] : amb) {
      auto [n, w] = W_->decode(c);
      by_degree[n].emplace_back(w, v);
    }
    SpAccum<F> acc(f);
    for (auto& [n, x] : by_degree) acc.add_vec(f.one(), zeta_t(n, x));
    return acc.take();
  }

  std::vector<Check> checks() const {
    const F& f = field();
    std::vector<Check> out;
    Check zc{"can", "can o zeta = id"}, cz{"can", "zeta o can = id"}, wd{"can", "zeta kills the word relations"},
        mul{"can", "can is multiplicative"}, cor{"can", "can is a coring map"}, dims{"can", "dimensions agree"};
    zc.unit = cz.unit = "basis vectors";
    for (int n = 0; n <= D_->degree(); ++n) {
      if (D_->dim_upto(n) != W_->dim_upto(n))
        dims.fail("degree " + std::to_string(n) + ": D has " + std::to_string(D_->dim_upto(n)) + ", L' has " +
                  std::to_string(W_->dim_upto(n)));
      ++dims.count;
    }
    Mat<F> cZ = can_ * zeta_, Zc = zeta_ * can_;
    for (int b = 0; b < W_->dim(); ++b) {
      if (!vec_eq(f, cZ.col(b), unit_vec(f, W_->dim(), b))) zc.fail("fails on word basis element " + std::to_string(b));
      ++zc.count;
    }
    for (int b = 0; b < D_->dim(); ++b) {
      if (!vec_eq(f, Zc.col(b), unit_vec(f, D_->dim(), b))) cz.fail("fails on basis element " + std::to_string(b));
      ++cz.count;
    }
    for (const auto& row : W_->relation_rows()) {
      if (!zeta_ambient(row).empty()) wd.fail("a relation has nonzero image");
      ++wd.count;
    }
    for (int a = 0; a < D_->dim(); ++a)
      for (int b = 0; b < D_->dim(); ++b) {
        auto ab = CD_->mul(a, b);
        if (!ab) continue;
        auto lhs = can_.apply(*ab);
        auto rhs = CL_->mul_elems(can_.apply(sp_unit(f, a)), can_.apply(sp_unit(f, b)));
        if (!rhs || !sp_eq(f, lhs, *rhs))
          mul.fail("fails on the pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        ++mul.count;
      }
    for (int b = 0; b < D_->dim(); ++b) {
      SpVec<F> img = can_.apply(sp_unit(f, b));
      if (!vec_eq(f, CL_->eps_of(img), CD_->eps[b])) cor.fail("eps differs on basis element " + std::to_string(b));
      SpAccum<F> dd(f);
      for (const auto& [beta, c] : CD_->delta[b]) {
        auto [i, j] = CD_->cc->section(beta);
        dd.add_vec(c, CL_->cc->tensor(can_.apply(sp_unit(f, i)), can_.apply(sp_unit(f, j))));
      }
      if (!sp_eq(f, dd.take(), CL_->delta_of(img)))
        cor.fail("Delta differs on basis element " + std::to_string(b));
      for (int k = 0; k < CD_->R->n; ++k) {
        SpVec<F> l1 = can_.apply(CD_->bimod.left[k][b]), l2 = RBimod<F>::apply(f, CL_->bimod.left[k], img);
        SpVec<F> r1 = can_.apply(CD_->bimod.right[k][b]), r2 = RBimod<F>::apply(f, CL_->bimod.right[k], img);
        if (!sp_eq(f, l1, l2) ||
            !sp_eq(f, r1, r2))
          cor.fail("R-actions differ on basis element " + std::to_string(b));
      }
      ++cor.count;
    }
    out = {dims, zc, cz, wd, mul, cor};
    return out;
  }

 private:
  ComatrixPtr<F> D_;
  WordModelPtr<F> W_;
  CoringPtr<F> CD_, CL_;
  std::vector<std::vector<FormalCoaction<F>>> lambda_;
  Mat<F> can_, zeta_;
};

}  // namespace coendo
