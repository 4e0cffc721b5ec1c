#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "coendo/coring.hpp"
#include "coendo/qcomplex.hpp"

namespace coendo {

// R (x) R^op; basis e_i (x) e_j^o has index i * r + j.
template <class F>
FinAlgebra<F> enveloping(const FinAlgebra<F>& R) {
  const F& f = R.f;
  const int r = R.n;
  FinAlgebra<F> E(f, r * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) E.labels[i * r + j] = R.labels[i] + "(x)" + R.labels[j] + "°";
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          SpAccum<F> acc(f);
          for (const auto& [a, va] : R.prod[i][k])
            for (const auto& [b, vb] : R.prod[l][j]) acc.add(a * r + b, f.mul(va, vb));
          E.prod[i * r + j][k * r + l] = acc.take();
        }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) E.unit[a * r + b] = f.mul(R.unit[a], R.unit[b]);
  return E;
}

template <class F>
Vec<F> kron_vec(const F& f, const Vec<F>& x, const Vec<F>& y) {
  Vec<F> out(x.size() * y.size(), f.zero());
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) out[i * y.size() + j] = f.mul(x[i], y[j]);
  return out;
}

// Truncated word model: T_Re(A (x) *A) in degrees <= d modulo the span of
// u g v (total degree <= d) for the generators
//   g1 = sum_i (a (x) e_i phi)(a' (x) *e_i) - aa' (x) phi,   g2 = 1 (x) phi(1)^o - 1_A (x) phi.
// Here *A is the left dual of A; a letter (a, phi) has index a * dim(*A) + phi.
template <class F>
class WordModel {
 public:
  WordModel(QPtr<F> q, int d) : q_(std::move(q)), d_(d) {
    if (d < 1) throw std::invalid_argument("word model needs d >= 1");
    if (d > q_->degree()) throw std::out_of_range("word model degree exceeds the complex");
    const auto& ext = q_->ext();
    const F& f = field();
    const auto& R = *ext.R;
    const int r = R.n, a = ext.A->n, da = q_->dual_dim(1);
    Re_ = std::make_shared<const FinAlgebra<F>>(enveloping(R));
    V_.L = V_.S = Re_;
    V_.dim = a * da;
    const auto& Ad = q_->dual(1).dual;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        Vec<F> ui = ext.u.col(i);
        V_.left.push_back(kron(ext.A->lmul(ui), Ad.right[j]));
        V_.right.push_back(kron(ext.A->rmul(ui), Ad.left[j]));
      }
    tp_ = TensorPowers<F>(V_, std::max(d, 2));  // generators need words of length 2

    offset_.assign(d + 1, 0);
    int off = 0;
    for (int n = d; n >= 0; --n) {
      offset_[n] = off;
      off += tdim(n);
    }
    amb_dim_ = off;

    // generators as graded elements
    std::vector<Graded> gens;
    const auto pairs = q_->dual_pairs(1);
    for (int x = 0; x < a; ++x)
      for (int y = 0; y < a; ++y)
        for (int p = 0; p < da; ++p) {
          Graded g;
          g.top = 2;
          SpAccum<F> two(f);
          Vec<F> phi = unit_vec(f, da, p);
          for (const auto& [e, se] : pairs) {
            Vec<F> ephi = left_A_on_dual(e, phi);
            two.add_vec(f.one(), tp_.extend(1, letter(ext.A->basis(x), ephi), letter(ext.A->basis(y), se)));
          }
          g.parts.push_back({2, two.take()});
          g.parts.push_back({1, sp_scale(f, f.neg(f.one()), letter(ext.A->mul(ext.A->basis(x), ext.A->basis(y)), phi))});
          gens.push_back(std::move(g));
        }
    for (int p = 0; p < da; ++p) {
      Vec<F> phi = unit_vec(f, da, p);
      Graded g;
      g.top = 1;
      g.parts.push_back({0, to_sparse(f, kron_vec(f, R.unit, q_->eval(1, phi, ext.A->unit)))});
      g.parts.push_back({1, sp_scale(f, f.neg(f.one()), letter(ext.A->unit, phi))});
      gens.push_back(std::move(g));
    }
    Echelon<F> rel(f, amb_dim_);
    for (const auto& g : gens)
      for (int pu = 0; pu + g.top <= d; ++pu)
        for (int pv = 0; pu + g.top + pv <= d; ++pv)
          for (int u = 0; u < tdim(pu); ++u)
            for (int v = 0; v < tdim(pv); ++v) {
              SpAccum<F> acc(f);
              for (const auto& [deg, part] : g.parts) {
                SpVec<F> x = mul_t(pu, sp_unit(f, u), deg, part);
                x = mul_t(pu + deg, x, pv, sp_unit(f, v));
                acc.add_vec(f.one(), lift(pu + deg + pv, x));
              }
              rel.insert(acc.take());
            }
    rel_rows_ = rel.rows();
    nf_ = NormalForm<F>(std::move(rel));
    for (int b = 0; b < nf_.dim(); ++b) degree_.push_back(section(b).first);
  }

  const F& field() const { return q_->field(); }
  const QComplex<F>& complex() const { return *q_; }
  const AlgPtr<F>& enveloping_ring() const { return Re_; }
  const TensorPowers<F>& words() const { return tp_; }
  int degree() const { return d_; }
  int dim() const { return nf_.dim(); }
  int ambient_dim() const { return amb_dim_; }
  const std::vector<int>& degrees() const { return degree_; }
  int dim_upto(int n) const {
    int c = 0;
    for (int g : degree_) c += g <= n;
    return c;
  }
  int tdim(int n) const { return n == 0 ? Re_->n : tp_.dim(n); }
  const std::vector<SpVec<F>>& relation_rows() const { return rel_rows_; }
  const NormalForm<F>& normal_form() const { return nf_; }

  std::pair<int, int> section(int b) const { return decode(nf_.section(b)); }
  std::pair<int, int> decode(int c) const {
    for (int n = 0; n <= d_; ++n)
      if (c >= offset_[n] && c < offset_[n] + tdim(n)) return {n, c - offset_[n]};
    throw std::out_of_range("ambient index");
  }

  // (a, phi) in V-coordinates
  SpVec<F> letter(const Vec<F>& a, const Vec<F>& phi) const {
    const F& f = field();
    const int da = q_->dual_dim(1);
    SpAccum<F> acc(f);
    for (size_t x = 0; x < a.size(); ++x) {
      if (f.is_zero(a[x])) continue;
      for (int p = 0; p < da; ++p)
        if (!f.is_zero(phi[p])) acc.add(int(x) * da + p, f.mul(a[x], phi[p]));
    }
    return acc.take();
  }

  // (a phi)(x) = phi(x a)
  Vec<F> left_A_on_dual(const Vec<F>& a, const Vec<F>& phi) const {
    const auto& ext = q_->ext();
    return q_->dual(1).coords_or_throw(q_->dual(1).functional(phi) * ext.A->rmul(a));
  }

  SpVec<F> lift(int n, const SpVec<F>& t) const {
    SpVec<F> out;
    for (const auto& [i, v] : t) out.emplace_back(offset_[n] + i, v);
    return out;
  }
  SpVec<F> cls(const SpVec<F>& ambient) const { return nf_.project(ambient); }
  SpVec<F> cls_t(int n, const SpVec<F>& t) const { return cls(lift(n, t)); }
  SpVec<F> cls_letters(const std::vector<SpVec<F>>& ls) const {
    return cls_t(static_cast<int>(ls.size()), tp_.nf_letters(ls));
  }
  // class of pi(a (x) phi)
  SpVec<F> gen(const Vec<F>& a, const Vec<F>& phi) const { return cls_t(1, letter(a, phi)); }
  // class of r (x) s^o
  SpVec<F> re_elem(const Vec<F>& r, const Vec<F>& s) const { return cls_t(0, to_sparse(field(), kron_vec(field(), r, s))); }

  // Product T_p x T_q -> T_{p+q} (T_0 = Re acting on words).
  SpVec<F> mul_t(int p, const SpVec<F>& x, int q, const SpVec<F>& y) const {
    const F& f = field();
    if (x.empty() || y.empty()) return {};
    if (p == 0 && q == 0) {
      SpAccum<F> acc(f);
      for (const auto& [i, xv] : x)
        for (const auto& [j, yv] : y) acc.add_vec(f.mul(xv, yv), Re_->prod[i][j]);
      return acc.take();
    }
    if (p == 0) {
      SpAccum<F> acc(f);
      for (const auto& [k, xv] : x) acc.add_vec(xv, tp_.map_first(q, y, V_.left[k]));
      return acc.take();
    }
    if (q == 0) {
      SpAccum<F> acc(f);
      for (const auto& [k, yv] : y) acc.add_vec(yv, tp_.map_last(p, x, V_.right[k]));
      return acc.take();
    }
    return tp_.concat(p, x, q, y);
  }

  std::optional<SpVec<F>> mul_basis(int a, int b) const {
    auto [n, x] = section(a);
    auto [m, y] = section(b);
    if (n + m > d_) return std::nullopt;
    const F& f = field();
    return cls_t(n + m, mul_t(n, sp_unit(f, x), m, sp_unit(f, y)));
  }

  // eps of a T_n basis word: phi_1(a_1 phi_2(a_2 ... phi_n(a_n))).
  Vec<F> eps_t(int n, int w) const {
    const auto& ext = q_->ext();
    const F& f = field();
    const auto& R = *ext.R;
    const int r = R.n, da = q_->dual_dim(1);
    if (n == 0) return R.mul(R.basis(w / r), R.basis(w % r));
    const auto& word = tp_.word(n, w);
    Vec<F> e = R.unit;
    for (int k = n - 1; k >= 0; --k) {
      const int a = word[k] / da, p = word[k] % da;
      Vec<F> ae = ext.A->mul(ext.A->basis(a), ext.u * e);
      e = q_->eval(1, unit_vec(f, da, p), ae);
    }
    return e;
  }

  // Delta of a T_n basis word as (left class, right class) pairs.
  std::vector<std::pair<SpVec<F>, SpVec<F>>> delta_t(int n, int w) const {
    const auto& ext = q_->ext();
    const F& f = field();
    const auto& R = *ext.R;
    const int r = R.n, da = q_->dual_dim(1);
    std::vector<std::pair<SpVec<F>, SpVec<F>>> out;
    if (n == 0) {
      out.emplace_back(re_elem(R.basis(w / r), R.unit), re_elem(R.unit, R.basis(w % r)));
      return out;
    }
    const auto pairs = q_->dual_pairs(1);
    const auto& word = tp_.word(n, w);
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<SpVec<F>> left, right;
      for (int k = 0; k < n; ++k) {
        const int a = word[k] / da, p = word[k] % da;
        left.push_back(letter(ext.A->basis(a), pairs[idx[k]].second));
        right.push_back(letter(pairs[idx[k]].first, unit_vec(f, da, p)));
      }
      out.emplace_back(cls_letters(left), cls_letters(right));
      int k = n - 1;
      while (k >= 0 && ++idx[k] == static_cast<int>(pairs.size())) idx[k--] = 0;
      if (k < 0) break;
    }
    return out;
  }

  // Re acting on a T_n element from the left or right.
  SpVec<F> re_left(int n, const Vec<F>& re, const SpVec<F>& x) const {
    return mul_t(0, to_sparse(field(), re), n, x);
  }
  SpVec<F> re_right(int n, const SpVec<F>& x, const Vec<F>& re) const {
    return mul_t(n, x, 0, to_sparse(field(), re));
  }

 private:
  struct Graded {
    int top = 0;
    std::vector<std::pair<int, SpVec<F>>> parts;
  };

  QPtr<F> q_;
  int d_;
  AlgPtr<F> Re_;
  Bimodule<F> V_;
  TensorPowers<F> tp_;
  std::vector<int> offset_;
  int amb_dim_ = 0;
  std::vector<SpVec<F>> rel_rows_;
  NormalForm<F> nf_;
  std::vector<int> degree_;
};

template <class F>
using WordModelPtr = std::shared_ptr<const WordModel<F>>;

// Coring structure of the word model: r |> x = (r (x) 1^o) x, x <| s = (1 (x) s^o) x,
// Delta and eps extended from pi(a (x) phi) -> sum pi(a (x) *e_i) (x) pi(e_i (x) phi), phi(a).
template <class F>
CoringPtr<F> make_coring(const WordModelPtr<F>& W) {
  const F& f = W->field();
  const auto& R = W->complex().ext().R;
  const int r = R->n;
  auto C = std::make_shared<CoringData<F>>();
  C->name = "L";
  C->R = R;
  C->dim = W->dim();
  C->degree = W->degrees();
  C->bimod.dim = W->dim();
  C->bimod.left.resize(r);
  C->bimod.right.resize(r);
  C->right_s.resize(r);
  C->right_t.resize(r);
  for (int b = 0; b < W->dim(); ++b) {
    auto [n, w] = W->section(b);
    SpVec<F> x = sp_unit(f, w);
    for (int k = 0; k < r; ++k) {
      Vec<F> sk = kron_vec(f, R->basis(k), R->unit), tk = kron_vec(f, R->unit, R->basis(k));
      C->bimod.left[k].push_back(W->cls_t(n, W->re_left(n, sk, x)));
      C->bimod.right[k].push_back(W->cls_t(n, W->re_left(n, tk, x)));
      C->right_s[k].push_back(W->cls_t(n, W->re_right(n, x, sk)));
      C->right_t[k].push_back(W->cls_t(n, W->re_right(n, x, tk)));
    }
    C->eps.push_back(W->eps_t(n, w));
  }
  auto cc = std::make_shared<RTensor<F>>(R, C->bimod, C->bimod);
  C->cc = cc;
  for (int b = 0; b < W->dim(); ++b) {
    auto [n, w] = W->section(b);
    SpAccum<F> acc(f);
    for (const auto& [x, y] : W->delta_t(n, w)) acc.add_vec(f.one(), cc->tensor(x, y));
    C->delta.push_back(acc.take());
  }
  C->mul = [W](int a, int b) { return W->mul_basis(a, b); };
  C->unit = [W](const Vec<F>& x, const Vec<F>& y) { return W->re_elem(x, y); };
  return C;
}

}  // namespace coendo
