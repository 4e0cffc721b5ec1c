#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "coendo/check.hpp"
#include "coendo/coring.hpp"
#include "coendo/idempotent.hpp"
#include "coendo/qcomplex.hpp"

namespace coendo {


// Truncated comatrix quotient D = (sum_{n<=d} Q_n (x) *Q_n) / Rel.
// Ambient blocks are ordered by descending degree, (i, j) lexicographic inside
// a block, so normal forms prefer low-degree representatives.
// Rel for B: du (x) phi - u (x) (phi o d). For C additionally ur (x) phi - u (x) r phi.
template <class F>
class Comatrix {
 public:
  Comatrix(QPtr<F> q, int d, RingKind kind) : q_(std::move(q)), d_(d), kind_(kind) {
    if (d > q_->degree()) throw std::out_of_range("comatrix degree exceeds the complex");
    const F& f = field();
    offset_.assign(d + 1, 0);
    int off = 0;
    for (int n = d; n >= 0; --n) {
      offset_[n] = off;
      off += q_->dim(n) * q_->dual_dim(n);
    }
    amb_dim_ = off;
    Echelon<F> rel(f, amb_dim_);
    for (int n = 0; n < d; ++n)
      for (int i = 0; i < q_->dim(n); ++i) {
        Vec<F> du = q_->diff(n).col(i);
        for (int j = 0; j < q_->dual_dim(n + 1); ++j) {
          Vec<F> dphi = q_->dual_diff(n + 1, unit_vec(f, q_->dual_dim(n + 1), j));
          SpVec<F> a = pure(n + 1, du, unit_vec(f, q_->dual_dim(n + 1), j));
          SpVec<F> b = pure(n, unit_vec(f, q_->dim(n), i), dphi);
          rel.insert(sp_sub(f, a, b));
        }
      }
    if (kind == RingKind::C) {
      const int r = q_->ext().R->n;
      for (int n = 0; n <= d; ++n)
        for (int k = 0; k < r; ++k)
          for (int i = 0; i < q_->dim(n); ++i)
            for (int j = 0; j < q_->dual_dim(n); ++j) {
              Vec<F> ur = q_->bimodule(n).right[k].col(i);
              Vec<F> rphi = q_->dual(n).dual.left[k].col(j);
              rel.insert(sp_sub(f, pure(n, ur, unit_vec(f, q_->dual_dim(n), j)),
                                pure(n, unit_vec(f, q_->dim(n), i), rphi)));
            }
    }
    nf_ = NormalForm<F>(std::move(rel));
    for (int b = 0; b < nf_.dim(); ++b) {
      auto [n, i, j] = section(b);
      (void)i;
      (void)j;
      degree_.push_back(n);
    }
  }

  const F& field() const { return q_->field(); }
  const QComplex<F>& complex() const { return *q_; }
  const QPtr<F>& complex_ptr() const { return q_; }
  RingKind kind() const { return kind_; }
  int degree() const { return d_; }
  int dim() const { return nf_.dim(); }
  int ambient_dim() const { return amb_dim_; }
  int degree_of(int b) const { return degree_[b]; }
  const std::vector<int>& degrees() const { return degree_; }
  const NormalForm<F>& normal_form() const { return nf_; }

  // Number of basis elements of filtration degree <= n.
  int dim_upto(int n) const {
    int c = 0;
    for (int g : degree_) c += g <= n;
    return c;
  }

  int amb(int n, int i, int j) const { return offset_[n] + i * q_->dual_dim(n) + j; }
  std::tuple<int, int, int> decode(int c) const {
    for (int n = 0; n <= d_; ++n) {
      const int sz = q_->dim(n) * q_->dual_dim(n);
      if (c >= offset_[n] && c < offset_[n] + sz) {
        const int loc = c - offset_[n];
        return {n, loc / q_->dual_dim(n), loc % q_->dual_dim(n)};
      }
    }
    throw std::out_of_range("ambient index");
  }
  std::tuple<int, int, int> section(int b) const { return decode(nf_.section(b)); }

  // u (x) phi in ambient coordinates
  SpVec<F> pure(int n, const Vec<F>& u, const Vec<F>& phi) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
      if (f.is_zero(u[i])) continue;
      for (int j = 0; j < static_cast<int>(phi.size()); ++j)
        if (!f.is_zero(phi[j])) acc.add(amb(n, i, j), f.mul(u[i], phi[j]));
    }
    return acc.take();
  }
  SpVec<F> cls(const SpVec<F>& ambient) const { return nf_.project(ambient); }
  SpVec<F> cls_pure(int n, const Vec<F>& u, const Vec<F>& phi) const { return cls(pure(n, u, phi)); }

  // Product of pure tensors; nullopt when the degree exceeds d.
  std::optional<SpVec<F>> mul_pure(int n, const Vec<F>& u, const Vec<F>& phi, int m, const Vec<F>& v,
                                   const Vec<F>& psi) const {
    if (kind_ != RingKind::B) throw std::logic_error("the C-quotient carries no product");
    if (n + m > d_) return std::nullopt;
    const QComplex<F>& q = *q_;
    const auto& R = q.ext().R;
    if (n == 0) {
      Vec<F> s = q.eval(0, phi, R->unit);
      Mat<F> lr(field(), q.dim(m), q.dim(m));
      for (int k = 0; k < R->n; ++k) lr.add_scaled(u[k], q.bimodule(m).left[k]);
      Mat<F> rs(field(), q.dual_dim(m), q.dual_dim(m));
      for (int k = 0; k < R->n; ++k) rs.add_scaled(s[k], q.dual(m).dual.right[k]);
      return cls(pure(m, lr * v, rs * psi));
    }
    if (m == 0) {
      Vec<F> s = q.eval(0, psi, R->unit);
      Mat<F> ur(field(), q.dim(n), q.dim(n));
      for (int k = 0; k < R->n; ++k) ur.add_scaled(v[k], q.bimodule(n).right[k]);
      Mat<F> sl(field(), q.dual_dim(n), q.dual_dim(n));
      for (int k = 0; k < R->n; ++k) sl.add_scaled(s[k], q.dual(n).dual.left[k]);
      return cls(pure(n, ur * u, sl * phi));
    }
    const F& f = field();
    SpVec<F> a = pure(n + m, q.merge(n, u, m + 1, q.diff(m) * v), q.convolve(n, phi, m, psi));
    SpVec<F> b = pure(n + m - 1, q.merge(n, u, m, v), q.convolve(n, phi, m - 1, q.dual_diff(m, psi)));
    return cls(sp_add(f, a, b));
  }

  std::optional<SpVec<F>> mul_basis(int a, int b) const {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      if (cache_.empty()) cache_.resize(size_t(dim()) * dim());
      const auto& hit = cache_[size_t(a) * dim() + b];
      if (hit) return *hit;
    }
    auto out = mul_basis_uncached(a, b);
    std::lock_guard<std::mutex> lock(cache_mu_);
    cache_[size_t(a) * dim() + b] = out;
    return out;
  }
  std::optional<SpVec<F>> mul_basis_uncached(int a, int b) const {
    auto [n, i, j] = section(a);
    auto [m, k, l] = section(b);
    const F& f = field();
    return mul_pure(n, unit_vec(f, q_->dim(n), i), unit_vec(f, q_->dual_dim(n), j), m,
                    unit_vec(f, q_->dim(m), k), unit_vec(f, q_->dual_dim(m), l));
  }

  // class of r (x) s in degree 0 (s as the functional x -> x s)
  SpVec<F> unit_elem(const Vec<F>& r, const Vec<F>& s) const { return cls(pure(0, r, q_->star0(s))); }
  SpVec<F> one() const {
    const auto& R = q_->ext().R;
    return unit_elem(R->unit, R->unit);
  }

 private:
  QPtr<F> q_;
  int d_;
  RingKind kind_;
  std::vector<int> offset_;
  int amb_dim_ = 0;
  NormalForm<F> nf_;
  std::vector<int> degree_;
  mutable std::mutex cache_mu_;
  mutable std::vector<std::optional<std::optional<SpVec<F>>>> cache_;
};

template <class F>
using ComatrixPtr = std::shared_ptr<const Comatrix<F>>;

// Coring structure: r |> (u (x) phi) = ru (x) phi, (u (x) phi) <| s = u (x) phi s,
// Delta(u (x) phi) = sum_a (u (x) *w_a) (x)_R (w_a (x) phi), eps(u (x) phi) = phi(u).
template <class F>
CoringPtr<F> make_coring(const ComatrixPtr<F>& D) {
  const QComplex<F>& q = D->complex();
  const F& f = D->field();
  const auto& R = q.ext().R;
  const int r = R->n;
  auto C = std::make_shared<CoringData<F>>();
  C->name = std::string("D_") + ring_name(D->kind());
  C->R = R;
  C->dim = D->dim();
  C->degree = D->degrees();
  C->bimod.dim = D->dim();
  C->bimod.left.resize(r);
  C->bimod.right.resize(r);
  C->right_s.resize(r);
  C->right_t.resize(r);
  for (int b = 0; b < D->dim(); ++b) {
    auto [n, i, j] = D->section(b);
    Vec<F> u = unit_vec(f, q.dim(n), i), phi = unit_vec(f, q.dual_dim(n), j);
    for (int k = 0; k < r; ++k) {
      C->bimod.left[k].push_back(D->cls_pure(n, q.bimodule(n).left[k] * u, phi));
      C->bimod.right[k].push_back(D->cls_pure(n, u, q.dual(n).dual.right[k] * phi));
      C->right_s[k].push_back(D->cls_pure(n, q.bimodule(n).right[k] * u, phi));
      C->right_t[k].push_back(D->cls_pure(n, u, q.dual(n).dual.left[k] * phi));
    }
    C->eps.push_back(q.eval(n, phi, u));
  }
  auto cc = std::make_shared<RTensor<F>>(R, C->bimod, C->bimod);
  C->cc = cc;
  for (int b = 0; b < D->dim(); ++b) {
    auto [n, i, j] = D->section(b);
    Vec<F> u = unit_vec(f, q.dim(n), i), phi = unit_vec(f, q.dual_dim(n), j);
    SpAccum<F> acc(f);
    for (const auto& [w, sw] : q.dual_pairs(n)) acc.add_vec(f.one(), cc->tensor(D->cls_pure(n, u, sw), D->cls_pure(n, w, phi)));
    C->delta.push_back(acc.take());
  }
  if (D->kind() == RingKind::B) {
    C->mul = [D](int a, int b) { return D->mul_basis(a, b); };
    C->unit = [D](const Vec<F>& x, const Vec<F>& y) { return D->unit_elem(x, y); };
  }
  return C;
}

// Vanishing sums in D (x)_R D over dual bases {w_a, *w_a} of Q_n and {w_b, *w_b} of Q_m:
//   sum [(u (x)_A dv) (x) (*w_a * *w_b)] (x) [(w_a (x)_A w_b) (x) (phi * d psi)] = 0,
//   sum [(u (x)_A v) (x) (*w_a * d*w_b)] (x) [(w_a (x)_A dw_b) (x) (phi * psi)] = 0,
// for n, m >= 1 with n + m <= d, on all basis choices of u, v, phi, psi.
template <class F>
std::vector<Check> check_suma0(const Comatrix<F>& D, const CoringData<F>& C) {
  const QComplex<F>& q = D.complex();
  const F& f = D.field();
  const RTensor<F>& cc = *C.cc;
  Check first{"bialgebroid", "first vanishing sum"}, second{"bialgebroid", "second vanishing sum"};
  for (int n = 1; n <= D.degree(); ++n)
    for (int m = 1; n + m <= D.degree(); ++m) {
      const auto pn = q.dual_pairs(n), pm = q.dual_pairs(m);
      const int un = q.dim(n), um = q.dim(m), fn = q.dual_dim(n), fm = q.dual_dim(m);
      // left[a][b][u][v] and right[a][b][phi][psi] for both identities
      std::vector<SpVec<F>> L1, R1, L2, R2;
      const size_t ab = pn.size() * pm.size();
      L1.reserve(ab * un * um);
      for (const auto& [wa, sa] : pn)
        for (const auto& [wb, sb] : pm) {
          Vec<F> conv = q.convolve(n, sa, m, sb);
          Vec<F> convd = q.convolve(n, sa, m - 1, q.dual_diff(m, sb));
          Vec<F> wab = q.merge(n, wa, m, wb);
          Vec<F> wadb = q.merge(n, wa, m + 1, q.diff(m) * wb);
          for (int u = 0; u < un; ++u)
            for (int v = 0; v < um; ++v) {
              Vec<F> eu = unit_vec(f, un, u), ev = unit_vec(f, um, v);
              L1.push_back(D.cls_pure(n + m, q.merge(n, eu, m + 1, q.diff(m) * ev), conv));
              L2.push_back(D.cls_pure(n + m - 1, q.merge(n, eu, m, ev), convd));
            }
          for (int p = 0; p < fn; ++p)
            for (int s = 0; s < fm; ++s) {
              Vec<F> ep = unit_vec(f, fn, p), es = unit_vec(f, fm, s);
              R1.push_back(D.cls_pure(n + m - 1, wab, q.convolve(n, ep, m - 1, q.dual_diff(m, es))));
              R2.push_back(D.cls_pure(n + m, wadb, q.convolve(n, ep, m, es)));
            }
        }
      for (int u = 0; u < un; ++u)
        for (int v = 0; v < um; ++v)
          for (int p = 0; p < fn; ++p)
            for (int s = 0; s < fm; ++s) {
              SpAccum<F> s1(f), s2(f);
              for (size_t k = 0; k < ab; ++k) {
                s1.add_vec(f.one(), cc.tensor(L1[k * un * um + u * um + v], R1[k * fn * fm + p * fm + s]));
                s2.add_vec(f.one(), cc.tensor(L2[k * un * um + u * um + v], R2[k * fn * fm + p * fm + s]));
              }
              const std::string where = "degrees (" + std::to_string(n) + ", " + std::to_string(m) + ")";
              if (!s1.take().empty()) first.fail("nonzero in " + where);
              if (!s2.take().empty()) second.fail("nonzero in " + where);
              ++first.count;
              ++second.count;
            }
    }
  return {first, second};
}

}  // namespace coendo
