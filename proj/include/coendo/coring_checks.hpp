#pragma once

#include <string>
#include <vector>

#include "coendo/check.hpp"
#include "coendo/coring.hpp"

namespace coendo {

namespace detail {

template <class F>
SpVec<F> apply_cols(const F& f, const std::vector<SpVec<F>>& cols, const SpVec<F>& x) {
  return RBimod<F>::apply(f, cols, x);
}

// sum c (g(i) (x) j) over Delta-like element x in X (x)_R Y, g on the first factor.
template <class F, class G>
SpVec<F> map_first_factor(const F& f, const RTensor<F>& src, const RTensor<F>& dst, const SpVec<F>& x, G g) {
  SpAccum<F> acc(f);
  for (const auto& [beta, c] : x) {
    auto [i, j] = src.section(beta);
    acc.add_vec(c, dst.tensor(g(i), sp_unit(f, j)));
  }
  return acc.take();
}
template <class F, class G>
SpVec<F> map_second_factor(const F& f, const RTensor<F>& src, const RTensor<F>& dst, const SpVec<F>& x, G g) {
  SpAccum<F> acc(f);
  for (const auto& [beta, c] : x) {
    auto [i, j] = src.section(beta);
    acc.add_vec(c, dst.tensor(sp_unit(f, i), g(j)));
  }
  return acc.take();
}

inline std::string basis_name(int b) { return "basis element " + std::to_string(b); }

}  // namespace detail

// (Delta (x) id) Delta = (id (x) Delta) Delta in (C (x)_R C) (x)_R C.
template <class F>
Check check_coassociativity(const CoringData<F>& C) {
  const F& f = C.field();
  Check ch{"coring", "coassociativity"};
  RTensor<F> triple(C.R, C.cc->bimod(), C.bimod);
  const RTensor<F>& cc = *C.cc;
  for (int b = 0; b < C.dim; ++b) {
    SpVec<F> lhs = detail::map_first_factor(f, cc, triple, C.delta[b], [&](int i) { return C.delta[i]; });
    SpAccum<F> rhs(f);
    for (const auto& [beta, c] : C.delta[b]) {
      auto [i, j] = cc.section(beta);
      for (const auto& [gamma, c2] : C.delta[j]) {
        auto [k, l] = cc.section(gamma);
        rhs.add_vec(f.mul(c, c2), triple.tensor(cc.pair(i, k), sp_unit(f, l)));
      }
    }
    if (!sp_eq(f, lhs, rhs.take()))
      ch.fail("fails on " + detail::basis_name(b));
    ++ch.count;
  }
  return ch;
}

// (eps (x) id) Delta = id = (id (x) eps) Delta.
template <class F>
std::vector<Check> check_counit(const CoringData<F>& C) {
  const F& f = C.field();
  Check left{"coring", "left counit"}, right{"coring", "right counit"};
  for (int b = 0; b < C.dim; ++b) {
    SpAccum<F> l(f), r(f);
    for (const auto& [beta, c] : C.delta[b]) {
      auto [i, j] = C.cc->section(beta);
      l.add_vec(c, RBimod<F>::apply_combo(f, C.bimod.left, C.eps[i], sp_unit(f, j)));
      r.add_vec(c, RBimod<F>::apply_combo(f, C.bimod.right, C.eps[j], sp_unit(f, i)));
    }
    SpVec<F> e = sp_unit(f, b);
    if (!sp_eq(f, l.take(), e)) left.fail("fails on " + detail::basis_name(b));
    if (!sp_eq(f, r.take(), e)) right.fail("fails on " + detail::basis_name(b));
    ++left.count;
    ++right.count;
  }
  return {left, right};
}

// Delta and eps are R-bimodule maps.
template <class F>
std::vector<Check> check_structure_bilinear(const CoringData<F>& C) {
  const F& f = C.field();
  const auto& R = *C.R;
  Check dl{"coring", "Delta is R-bilinear"}, el{"coring", "eps is R-bilinear"};
  const auto& outer = C.cc->bimod();
  for (int k = 0; k < R.n; ++k)
    for (int b = 0; b < C.dim; ++b) {
      SpVec<F> lb = C.bimod.left[k][b], rb = C.bimod.right[k][b];
      auto ok = [&](const SpVec<F>& x, const SpVec<F>& y) {
        return sp_eq(f, x, y);
      };
      if (!ok(C.delta_of(lb), RBimod<F>::apply(f, outer.left[k], C.delta[b])) ||
          !ok(C.delta_of(rb), RBimod<F>::apply(f, outer.right[k], C.delta[b])))
        dl.fail("fails on " + detail::basis_name(b));
      if (!vec_eq(f, C.eps_of(lb), R.mul(R.basis(k), C.eps[b])) ||
          !vec_eq(f, C.eps_of(rb), R.mul(C.eps[b], R.basis(k))))
        el.fail("fails on " + detail::basis_name(b));
      ++dl.count;
      ++el.count;
    }
  return {dl, el};
}

// Delta lands in the Takeuchi product: sum x1 t(r) (x) x2 = sum x1 (x) x2 s(r).
template <class F>
Check check_takeuchi(const CoringData<F>& C) {
  const F& f = C.field();
  Check ch{"takeuchi", "Delta lands in the Takeuchi product"};
  if (C.right_s.empty()) {
    ch.fail("no right R(x)R^op action");
    return ch;
  }
  const RTensor<F>& cc = *C.cc;
  for (int b = 0; b < C.dim; ++b)
    for (int k = 0; k < C.R->n; ++k) {
      SpVec<F> lhs = detail::map_first_factor(f, cc, cc, C.delta[b], [&](int i) { return C.right_t[k][i]; });
      SpVec<F> rhs = detail::map_second_factor(f, cc, cc, C.delta[b], [&](int j) { return C.right_s[k][j]; });
      if (!sp_eq(f, lhs, rhs))
        ch.fail("fails on " + detail::basis_name(b) + " with r = e" + std::to_string(k));
      ++ch.count;
    }
  return ch;
}

// Product on C (x)_R C computed factorwise from section representatives.
template <class F>
std::optional<SpVec<F>> takeuchi_product(const CoringData<F>& C, const SpVec<F>& X, const SpVec<F>& Y) {
  const F& f = C.field();
  const RTensor<F>& cc = *C.cc;
  SpAccum<F> acc(f);
  for (const auto& [a, xa] : X) {
    auto [i, j] = cc.section(a);
    for (const auto& [b, yb] : Y) {
      auto [k, l] = cc.section(b);
      auto p = C.mul(i, k), q = C.mul(j, l);
      if (!p || !q) return std::nullopt;
      acc.add_vec(f.mul(xa, yb), cc.tensor(*p, *q));
    }
  }
  return acc.take();
}

// Bialgebroid axioms within the truncation: unit, Delta(1) = 1 (x) 1, eps(1) = 1,
// Delta(ab) = Delta(a) Delta(b), eps(ab) = eps(a s(eps b)) = eps(a t(eps b)).
template <class F>
std::vector<Check> check_bialgebroid(const CoringData<F>& C) {
  const F& f = C.field();
  const auto& R = *C.R;
  Check unit{"bialgebroid", "unit"}, dm{"bialgebroid", "Delta is multiplicative"},
      em{"bialgebroid", "eps is multiplicative"};
  if (!C.is_bialgebroid()) {
    unit.fail("no product");
    return {unit};
  }
  SpVec<F> one = C.unit(R.unit, R.unit);
  for (int b = 0; b < C.dim; ++b) {
    auto l = C.mul_elems(one, sp_unit(f, b)), r = C.mul_elems(sp_unit(f, b), one);
    SpVec<F> e = sp_unit(f, b);
    if (!l || !r || !sp_eq(f, *l, e) ||
        !sp_eq(f, *r, e))
      unit.fail("1 is not a unit on " + detail::basis_name(b));
    ++unit.count;
  }
  // s(r) t(s) = s(r) * t(s) and the images of s, t commute
  for (int a = 0; a < R.n; ++a)
    for (int b = 0; b < R.n; ++b) {
      SpVec<F> s = C.unit(R.basis(a), R.unit), t = C.unit(R.unit, R.basis(b));
      auto st = C.mul_elems(s, t), ts = C.mul_elems(t, s);
      SpVec<F> both = C.unit(R.basis(a), R.basis(b));
      if (!st || !ts || !sp_eq(f, *st, both) ||
          !sp_eq(f, *ts, both))
        unit.fail("source and target do not commute");
      ++unit.count;
    }
  {
    SpVec<F> d1 = C.delta_of(one), oo = C.cc->tensor(one, one);
    if (!sp_eq(f, d1, oo)) dm.fail("Delta(1) != 1 (x) 1");
    if (!vec_eq(f, C.eps_of(one), R.unit)) em.fail("eps(1) != 1");
  }
  for (int a = 0; a < C.dim; ++a)
    for (int b = 0; b < C.dim; ++b) {
      auto ab = C.mul(a, b);
      if (!ab) continue;
      auto prod = takeuchi_product(C, C.delta[a], C.delta[b]);
      if (!prod || !sp_eq(f, C.delta_of(*ab), *prod))
        dm.fail("fails on the pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      ++dm.count;
      Vec<F> e = C.eps[b];
      Vec<F> lhs = C.eps_of(*ab);
      SpVec<F> as = RBimod<F>::apply_combo(f, C.right_s, e, sp_unit(f, a));
      SpVec<F> at = RBimod<F>::apply_combo(f, C.right_t, e, sp_unit(f, a));
      if (!vec_eq(f, lhs, C.eps_of(as)) || !vec_eq(f, lhs, C.eps_of(at)))
        em.fail("fails on the pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      ++em.count;
    }
  return {unit, dm, em};
}

template <class F>
std::vector<Check> check_coring(const CoringData<F>& C) {
  std::vector<Check> out{check_coassociativity(C)};
  for (auto& c : check_counit(C)) out.push_back(c);
  for (auto& c : check_structure_bilinear(C)) out.push_back(c);
  return out;
}

}  // namespace coendo
