#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coendo/canonical.hpp"

namespace coendo {

// Left comodule over a based coring: lambda(m_i) in C (x)_R M.
template <class F>
struct Comodule {
  CoringPtr<F> C;
  RBimod<F> M;
  std::shared_ptr<const RTensor<F>> cm;
  std::vector<SpVec<F>> coaction;

  int dim() const { return M.dim; }
  const F& field() const { return C->field(); }
  // largest filtration degree of the coring appearing in a coaction value
  int budget() const {
    int b = 0;
    for (const auto& x : coaction)
      for (const auto& [beta, v] : x) b = std::max(b, C->degree[cm->section(beta).first]);
    return b;
  }
};

template <class F>
Comodule<F> make_comodule(const CoringPtr<F>& C, const RBimod<F>& M, const std::vector<FormalCoaction<F>>& lam) {
  const F& f = C->field();
  Comodule<F> X;
  X.C = C;
  X.M = M;
  auto cm = std::make_shared<RTensor<F>>(C->R, C->bimod, M);
  X.cm = cm;
  for (const auto& terms : lam) {
    SpAccum<F> acc(f);
    for (const auto& [b, v] : terms) acc.add_vec(f.one(), cm->tensor(sp_unit(f, b), to_sparse(f, v)));
    X.coaction.push_back(acc.take());
  }
  return X;
}

template <class F>
RBimod<F> qn_bimod(const QComplex<F>& q, int n) {
  return RBimod<F>::from_bimodule(q.bimodule(n));
}

// Both axioms and left R-linearity, naming the first failing basis vector.
template <class F>
std::vector<Check> verify_comodule(const Comodule<F>& X, const std::string& label) {
  const F& f = X.field();
  const auto& C = *X.C;
  const auto& cm = *X.cm;
  Check coassoc{"comodules", label + ": coassociativity"}, counit{"comodules", label + ": counit"},
      lin{"comodules", label + ": coaction is left R-linear"};
  RTensor<F> triple(C.R, C.cc->bimod(), X.M);
  for (int i = 0; i < X.dim(); ++i) {
    SpAccum<F> lhs(f), rhs(f), cu(f);
    for (const auto& [beta, c] : X.coaction[i]) {
      auto [b, m] = cm.section(beta);
      lhs.add_vec(c, triple.tensor(C.delta[b], sp_unit(f, m)));
      for (const auto& [gamma, c2] : X.coaction[m]) {
        auto [b2, m2] = cm.section(gamma);
        rhs.add_vec(f.mul(c, c2), triple.tensor(C.cc->pair(b, b2), sp_unit(f, m2)));
      }
      cu.add_vec(c, RBimod<F>::apply_combo(f, X.M.left, C.eps[b], sp_unit(f, m)));
    }
    if (!sp_eq(f, lhs.take(), rhs.take()))
      coassoc.fail("fails on basis vector " + std::to_string(i));
    if (!vec_eq(f, to_dense(f, cu.take(), X.dim()), unit_vec(f, X.dim(), i)))
      counit.fail("fails on basis vector " + std::to_string(i));
    ++coassoc.count;
    ++counit.count;
    for (int k = 0; k < C.R->n; ++k) {
      SpVec<F> a = RBimod<F>::apply(f, cm.bimod().left[k], X.coaction[i]);
      SpAccum<F> b(f);
      for (const auto& [j, v] : X.M.left[k][i]) b.add_vec(v, X.coaction[j]);
      if (!sp_eq(f, a, b.take()))
        lin.fail("fails on basis vector " + std::to_string(i));
    }
    ++lin.count;
  }
  return {coassoc, counit, lin};
}

// lambda_Y g = (id (x) g) lambda_X for g: X -> Y (columns are images of basis vectors).
template <class F>
Check check_colinear(const Comodule<F>& X, const Comodule<F>& Y, const Mat<F>& g, const std::string& label) {
  const F& f = X.field();
  Check ch{"comodules", label};
  for (int i = 0; i < X.dim(); ++i) {
    SpAccum<F> lhs(f), rhs(f);
    for (const auto& [j, v] : g.sparse_col(i)) lhs.add_vec(v, Y.coaction[j]);
    for (const auto& [beta, c] : X.coaction[i]) {
      auto [b, m] = X.cm->section(beta);
      rhs.add_vec(c, Y.cm->tensor(sp_unit(f, b), g.sparse_col(m)));
    }
    if (!sp_eq(f, lhs.take(), rhs.take()))
      ch.fail("fails on basis vector " + std::to_string(i));
    ++ch.count;
  }
  return ch;
}

// x r = sum eps(x_(-1) s(r)) x_(0)
template <class F>
std::vector<std::vector<SpVec<F>>> induced_right_action(const Comodule<F>& X) {
  const F& f = X.field();
  const auto& C = *X.C;
  std::vector<std::vector<SpVec<F>>> out(C.R->n);
  for (int k = 0; k < C.R->n; ++k)
    for (int i = 0; i < X.dim(); ++i) {
      SpAccum<F> acc(f);
      for (const auto& [beta, c] : X.coaction[i]) {
        auto [b, m] = X.cm->section(beta);
        Vec<F> e = C.eps_of(C.right_s[k][b]);
        acc.add_vec(c, RBimod<F>::apply_combo(f, X.M.left, e, sp_unit(f, m)));
      }
      out[k].push_back(acc.take());
    }
  return out;
}

template <class F>
Check check_induced_right_action(const Comodule<F>& X, const std::string& label) {
  const F& f = X.field();
  Check ch{"comodules", label + ": induced right action"};
  auto act = induced_right_action(X);
  for (size_t k = 0; k < act.size(); ++k)
    for (int i = 0; i < X.dim(); ++i) {
      if (!sp_eq(f, act[k][i], X.M.right[k][i]))
        ch.fail("differs on basis vector " + std::to_string(i) + " for r = e" + std::to_string(k));
      ++ch.count;
    }
  return ch;
}

// X (x)_R Y with lambda(x (x) y) = sum x_(-1) y_(-1) (x) (x_(0) (x) y_(0)); X carries
// the induced right action.
template <class F>
Comodule<F> comodule_tensor(const Comodule<F>& X, const Comodule<F>& Y,
                            std::shared_ptr<const RTensor<F>>* pairs = nullptr) {
  const F& f = X.field();
  const auto& C = *X.C;
  if (!C.is_bialgebroid()) throw std::invalid_argument("comodule tensor needs a product on the coring");
  RBimod<F> XM = X.M;
  XM.right = induced_right_action(X);
  auto xy = std::make_shared<RTensor<F>>(C.R, XM, Y.M);
  if (pairs) *pairs = xy;
  Comodule<F> Z;
  Z.C = X.C;
  Z.M = xy->bimod();
  auto cm = std::make_shared<RTensor<F>>(C.R, C.bimod, Z.M);
  Z.cm = cm;
  for (int z = 0; z < xy->dim(); ++z) {
    auto [i, j] = xy->section(z);
    SpAccum<F> acc(f);
    for (const auto& [beta, c] : X.coaction[i]) {
      auto [b, m] = X.cm->section(beta);
      for (const auto& [gamma, c2] : Y.coaction[j]) {
        auto [b2, m2] = Y.cm->section(gamma);
        auto p = C.mul(b, b2);
        if (!p) throw std::out_of_range("comodule tensor exceeds the truncation");
        acc.add_vec(f.mul(c, c2), cm->tensor(*p, xy->pair(m, m2)));
      }
    }
    Z.coaction.push_back(acc.take());
  }
  return Z;
}

// lambda(u (x)_A v) = sum u_(-1) v_(-1) (x) (u_(0) (x)_A v_(0)) and the same with dv,
// for Q_n, Q_m with n, m >= 1 (targets within the truncation of the family).
template <class F>
std::vector<Check> check_merge_coaction(const QComplex<F>& q, const std::vector<Comodule<F>>& Qc) {
  const F& f = q.field();
  Check m1{"comodules", "lambda(u (x)_A v) identity"}, m2{"comodules", "lambda(u (x)_A dv) identity"};
  const int top = static_cast<int>(Qc.size()) - 1;
  const auto& C = *Qc[0].C;
  for (int n = 1; n <= top; ++n)
    for (int m = 1; n + m <= top; ++m)
      for (int u = 0; u < q.dim(n); ++u)
        for (int v = 0; v < q.dim(m); ++v) {
          Vec<F> eu = unit_vec(f, q.dim(n), u), ev = unit_vec(f, q.dim(m), v);
          for (int which = 0; which < 2; ++which) {
            const int k = which == 0 ? n + m - 1 : n + m;
            const auto& Z = Qc[k];
            Vec<F> target = which == 0 ? q.merge(n, eu, m, ev) : q.merge(n, eu, m + 1, q.diff(m) * ev);
            SpAccum<F> lhs(f), rhs(f);
            for (int j = 0; j < q.dim(k); ++j)
              if (!f.is_zero(target[j])) lhs.add_vec(target[j], Z.coaction[j]);
            for (const auto& [beta, c] : Qc[n].coaction[u]) {
              auto [b, x] = Qc[n].cm->section(beta);
              for (const auto& [gamma, c2] : Qc[m].coaction[v]) {
                auto [b2, y] = Qc[m].cm->section(gamma);
                auto p = C.mul(b, b2);
                if (!p) continue;
                Vec<F> ex = unit_vec(f, q.dim(n), x), ey = unit_vec(f, q.dim(m), y);
                Vec<F> w = which == 0 ? q.merge(n, ex, m, ey) : q.merge(n, ex, m + 1, q.diff(m) * ey);
                rhs.add_vec(f.mul(c, c2), Z.cm->tensor(*p, to_sparse(f, w)));
              }
            }
            Check& ch = which == 0 ? m1 : m2;
            if (!sp_eq(f, lhs.take(), rhs.take()))
              ch.fail("fails in degrees (" + std::to_string(n) + ", " + std::to_string(m) + ")");
            ++ch.count;
          }
        }
  return {m1, m2};
}

// All comodule checks for the family Q_0..Q_d over a coring with the given coactions.
template <class F>
std::vector<Check> comodule_suite(const QComplex<F>& q, const CoringPtr<F>& C,
                                  const std::vector<std::vector<FormalCoaction<F>>>& lam, const std::string& label) {
  std::vector<Comodule<F>> Qc;
  std::vector<Check> out;
  const int d = static_cast<int>(lam.size()) - 1;
  for (int n = 0; n <= d; ++n) {
    Qc.push_back(make_comodule(C, qn_bimod(q, n), lam[n]));
    const std::string l = label + " Q_" + std::to_string(n);
    for (auto& c : verify_comodule(Qc.back(), l)) out.push_back(c);
    out.push_back(check_induced_right_action(Qc.back(), l));
    Check bud{"comodules", l + ": degree budget"};
    if (Qc.back().budget() > n) bud.fail("coaction reaches degree " + std::to_string(Qc.back().budget()));
    ++bud.count;
    out.push_back(bud);
  }
  for (int n = 0; n < d; ++n)
    out.push_back(check_colinear(Qc[n], Qc[n + 1], q.diff(n), label + " d_" + std::to_string(n) + " is colinear"));
  for (auto c : check_merge_coaction(q, Qc)) {
    c.name = label + ": " + c.name;
    out.push_back(c);
  }
  return out;
}

}  // namespace coendo
