#pragma once

#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "coendo/coideal.hpp"
#include "coendo/comodule.hpp"
#include "coendo/idempotent.hpp"

namespace coendo {

// A complex pushed through Q: sum_n Q_n (x) V_n modulo d(u) (x) x - u (x) d(x)
// (and u r (x) x - u (x) r x over C), as a comodule.
template <class F>
struct Transported {
  ChainComplex<F> V;
  std::vector<int> qdim, offset;
  int ambient = 0;
  std::vector<SpVec<F>> relations;
  NormalForm<F> nf;
  Comodule<F> M;
  std::vector<Check> checks;

  int top() const { return V.top(); }
  int amb(int n, int u, int x) const { return offset[n] + u * V.dims[n] + x; }
  std::tuple<int, int, int> decode(int c) const {
    for (int n = 0; n <= V.top(); ++n) {
      const int size = qdim[n] * V.dims[n];
      if (c < offset[n] + size) return {n, (c - offset[n]) / V.dims[n], (c - offset[n]) % V.dims[n]};
    }
    throw std::out_of_range("ambient index");
  }
  // class of q (x) x with q in Q_n, x in V_n
  SpVec<F> cls(int n, const Vec<F>& q, int x) const {
    const F& f = V.field();
    SpAccum<F> acc(f);
    for (int i = 0; i < qdim[n]; ++i)
      if (!f.is_zero(q[i])) acc.add(amb(n, i, x), q[i]);
    return nf.project(acc.take());
  }
  SpVec<F> cls(int n, const Vec<F>& q, const Vec<F>& x) const {
    const F& f = V.field();
    SpAccum<F> acc(f);
    for (int i = 0; i < qdim[n]; ++i)
      for (int j = 0; j < V.dims[n]; ++j)
        if (!f.is_zero(q[i]) && !f.is_zero(x[j])) acc.add(amb(n, i, j), f.mul(q[i], x[j]));
    return nf.project(acc.take());
  }
  bool ok() const { return all_pass(checks); }
};

// Inverse direction: W_n = *Q_n cotensored with M over the coring.
template <class F>
struct Cotensored {
  ChainComplex<F> W;
  std::vector<std::shared_ptr<const RTensor<F>>> P;  // *Q_n (x)_R M
  std::vector<Subspace<F>> ker;                      // W_n inside P_n
};

template <class F>
struct RoundTrip {
  bool ok = false;
  std::string detail;
  int mismatch_degree = -1;
  std::vector<int> in_dims, out_dims;
  int comodule_dim = 0;
  std::string method;
  ChainMap<F> iso;
  std::vector<Check> checks;
};

// Gamma^2 on a pair of transported complexes over B.
template <class F>
struct Gamma2 {
  Transported<F> X, Y, P;
  ProductComplex<F> prod;
  Comodule<F> source;
  std::shared_ptr<const RTensor<F>> xy;
  Mat<F> gamma;
  std::vector<Check> checks;

  SpVec<F> apply(const SpVec<F>& x, const SpVec<F>& y) const { return gamma.apply(xy->tensor(x, y)); }
};

// Space of maps of complexes V -> W commuting with the coefficient action.
template <class F>
std::vector<ChainMap<F>> chain_map_space(const ChainComplex<F>& V, const ChainComplex<F>& W) {
  const F& f = V.field();
  const int top = std::max(V.top(), W.top());
  const int r = V.R->n;
  std::vector<int> uoff(top + 2, 0);
  for (int n = 0; n <= top; ++n) uoff[n + 1] = uoff[n] + W.dim(n) * V.dim(n);
  // rows: chain blocks W_n x V_{n+1}, then linearity blocks W_n x V_n per k
  std::vector<int> coff(top + 1, 0), loff(top + 1, 0);
  int rows = 0;
  for (int n = 0; n <= top; ++n) {
    coff[n] = rows;
    rows += W.dim(n) * V.dim(n + 1);
  }
  for (int n = 0; n <= top; ++n) {
    loff[n] = rows;
    rows += r * W.dim(n) * V.dim(n);
  }
  std::vector<SpVec<F>> cols;
  for (int n = 0; n <= top; ++n) {
    Mat<F> dv = diff_or_zero(V, n), dw_prev = diff_or_zero(W, n - 1);
    for (int i = 0; i < W.dim(n); ++i)
      for (int j = 0; j < V.dim(n); ++j) {
        SpAccum<F> acc(f);
        // (E_ij dV_n)(i, c) = dV_n(j, c)
        for (int c = 0; c < V.dim(n + 1); ++c) acc.add(coff[n] + i * V.dim(n + 1) + c, dv(j, c));
        // -(dW_{n-1} E_ij)(a, j) = -dW_{n-1}(a, i)
        if (n > 0)
          for (int a = 0; a < W.dim(n - 1); ++a) acc.add(coff[n - 1] + a * V.dim(n) + j, f.neg(dw_prev(a, i)));
        if (r > 1)
          for (int k = 0; k < r; ++k) {
            const Mat<F>&A = V.act[n][k], &B = W.act[n][k];
            const int base = loff[n] + k * W.dim(n) * V.dim(n);
            for (int c = 0; c < V.dim(n); ++c) acc.add(base + i * V.dim(n) + c, A(j, c));
            for (int a = 0; a < W.dim(n); ++a) acc.add(base + a * V.dim(n) + j, f.neg(B(a, i)));
          }
        cols.push_back(acc.take());
      }
  }
  Subspace<F> S = kernel_of_columns(f, rows, cols);
  std::vector<ChainMap<F>> out;
  for (int b = 0; b < S.dim(); ++b) {
    Vec<F> x = S.basis_vector(b);
    ChainMap<F> g;
    for (int n = 0; n <= top; ++n) {
      Mat<F> m(f, W.dim(n), V.dim(n));
      for (int i = 0; i < W.dim(n); ++i)
        for (int j = 0; j < V.dim(n); ++j) m(i, j) = x[uoff[n] + i * V.dim(n) + j];
      g.push_back(m);
    }
    out.push_back(std::move(g));
  }
  return out;
}

// dim of the space of left R-linear colinear maps X -> Y.
template <class F>
int colinear_hom_dim(const Comodule<F>& X, const Comodule<F>& Y) {
  const F& f = X.field();
  const int r = X.C->R->n, cd = Y.cm->dim();
  const int rows = X.dim() * cd + r * X.dim() * Y.dim();
  std::vector<SpVec<F>> cols;
  // unknown (j, m): g(e_m) has coefficient 1 on e_j
  for (int j = 0; j < Y.dim(); ++j)
    for (int m = 0; m < X.dim(); ++m) {
      SpAccum<F> acc(f);
      for (const auto& [z, v] : Y.coaction[j]) acc.add(m * cd + z, v);
      for (int i = 0; i < X.dim(); ++i)
        for (const auto& [beta, c] : X.coaction[i]) {
          auto [b, mm] = X.cm->section(beta);
          if (mm != m) continue;
          for (const auto& [z, v] : Y.cm->pair(b, j)) acc.add(i * cd + z, f.neg(f.mul(c, v)));
        }
      if (r > 1)
        for (int k = 0; k < r; ++k) {
          const int base = X.dim() * cd + k * X.dim() * Y.dim();
          // (g left_k)(e_i) = sum_m left_k(m, i) g(e_m)
          for (int i = 0; i < X.dim(); ++i)
            for (const auto& [mm, v] : X.M.left[k][i])
              if (mm == m) acc.add(base + i * Y.dim() + j, v);
          // -(left_k g)(e_m)
          for (const auto& [a, v] : Y.M.left[k][j]) acc.add(base + m * Y.dim() + a, f.neg(v));
        }
      cols.push_back(acc.take());
    }
  return kernel_of_columns(f, rows, cols).dim();
}

// Q as a comodule family together with both directions of the correspondence
// between complexes (over k for B, over R for C) and comodules.
template <class F>
class Equivalence {
 public:
  Equivalence(QPtr<F> q, int d, RingKind kind) : q_(std::move(q)), d_(d), kind_(kind) {
    if (d_ > q_->degree()) throw std::out_of_range("Q is built to degree " + std::to_string(q_->degree()));
    const F& f = q_->field();
    W_ = std::make_shared<const WordModel<F>>(q_, d_);
    L_ = make_coring(W_);
    std::vector<std::vector<FormalCoaction<F>>> raw;
    for (int n = 0; n <= d_; ++n) raw.push_back(word_coaction(*W_, n));
    if (kind_ == RingKind::C) {
      quot_ = quotient_coring(L_, coideal_span(*L_, d_));
      C_ = quot_.bar;
      for (const auto& lam : raw) {
        std::vector<FormalCoaction<F>> bar;
        for (const auto& terms : lam) {
          FormalCoaction<F> out;
          for (const auto& [b, v] : terms) {
            FormalCoaction<F> t;
            for (const auto& [b2, c] : quot_.nf.project_col(b)) t.emplace_back(b2, vscale(f, c, v));
            out = formal_add(f, out, t);
          }
          bar.push_back(std::move(out));
        }
        lam_.push_back(std::move(bar));
      }
      coeff_ = q_->ext().R;
    } else {
      C_ = L_;
      lam_ = std::move(raw);
      coeff_ = std::make_shared<const FinAlgebra<F>>(fixtures::ground(f));
    }
    for (int n = 0; n <= d_; ++n) Qc_.push_back(make_comodule(C_, qn_bimod(*q_, n), lam_[n]));
    for (int n = 0; n <= d_; ++n) duals_.push_back(make_dual(n));
  }

  const F& field() const { return q_->field(); }
  const QComplex<F>& complex() const { return *q_; }
  const QPtr<F>& complex_ptr() const { return q_; }
  int degree() const { return d_; }
  RingKind kind() const { return kind_; }
  const CoringPtr<F>& coring() const { return C_; }
  const AlgPtr<F>& coeff() const { return coeff_; }
  const Comodule<F>& q_comodule(int n) const { return Qc_.at(n); }
  const std::vector<FormalCoaction<F>>& lambda(int n) const { return lam_.at(n); }

  // Right comodule axioms for *Q_n.
  std::vector<Check> dual_checks() const {
    const F& f = field();
    const auto& C = *C_;
    Check counit{"equivalence", "*Q_n right counit"}, coassoc{"equivalence", "*Q_n right coassociativity"};
    for (int n = 0; n <= d_; ++n) {
      const auto& D = duals_[n];
      RTensor<F> T(C.R, D.QC->bimod(), C.bimod);
      for (int p = 0; p < D.QD.dim; ++p) {
        SpAccum<F> cu(f), lhs(f), rhs(f);
        for (const auto& [beta, c] : D.rho[p]) {
          auto [p2, b] = D.QC->section(beta);
          cu.add_vec(c, RBimod<F>::apply_combo(f, D.QD.right, C.eps[b], sp_unit(f, p2)));
          lhs.add_vec(c, T.tensor(D.rho[p2], sp_unit(f, b)));
          for (const auto& [g, c2] : C.delta[b]) {
            auto [b1, b2] = C.cc->section(g);
            rhs.add_vec(f.mul(c, c2), T.tensor(D.QC->pair(p2, b1), sp_unit(f, b2)));
          }
        }
        if (!vec_eq(f, to_dense(f, cu.take(), D.QD.dim), unit_vec(f, D.QD.dim, p)))
          counit.fail("fails on *Q_" + std::to_string(n) + " basis vector " + std::to_string(p));
        if (!sp_eq(f, lhs.take(), rhs.take()))
          coassoc.fail("fails on *Q_" + std::to_string(n) + " basis vector " + std::to_string(p));
        ++counit.count;
        ++coassoc.count;
      }
    }
    return {counit, coassoc};
  }

  Transported<F> transport(const ChainComplex<F>& V) const {
    const F& f = field();
    const QComplex<F>& q = *q_;
    const int D = V.top();
    if (D > d_ || D >= q.degree())
      throw std::out_of_range("transport needs the coring to degree " + std::to_string(D) + " and Q to degree " +
                              std::to_string(D + 1) + "; built to " + std::to_string(d_));
    if (V.R->n != coeff_->n) throw std::invalid_argument("complex has the wrong coefficient ring");
    if (auto err = V.validate()) throw std::invalid_argument("complex: " + *err);
    const bool overR = kind_ == RingKind::C;
    const int r = q.ext().R->n;
    Transported<F> T;
    T.V = V;
    for (int n = 0; n <= D; ++n) {
      T.qdim.push_back(q.dim(n));
      T.offset.push_back(T.ambient);
      T.ambient += q.dim(n) * V.dims[n];
    }
    Echelon<F> rel(f, T.ambient);
    auto add_rel = [&](SpVec<F> v) {
      if (v.empty()) return;
      rel.insert(v);
      T.relations.push_back(std::move(v));
    };
    for (int n = 0; n < D; ++n)
      for (int u = 0; u < q.dim(n); ++u)
        for (int x = 0; x < V.dims[n + 1]; ++x) {
          SpAccum<F> acc(f);
          for (int i = 0; i < q.dim(n + 1); ++i) acc.add(T.amb(n + 1, i, x), q.diff(n)(i, u));
          for (int j = 0; j < V.dims[n]; ++j) acc.add(T.amb(n, u, j), f.neg(V.diff[n](j, x)));
          add_rel(acc.take());
        }
    if (overR)
      for (int n = 0; n <= D; ++n)
        for (int k = 0; k < r; ++k)
          for (int u = 0; u < q.dim(n); ++u)
            for (int x = 0; x < V.dims[n]; ++x) {
              SpAccum<F> acc(f);
              const Mat<F>& qr = q.bimodule(n).right[k];
              for (int i = 0; i < q.dim(n); ++i) acc.add(T.amb(n, i, x), qr(i, u));
              for (int j = 0; j < V.dims[n]; ++j) acc.add(T.amb(n, u, j), f.neg(V.act[n][k](j, x)));
              add_rel(acc.take());
            }
    T.nf = NormalForm<F>(std::move(rel));

    // Q-side actions on ambient columns
    auto q_act = [&](bool left, int k, int c) {
      auto [n, u, x] = T.decode(c);
      const Mat<F>& a = left ? q.bimodule(n).left[k] : q.bimodule(n).right[k];
      SpAccum<F> acc(f);
      for (int i = 0; i < q.dim(n); ++i) acc.add(T.amb(n, i, x), a(i, u));
      return T.nf.project(acc.take());
    };
    RBimod<F> M;
    M.dim = T.nf.dim();
    M.left.assign(r, {});
    M.right.assign(r, {});
    for (int k = 0; k < r; ++k)
      for (int b = 0; b < M.dim; ++b) {
        M.left[k].push_back(q_act(true, k, T.nf.section(b)));
        // over C the right action is used up by the balancing
        M.right[k].push_back(overR ? SpVec<F>{} : q_act(false, k, T.nf.section(b)));
      }
    T.M.C = C_;
    T.M.M = M;
    auto cm = std::make_shared<RTensor<F>>(C_->R, C_->bimod, M);
    T.M.cm = cm;
    auto coact = [&](int c) {
      auto [n, u, x] = T.decode(c);
      SpAccum<F> acc(f);
      for (const auto& [b, v] : lam_[n][u]) acc.add_vec(f.one(), cm->tensor(sp_unit(f, b), T.cls(n, v, x)));
      return acc.take();
    };
    for (int b = 0; b < M.dim; ++b) T.M.coaction.push_back(coact(T.nf.section(b)));

    Check desc{"equivalence", "transport: coaction descends to the quotient"};
    for (const auto& row : T.relations) {
      SpAccum<F> acc(f);
      for (const auto& [c, v] : row) acc.add_vec(v, coact(c));
      if (!acc.take().empty()) desc.fail("relation " + std::to_string(desc.count) + " is not killed");
      ++desc.count;
    }
    T.checks.push_back(desc);
    for (auto& c : verify_comodule(T.M, "transport")) {
      c.suite = "equivalence";
      T.checks.push_back(c);
    }
    Check bud{"equivalence", "transport: degree budget"};
    if (T.M.budget() > std::max(D, 0)) bud.fail("coaction reaches degree " + std::to_string(T.M.budget()));
    ++bud.count;
    T.checks.push_back(bud);
    return T;
  }

  // Induced map T(V) -> T(W) of a chain map.
  Mat<F> transport_map(const Transported<F>& TV, const Transported<F>& TW, const ChainMap<F>& g) const {
    const F& f = field();
    Mat<F> out(f, TW.M.dim(), TV.M.dim());
    for (int b = 0; b < TV.M.dim(); ++b) {
      auto [n, u, x] = TV.decode(TV.nf.section(b));
      if (n > TW.top()) continue;
      out.set_col(b, to_dense(f, TW.cls(n, unit_vec(f, TV.qdim[n], u), g[n].col(x)), TW.M.dim()));
    }
    return out;
  }

  Cotensored<F> cotensor(const Comodule<F>& M, int D) const {
    const F& f = field();
    const QComplex<F>& q = *q_;
    if (D > d_ || D >= q.degree()) throw std::out_of_range("cotensor needs the coring to degree " + std::to_string(D));
    const auto& R = C_->R;
    const bool overR = kind_ == RingKind::C;
    Cotensored<F> out;
    out.W.R = coeff_;
    for (int n = 0; n <= D; ++n) {
      const auto& Dn = duals_[n];
      auto P = std::make_shared<const RTensor<F>>(R, Dn.QD, M.M);
      RTensor<F> T3(R, Dn.QC->bimod(), M.M);
      std::vector<SpVec<F>> cols;
      for (int b = 0; b < P->dim(); ++b) {
        auto [p, m] = P->section(b);
        SpAccum<F> acc(f);
        acc.add_vec(f.one(), T3.tensor(Dn.rho[p], sp_unit(f, m)));
        for (const auto& [beta, c] : M.coaction[m]) {
          auto [cb, m2] = M.cm->section(beta);
          acc.add_vec(f.neg(c), T3.tensor(Dn.QC->pair(p, cb), sp_unit(f, m2)));
        }
        cols.push_back(acc.take());
      }
      Subspace<F> K = kernel_of_columns(f, T3.dim(), cols);
      out.W.dims.push_back(K.dim());
      if (overR) {
        std::vector<Mat<F>> acts;
        for (int k = 0; k < R->n; ++k) acts.push_back(Mat<F>::from_sparse_cols(f, P->bimod().left[k], P->dim()));
        out.W.act.push_back(restrict_to(K, K, acts));
      } else {
        out.W.act.push_back({Mat<F>::identity(f, K.dim())});
      }
      out.P.push_back(P);
      out.ker.push_back(std::move(K));
    }
    for (int n = 0; n < D; ++n) {
      const auto &Pn = *out.P[n], &Pn1 = *out.P[n + 1];
      Mat<F> d(f, Pn.dim(), Pn1.dim());
      for (int b = 0; b < Pn1.dim(); ++b) {
        auto [p, m] = Pn1.section(b);
        Vec<F> phi = q.dual_diff(n + 1, unit_vec(f, q.dual_dim(n + 1), p));
        d.set_col(b, to_dense(f, Pn.tensor(to_sparse(f, phi), sp_unit(f, m)), Pn.dim()));
      }
      out.W.diff.push_back(restrict_to(out.ker[n + 1], out.ker[n], {d})[0]);
    }
    return out;
  }

  // eta_n(x) = sum_a *w_a (x) [w_a (x) x], in W_n coordinates when it lands there.
  std::optional<ChainMap<F>> unit_map(const Transported<F>& T, const Cotensored<F>& C) const {
    const F& f = field();
    const QComplex<F>& q = *q_;
    ChainMap<F> eta;
    for (int n = 0; n <= T.top(); ++n) {
      Mat<F> m(f, C.W.dim(n), T.V.dims[n]);
      const auto pairs = q.dual_pairs(n);
      for (int x = 0; x < T.V.dims[n]; ++x) {
        SpAccum<F> acc(f);
        for (const auto& [w, sw] : pairs) acc.add_vec(f.one(), C.P[n]->tensor(to_sparse(f, sw), T.cls(n, w, x)));
        auto c = C.ker[n].coords(acc.take());
        if (!c) return std::nullopt;
        m.set_col(x, *c);
      }
      eta.push_back(m);
    }
    return eta;
  }

  RoundTrip<F> roundtrip(const ChainComplex<F>& V) const {
    const F& f = field();
    RoundTrip<F> rt;
    Transported<F> T = transport(V);
    rt.checks = T.checks;
    rt.comodule_dim = T.M.dim();
    const int D = V.top();
    for (int n = 0; n <= D; ++n) rt.in_dims.push_back(V.dims[n]);
    if (!T.ok()) {
      rt.detail = "transported object is not a comodule";
      return rt;
    }
    if (D < 0) {
      rt.ok = T.M.dim() == 0;
      rt.method = "zero";
      if (!rt.ok) rt.detail = "zero complex has a nonzero transport";
      return rt;
    }
    Cotensored<F> C = cotensor(T.M, D);
    rt.out_dims = C.W.dims;
    for (int n = 0; n <= D; ++n)
      if (rt.in_dims[n] != rt.out_dims[n]) {
        rt.mismatch_degree = n;
        rt.detail = "dimensions differ in degree " + std::to_string(n) + ": " + std::to_string(rt.in_dims[n]) +
                    " vs " + std::to_string(rt.out_dims[n]);
        return rt;
      }
    auto is_iso = [&](const ChainMap<F>& g) {
      if (check_chain_map(V, C.W, g)) return false;
      for (int n = 0; n <= D; ++n) {
        if (!inverse(g[n])) return false;
        for (size_t k = 0; k < V.act[n].size() && V.R->n > 1; ++k)
          if (!(g[n] * V.act[n][k] == C.W.act[n][k] * g[n])) return false;
      }
      return true;
    };
    if (auto eta = unit_map(T, C); eta && is_iso(*eta)) {
      rt.ok = true;
      rt.method = "unit";
      rt.iso = *eta;
      return rt;
    }
    // deterministic search through small combinations of a basis of chain maps
    auto basis = chain_map_space(V, C.W);
    const int nb = static_cast<int>(basis.size());
    std::vector<int> coef(nb, 0);
    long tries = 0;
    while (nb > 0 && tries < 4096) {
      int k = 0;
      while (k < nb && ++coef[k] == 3) coef[k++] = 0;
      if (k == nb) break;
      ++tries;
      ChainMap<F> g;
      for (int n = 0; n <= D; ++n) {
        Mat<F> m(f, C.W.dims[n], V.dims[n]);
        for (int i = 0; i < nb; ++i)
          if (coef[i]) m.add_scaled(f.from_int(coef[i]), basis[i][n]);
        g.push_back(m);
      }
      if (is_iso(g)) {
        rt.ok = true;
        rt.method = "search";
        rt.iso = g;
        return rt;
      }
    }
    rt.detail = "no isomorphism found among " + std::to_string(tries) + " candidate chain maps";
    return rt;
  }

  // Gamma^0: R -> T(unit), r -> r (x) 1 in degree 0.
  Mat<F> gamma0(const Transported<F>& TU) const {
    const F& f = field();
    const int r = q_->dim(0);
    Mat<F> g(f, TU.M.dim(), r);
    for (int k = 0; k < r; ++k) g.set_col(k, to_dense(f, TU.cls(0, unit_vec(f, r, k), 0), TU.M.dim()));
    return g;
  }

  std::vector<Check> gamma0_checks() const {
    Check bij{"takeuchi", "Gamma^0 is bijective"};
    auto TU = transport(unit_complex(coeff_));
    Mat<F> g = gamma0(TU);
    if (g.rows() != g.cols() || !inverse(g)) bij.fail("Gamma^0 is not invertible");
    ++bij.count;
    auto col = check_colinear(Qc_[0], TU.M, g, "Gamma^0 is colinear");
    col.suite = "takeuchi";
    return {bij, col};
  }

  Gamma2<F> gamma2(const ChainComplex<F>& X, const ChainComplex<F>& Y, int D = -1) const {
    if (kind_ != RingKind::B) throw std::invalid_argument("Gamma^2 is defined over B");
    const F& f = field();
    const QComplex<F>& q = *q_;
    Gamma2<F> G;
    G.X = transport(X);
    G.Y = transport(Y);
    G.prod = product_complex(X, Y, D);
    G.P = transport(G.prod.V);
    G.source = comodule_tensor(G.X.M, G.Y.M, &G.xy);
    const auto &TX = G.X, &TY = G.Y, &TP = G.P;
    const auto& P = G.prod;
    const int r = q.ext().R->n;
    // ambient pair -> class in T(X (-) Y)
    auto gamma_amb = [&](int cx, int cy) {
      auto [n, u, x] = TX.decode(cx);
      auto [m, v, y] = TY.decode(cy);
      SpAccum<F> acc(f);
      auto place = [&](int deg, const Vec<F>& w, int i, int a, int j, const Vec<F>& yv) {
        Vec<F> z = zeros(f, TP.V.dims[deg]);
        for (int b = 0; b < TY.V.dims[j]; ++b)
          if (!f.is_zero(yv[b])) z[P.index(i, a, j, b)] = f.add(z[P.index(i, a, j, b)], yv[b]);
        acc.add_vec(f.one(), TP.cls(deg, w, z));
      };
      Vec<F> ey = unit_vec(f, TY.V.dims[m], y);
      if (n == 0 || m == 0) {
        Vec<F> w = n == 0 ? q.bimodule(m).left[u].col(v) : q.bimodule(n).right[v].col(u);
        place(n + m, w, n, x, m, ey);
      } else {
        Vec<F> eu = unit_vec(f, q.dim(n), u), ev = unit_vec(f, q.dim(m), v);
        if (n + m - 1 <= TP.top()) place(n + m - 1, q.merge(n, eu, m, ev), n, x, m - 1, TY.V.diff[m - 1].col(y));
        if (n + m <= TP.top()) place(n + m, q.merge(n, eu, m + 1, q.diff(m) * ev), n, x, m, ey);
      }
      return acc.take();
    };
    std::vector<std::vector<SpVec<F>>> table(TX.ambient, std::vector<SpVec<F>>(TY.ambient));
    for (int cx = 0; cx < TX.ambient; ++cx)
      for (int cy = 0; cy < TY.ambient; ++cy) table[cx][cy] = gamma_amb(cx, cy);
    auto on = [&](const SpVec<F>& ax, const SpVec<F>& ay) {
      SpAccum<F> acc(f);
      for (const auto& [i, a] : ax)
        for (const auto& [j, b] : ay) acc.add_vec(f.mul(a, b), table[i][j]);
      return acc.take();
    };
    Check wd{"takeuchi", "Gamma^2 kills the defining relations"};
    for (const auto& rel : TX.relations)
      for (int cy = 0; cy < TY.ambient; ++cy) {
        if (!on(rel, sp_unit(f, cy)).empty()) wd.fail("left relation not killed");
        ++wd.count;
      }
    for (const auto& rel : TY.relations)
      for (int cx = 0; cx < TX.ambient; ++cx) {
        if (!on(sp_unit(f, cx), rel).empty()) wd.fail("right relation not killed");
        ++wd.count;
      }
    // balancing over R on normal-form representatives
    auto lift = [&](const Transported<F>& T, const SpVec<F>& v) {
      SpAccum<F> acc(f);
      for (const auto& [b, c] : v) acc.add(T.nf.section(b), c);
      return acc.take();
    };
    if (r > 1) {
      const auto right = induced_right_action(TX.M);
      for (int k = 0; k < r; ++k)
        for (int i = 0; i < TX.M.dim(); ++i)
          for (int j = 0; j < TY.M.dim(); ++j) {
            SpVec<F> a = on(lift(TX, right[k][i]), lift(TY, sp_unit(f, j)));
            SpVec<F> b = on(lift(TX, sp_unit(f, i)), lift(TY, TY.M.M.left[k][j]));
            if (!sp_sub(f, a, b).empty()) wd.fail("not balanced over R");
            ++wd.count;
          }
    }
    G.checks.push_back(wd);
    const auto& xy = *G.xy;
    G.gamma = Mat<F>(f, TP.M.dim(), xy.dim());
    for (int b = 0; b < xy.dim(); ++b) {
      auto [i, j] = xy.section(b);
      G.gamma.set_col(b, to_dense(f, on(lift(TX, sp_unit(f, i)), lift(TY, sp_unit(f, j))), TP.M.dim()));
    }
    Check bij{"takeuchi", "Gamma^2 is bijective"};
    if (G.gamma.rows() != G.gamma.cols() || !inverse(G.gamma))
      bij.fail("Gamma^2 is " + std::to_string(G.gamma.rows()) + " x " + std::to_string(G.gamma.cols()) +
               " of rank " + std::to_string(rank(G.gamma)));
    ++bij.count;
    G.checks.push_back(bij);
    auto col = check_colinear(G.source, TP.M, G.gamma, "Gamma^2 is colinear");
    col.suite = "takeuchi";
    G.checks.push_back(col);
    return G;
  }

  // Unitors, associativity and naturality of Gamma.
  std::vector<Check> coherence(const ChainComplex<F>& X, const ChainComplex<F>& Y, const ChainComplex<F>& Z,
                               const ChainMap<F>& fx, const ChainMap<F>& gy) const {
    const F& fld = field();
    auto U = unit_complex(coeff_);
    const int r = q_->dim(0);
    std::vector<Check> out;

    Check lu{"takeuchi", "left unit coherence"}, ru{"takeuchi", "right unit coherence"};
    {
      auto G = gamma2(U, X, X.top());
      Mat<F> g0 = gamma0(G.X);
      ChainMap<F> l;
      for (int n = 0; n <= X.top(); ++n) {
        Mat<F> m(fld, G.prod.V.dims[n], X.dims[n]);
        for (int a = 0; a < X.dims[n]; ++a) m(G.prod.index(0, 0, n, a), a) = fld.one();
        l.push_back(m);
      }
      Mat<F> Tl = transport_map(G.Y, G.P, l);
      for (int k = 0; k < r; ++k)
        for (int b = 0; b < G.Y.M.dim(); ++b) {
          SpVec<F> lhs = G.apply(g0.sparse_col(k), sp_unit(fld, b));
          SpVec<F> rhs = Tl.apply(G.Y.M.M.left[k][b]);
          if (!sp_sub(fld, lhs, rhs).empty()) lu.fail("fails on basis vector " + std::to_string(b));
          ++lu.count;
        }
    }
    {
      auto G = gamma2(X, U, X.top());
      Mat<F> g0 = gamma0(G.Y);
      ChainMap<F> rho;
      for (int n = 0; n <= X.top(); ++n) {
        Mat<F> m(fld, G.prod.V.dims[n], X.dims[n]);
        for (int a = 0; a < X.dims[n]; ++a) m(G.prod.index(n, a, 0, 0), a) = fld.one();
        rho.push_back(m);
      }
      Mat<F> Tr = transport_map(G.X, G.P, rho);
      const auto right = induced_right_action(G.X.M);
      for (int k = 0; k < r; ++k)
        for (int b = 0; b < G.X.M.dim(); ++b) {
          SpVec<F> lhs = G.apply(sp_unit(fld, b), g0.sparse_col(k));
          SpVec<F> rhs = Tr.apply(right[k][b]);
          if (!sp_sub(fld, lhs, rhs).empty()) ru.fail("fails on basis vector " + std::to_string(b));
          ++ru.count;
        }
    }
    out.push_back(lu);
    out.push_back(ru);

    Check as{"takeuchi", "associativity coherence"};
    {
      const int D = X.top() + Y.top() + Z.top();
      auto Gxy = gamma2(X, Y, X.top() + Y.top());
      auto Gyz = gamma2(Y, Z, Y.top() + Z.top());
      auto GL = gamma2(Gxy.prod.V, Z, D);
      auto GR = gamma2(X, Gyz.prod.V, D);
      Mat<F> Ta = transport_map(GL.P, GR.P, associator(X, Y, Z, D));
      for (int i = 0; i < Gxy.X.M.dim(); ++i)
        for (int j = 0; j < Gxy.Y.M.dim(); ++j)
          for (int l = 0; l < Gyz.Y.M.dim(); ++l) {
            SpVec<F> lhs = Ta.apply(GL.apply(Gxy.apply(sp_unit(fld, i), sp_unit(fld, j)), sp_unit(fld, l)));
            SpVec<F> rhs = GR.apply(sp_unit(fld, i), Gyz.apply(sp_unit(fld, j), sp_unit(fld, l)));
            if (!sp_sub(fld, lhs, rhs).empty())
              as.fail("fails on (" + std::to_string(i) + ", " + std::to_string(j) + ", " + std::to_string(l) + ")");
            ++as.count;
          }
    }
    out.push_back(as);

    Check nat{"takeuchi", "naturality of Gamma^2"};
    {
      // fx: X -> X and gy: Y -> Y
      auto G = gamma2(X, Y);
      Mat<F> Tf = transport_map(G.X, G.X, fx), Tg = transport_map(G.Y, G.Y, gy);
      Mat<F> Tfg = transport_map(G.P, G.P, product_map(G.prod, G.prod, X, Y, fx, gy));
      for (int b = 0; b < G.xy->dim(); ++b) {
        auto [i, j] = G.xy->section(b);
        SpVec<F> lhs = G.apply(Tf.sparse_col(i), Tg.sparse_col(j));
        SpVec<F> rhs = Tfg.apply(G.gamma.sparse_col(b));
        if (!sp_sub(fld, lhs, rhs).empty()) nat.fail("fails on basis vector " + std::to_string(b));
        ++nat.count;
      }
    }
    out.push_back(nat);
    return out;
  }

 private:
  struct DualComodule {
    RBimod<F> QD;
    std::shared_ptr<const RTensor<F>> QC;  // *Q_n (x)_R C
    std::vector<SpVec<F>> rho;
  };

  // rho(phi) = sum_a *w_a (x) sum_{(c, v) in lambda(w_a)} c <| phi(v)
  DualComodule make_dual(int n) const {
    const F& f = field();
    const QComplex<F>& q = *q_;
    const auto& C = *C_;
    DualComodule D;
    D.QD = RBimod<F>::from_bimodule(q.dual(n).dual);
    D.QC = std::make_shared<const RTensor<F>>(C.R, D.QD, C.bimod);
    const auto pairs = q.dual_pairs(n);
    for (int p = 0; p < D.QD.dim; ++p) {
      Mat<F> phi = q.dual(n).functional(p);
      SpAccum<F> acc(f);
      for (const auto& [w, sw] : pairs)
        for (int u = 0; u < q.dim(n); ++u) {
          if (f.is_zero(w[u])) continue;
          for (const auto& [b, v] : lam_[n][u]) {
            Vec<F> val = vscale(f, w[u], phi * v);
            acc.add_vec(f.one(), D.QC->tensor(to_sparse(f, sw), RBimod<F>::apply_combo(f, C.bimod.right, val, sp_unit(f, b))));
          }
        }
      D.rho.push_back(acc.take());
    }
    return D;
  }

  QPtr<F> q_;
  int d_;
  RingKind kind_;
  WordModelPtr<F> W_;
  CoringPtr<F> L_, C_;
  QuotientCoring<F> quot_;
  AlgPtr<F> coeff_;
  std::vector<std::vector<FormalCoaction<F>>> lam_;
  std::vector<Comodule<F>> Qc_;
  std::vector<DualComodule> duals_;
};

}  // namespace coendo
