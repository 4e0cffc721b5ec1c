#pragma once

#include <memory>
#include <vector>

#include "coendo/canonical.hpp"

namespace coendo {

// span{ x g_r : deg x <= upto }, g_r = s(r) - t(r), inside an R-ring coring.
template <class F>
Subspace<F> coideal_span(const CoringData<F>& C, int upto) {
  const F& f = C.field();
  std::vector<SpVec<F>> gens;
  for (int x = 0; x < C.dim; ++x) {
    if (C.degree[x] > upto) continue;
    for (int k = 0; k < C.R->n; ++k) gens.push_back(sp_sub(f, C.right_s[k][x], C.right_t[k][x]));
  }
  return Subspace<F>::span(f, C.dim, gens);
}

// dim of S intersected with the span of basis vectors of degree <= n
template <class F>
int dim_in_filtration(const Subspace<F>& S, const std::vector<int>& degree, int n) {
  const F& f = S.field();
  std::vector<SpVec<F>> high;
  for (const auto& row : S.rows()) {
    SpVec<F> h;
    for (const auto& [i, v] : row)
      if (degree[i] > n) h.emplace_back(i, v);
    high.push_back(h);
  }
  return S.dim() - Subspace<F>::span(f, S.ambient(), high).dim();
}

template <class F>
struct QuotientCoring {
  CoringPtr<F> base;
  NormalForm<F> nf;
  CoringPtr<F> bar;
};

// C / J with the induced structure (no product).
template <class F>
QuotientCoring<F> quotient_coring(const CoringPtr<F>& C, const Subspace<F>& J) {
  const F& f = C->field();
  QuotientCoring<F> Q;
  Q.base = C;
  Echelon<F> e(f, C->dim);
  for (const auto& r : J.rows()) e.insert(r);
  Q.nf = NormalForm<F>(std::move(e));
  auto B = std::make_shared<CoringData<F>>();
  B->name = C->name + "/J";
  B->R = C->R;
  B->dim = Q.nf.dim();
  B->bimod.dim = B->dim;
  const int r = C->R->n;
  B->bimod.left.resize(r);
  B->bimod.right.resize(r);
  for (int b = 0; b < B->dim; ++b) {
    const int s = Q.nf.section(b);
    B->degree.push_back(C->degree[s]);
    for (int k = 0; k < r; ++k) {
      B->bimod.left[k].push_back(Q.nf.project(C->bimod.left[k][s]));
      B->bimod.right[k].push_back(Q.nf.project(C->bimod.right[k][s]));
    }
    B->eps.push_back(C->eps[s]);
  }
  auto cc = std::make_shared<RTensor<F>>(C->R, B->bimod, B->bimod);
  B->cc = cc;
  for (int b = 0; b < B->dim; ++b) {
    SpAccum<F> acc(f);
    for (const auto& [beta, c] : C->delta[Q.nf.section(b)]) {
      auto [i, j] = C->cc->section(beta);
      acc.add_vec(c, cc->tensor(Q.nf.project_col(i), Q.nf.project_col(j)));
    }
    B->delta.push_back(acc.take());
  }
  Q.bar = B;
  return Q;
}

// J is an R-subbimodule, eps(J) = 0 and (pi (x) pi) Delta(J) = 0.
template <class F>
std::vector<Check> check_coideal(const QuotientCoring<F>& Q, const Subspace<F>& J) {
  const auto& C = *Q.base;
  const F& f = C.field();
  Check sub{"coideal", "J is an R-subbimodule"}, eps{"coideal", "eps vanishes on J"},
      del{"coideal", "Delta(J) vanishes in the quotient"};
  const auto& bcc = *Q.bar->cc;
  for (int i = 0; i < J.dim(); ++i) {
    const SpVec<F>& x = J.row(i);
    for (int k = 0; k < C.R->n; ++k)
      if (!J.contains(RBimod<F>::apply(f, C.bimod.left[k], x)) || !J.contains(RBimod<F>::apply(f, C.bimod.right[k], x)))
        sub.fail("action leaves J on generator " + std::to_string(i));
    ++sub.count;
    if (!is_zero_vec(f, C.eps_of(x))) eps.fail("eps is nonzero on generator " + std::to_string(i));
    ++eps.count;
    SpAccum<F> acc(f);
    for (const auto& [beta, c] : C.delta_of(x)) {
      auto [a, b] = C.cc->section(beta);
      acc.add_vec(c, bcc.tensor(Q.nf.project_col(a), Q.nf.project_col(b)));
    }
    if (!acc.take().empty()) del.fail("Delta is nonzero in the quotient on generator " + std::to_string(i));
    ++del.count;
  }
  return {sub, eps, del};
}

template <class F>
Mat<F> theta_matrix(const Comatrix<F>& DB, const Comatrix<F>& DC) {
  const F& f = DB.field();
  Mat<F> t(f, DC.dim(), DB.dim());
  for (int b = 0; b < DB.dim(); ++b) t.set_col(b, to_dense(f, DC.normal_form().project_col(DB.normal_form().section(b)), DC.dim()));
  return t;
}

template <class F>
struct CoidealSuite {
  std::vector<int> dim_ker_theta, dim_J;  // per filtration degree
  Mat<F> theta, can_C;
  std::vector<Check> checks;
};

// J in the word model, Ker theta, the quotient L-bar and can_C: D_C -> L-bar.
template <class F>
CoidealSuite<F> coideal_suite(const CanonicalMaps<F>& cm, const ComatrixPtr<F>& DC) {
  const auto& DB = cm.comatrix();
  const auto& W = cm.words();
  const F& f = cm.field();
  const auto& CL = cm.word_coring();
  const auto& R = *CL->R;
  const int d = DB.degree();
  CoidealSuite<F> out;
  Subspace<F> J = coideal_span(*CL, d);
  out.theta = theta_matrix(DB, *DC);
  Subspace<F> ker = kernel(out.theta);
  std::vector<SpVec<F>> imgs;
  for (const auto& row : ker.rows()) imgs.push_back(cm.can().apply(row));
  Subspace<F> canker = Subspace<F>::span(f, W.dim(), imgs);

  Check eq{"coideal", "can_B(Ker theta) = J"}, per{"coideal", "dim Ker theta = dim J per degree"};
  if (!(canker == J)) eq.fail("subspaces differ (dims " + std::to_string(canker.dim()) + " and " + std::to_string(J.dim()) + ")");
  ++eq.count;
  for (int n = 0; n <= d; ++n) {
    Subspace<F> Jn = coideal_span(*CL, n);
    const int kn = dim_in_filtration(ker, DB.degrees(), n);
    out.dim_ker_theta.push_back(kn);
    out.dim_J.push_back(Jn.dim());
    if (kn != Jn.dim() || dim_in_filtration(J, W.degrees(), n) != Jn.dim())
      per.fail("degree " + std::to_string(n) + ": Ker theta has " + std::to_string(kn) + ", J has " +
               std::to_string(Jn.dim()));
    ++per.count;
  }
  out.checks = {eq, per};

  Check gr{"coideal", "eps(g_r) = 0"};
  for (int k = 0; k < R.n; ++k) {
    SpVec<F> g = sp_sub(f, W.re_elem(R.basis(k), R.unit), W.re_elem(R.unit, R.basis(k)));
    if (!is_zero_vec(f, CL->eps_of(g))) gr.fail("nonzero for r = e" + std::to_string(k));
    ++gr.count;
  }
  out.checks.push_back(gr);

  auto Q = quotient_coring(CL, J);
  for (auto& c : check_coideal(Q, J)) out.checks.push_back(c);
  for (auto c : check_coring(*Q.bar)) {
    c.suite = "coideal";
    c.name = "quotient: " + c.name;
    out.checks.push_back(c);
  }

  // can_C on D_C: lift to D_B, apply can_B, project
  const auto& bar = *Q.bar;
  out.can_C = Mat<F>(f, bar.dim, DC->dim());
  for (int c = 0; c < DC->dim(); ++c) {
    SpVec<F> b = DB.normal_form().project_col(DC->normal_form().section(c));
    out.can_C.set_col(c, to_dense(f, Q.nf.project(cm.can().apply(b)), bar.dim));
  }
  Check bij{"coideal", "can_C is bijective"}, diag{"coideal", "can_C o theta = pi o can_B"},
      cor{"coideal", "can_C is a coring map"};
  if (out.can_C.rows() != out.can_C.cols() || !inverse(out.can_C)) bij.fail("matrix is not invertible");
  ++bij.count;
  for (int b = 0; b < DB.dim(); ++b) {
    Vec<F> lhs = out.can_C * out.theta.col(b);
    Vec<F> rhs = to_dense(f, Q.nf.project(cm.can().apply(sp_unit(f, b))), bar.dim);
    if (!vec_eq(f, lhs, rhs)) diag.fail("fails on basis element " + std::to_string(b));
    ++diag.count;
  }
  auto CC = make_coring(DC);
  for (int c = 0; c < DC->dim(); ++c) {
    SpVec<F> img = to_sparse(f, out.can_C.col(c));
    if (!vec_eq(f, bar.eps_of(img), CC->eps[c])) cor.fail("eps differs on basis element " + std::to_string(c));
    SpAccum<F> dd(f);
    for (const auto& [beta, v] : CC->delta[c]) {
      auto [i, j] = CC->cc->section(beta);
      dd.add_vec(v, bar.cc->tensor(to_sparse(f, out.can_C.col(i)), to_sparse(f, out.can_C.col(j))));
    }
    if (!sp_eq(f, dd.take(), bar.delta_of(img)))
      cor.fail("Delta differs on basis element " + std::to_string(c));
    ++cor.count;
  }
  out.checks.push_back(bij);
  out.checks.push_back(diag);
  out.checks.push_back(cor);
  return out;
}

// For A an algebra over a commutative R: g_r pi(a (x) phi) = pi(a (x) phi) g_r.
template <class F>
Check check_two_sided(const CanonicalMaps<F>& cm) {
  const auto& W = cm.words();
  const F& f = cm.field();
  const auto& C = *cm.word_coring();
  const auto& q = W.complex();
  const auto& R = *C.R;
  Check ch{"coideal", "g_r commutes with the generators"};
  for (int k = 0; k < R.n; ++k) {
    SpVec<F> g = sp_sub(f, W.re_elem(R.basis(k), R.unit), W.re_elem(R.unit, R.basis(k)));
    for (int a = 0; a < q.ext().A->n; ++a)
      for (int p = 0; p < q.dual_dim(1); ++p) {
        SpVec<F> x = W.gen(q.ext().A->basis(a), unit_vec(f, q.dual_dim(1), p));
        auto l = C.mul_elems(g, x), r = C.mul_elems(x, g);
        if (!l || !r || !sp_eq(f, *l, *r))
          ch.fail("fails for r = e" + std::to_string(k) + " on (a" + std::to_string(a) + ", phi" + std::to_string(p) + ")");
        ++ch.count;
      }
  }
  return ch;
}

}  // namespace coendo
