#pragma once

#include <string>
#include <vector>

#include "coendo/qcomplex.hpp"

namespace coendo {

// Submodule of a module under the given action matrices: restriction of each
// action to the subspace, in subspace coordinates.
template <class F>
std::vector<Mat<F>> restrict_actions(const Subspace<F>& sub, const std::vector<Mat<F>>& acts) {
  const F& f = sub.field();
  std::vector<Mat<F>> out;
  for (const auto& a : acts) {
    Mat<F> m(f, sub.dim(), sub.dim());
    for (int i = 0; i < sub.dim(); ++i) {
      auto c = sub.coords(a * sub.basis_vector(i));
      if (!c) throw std::logic_error("subspace is not stable under the action");
      m.set_col(i, *c);
    }
    out.push_back(m);
  }
  return out;
}

template <class F>
Mat<F> inclusion_matrix(const Subspace<F>& sub) {
  return sub.basis_matrix().transpose();
}

template <class F>
struct SplitCertificate {
  bool ok = true;
  int failing_degree = -1;
  std::string reason;
  std::vector<Subspace<F>> kernels;      // Ker d_m in Q_m coordinates, index m
  std::vector<Subspace<F>> complements;  // right R-module complement Qbar_m
};

// For 1 <= m <= top (top < q.degree()): Im d_{m-1} = Ker d_m and Ker d_m has
// a right R-module complement.
template <class F>
SplitCertificate<F> check_split_exact(const QComplex<F>& q, int top) {
  const F& f = q.field();
  SplitCertificate<F> cert;
  cert.kernels.resize(top + 1);
  cert.complements.resize(top + 1);
  if (top >= q.degree()) throw std::out_of_range("split check needs Q one degree beyond top");
  for (int m = 1; m <= top; ++m) {
    const Mat<F>& prev = q.diff(m - 1);
    std::vector<SpVec<F>> cols;
    for (int j = 0; j < prev.cols(); ++j) cols.push_back(prev.sparse_col(j));
    Subspace<F> im = Subspace<F>::span(f, q.dim(m), cols);
    Subspace<F> ker = kernel(q.diff(m));
    cert.kernels[m] = ker;
    if (!(im == ker)) {
      cert.ok = false;
      cert.failing_degree = m;
      cert.reason = "image of d_" + std::to_string(m - 1) + " (dim " + std::to_string(im.dim()) +
                    ") differs from kernel of d_" + std::to_string(m) + " (dim " + std::to_string(ker.dim()) + ")";
      return cert;
    }
    const auto& right = q.bimodule(m).right;
    auto kr = restrict_actions(ker, right);
    auto p = solve_intertwiner(f, ker.dim(), q.dim(m), right, kr, inclusion_matrix(ker),
                               Mat<F>::identity(f, ker.dim()));
    if (!p) {
      cert.ok = false;
      cert.failing_degree = m;
      cert.reason = "kernel of d_" + std::to_string(m) + " has no right R-module complement";
      return cert;
    }
    cert.complements[m] = kernel(*p);
  }
  return cert;
}

template <class F>
struct OmegaComparison {
  bool ok = true;
  std::string reason;
  std::vector<int> omega_dims;
  std::vector<Mat<F>> omega;  // omega[n]: Omega_n -> Q_n
};

// Omega_0 = R, Omega_1 = A, Omega_n = A (x)_R Abar^{(x)(n-1)} with
// d_n(x (x) y..) = 1 (x) xbar (x) y.. and omega_n(w (x) ybar) = omega_{n-1}(w) (x)_A dy.
template <class F>
OmegaComparison<F> omega_comparison(const QComplex<F>& q, int top) {
  const auto& ext = q.ext();
  const F& f = q.field();
  if (!unit_splits_right(ext)) throw std::invalid_argument("omega comparison needs a split unit");
  if (top > q.degree()) throw std::out_of_range("omega comparison beyond truncation");
  const int a = ext.A->n;
  OmegaComparison<F> res;

  Echelon<F> urel(f, a);
  for (int k = 0; k < ext.R->n; ++k) urel.insert(to_sparse(f, ext.u.col(k)));
  NormalForm<F> bar(urel);
  const Bimodule<F>& A1 = q.bimodule(1);
  Bimodule<F> Abar;
  Abar.L = Abar.S = ext.R;
  Abar.dim = bar.dim();
  auto induce = [&](const Mat<F>& act) {
    Mat<F> m(f, bar.dim(), bar.dim());
    for (int j = 0; j < bar.dim(); ++j) m.set_col(j, bar.project_dense(act.apply(sp_unit(f, bar.section(j)))));
    return m;
  };
  for (int k = 0; k < ext.R->n; ++k) {
    Abar.left.push_back(induce(A1.left[k]));
    Abar.right.push_back(induce(A1.right[k]));
  }

  std::vector<Bimodule<F>> Om{q.bimodule(0), A1};
  std::vector<TensorOverR<F>> tens(2);
  std::vector<std::vector<std::vector<int>>> letters(2);
  for (int x = 0; x < a; ++x) letters[1].push_back({x});
  res.omega.push_back(Mat<F>::identity(f, ext.R->n));
  res.omega.push_back(Mat<F>::identity(f, a));
  for (int n = 2; n <= top; ++n) {
    tens.push_back(tensor_over_R(Om[n - 1], Abar));
    Om.push_back(tens[n].P);
    letters.emplace_back();
    Mat<F> w(f, q.dim(n), Om[n].dim);
    for (int b = 0; b < Om[n].dim; ++b) {
      int c = tens[n].nf.section(b);
      int prev = c / Abar.dim, j = c % Abar.dim;
      auto l = letters[n - 1][prev];
      l.push_back(j);
      letters[n].push_back(l);
      Vec<F> dy = q.diff(1) * unit_vec(f, a, bar.section(j));
      w.set_col(b, q.merge(n - 1, res.omega[n - 1].col(prev), 2, dy));
    }
    res.omega.push_back(w);
  }
  for (int n = 0; n <= top; ++n) {
    res.omega_dims.push_back(Om[n].dim);
    if (Om[n].dim != q.dim(n) || !inverse(res.omega[n])) {
      res.ok = false;
      res.reason = "omega_" + std::to_string(n) + " is not bijective";
      return res;
    }
  }
  // chain map: omega_{n+1} d_n = d_n omega_n
  for (int n = 0; n < top; ++n) {
    Mat<F> d(f, Om[n + 1].dim, Om[n].dim);
    for (int b = 0; b < Om[n].dim; ++b) {
      Vec<F> img;
      if (n == 0) {
        img = ext.u.col(b);
      } else {
        const auto& l = letters[n][b];
        Vec<F> v = ext.A->unit;
        v = to_dense(f, tens[2].tensor(v, bar.project_dense(sp_unit(f, l[0]))), Om[2].dim);
        for (size_t k = 1; k < l.size(); ++k)
          v = to_dense(f, tens[k + 2].tensor(v, unit_vec(f, Abar.dim, l[k])), Om[k + 2].dim);
        img = v;
      }
      d.set_col(b, img);
    }
    if (res.omega[n + 1] * d != q.diff(n) * res.omega[n]) {
      res.ok = false;
      res.reason = "omega does not commute with the differentials in degree " + std::to_string(n);
      return res;
    }
  }
  return res;
}

// The element t of a trivial extension A = R + Rt built by the fixtures, or
// nullopt if A is not of that shape.
template <class F>
std::optional<Vec<F>> trivial_extension_generator(const RRingExt<F>& ext) {
  const F& f = ext.field();
  const int r = ext.R->n;
  if (ext.A->n != 2 * r) return std::nullopt;
  Vec<F> t = zeros(f, 2 * r);
  for (int k = 0; k < r; ++k) t[r + k] = ext.R->unit[k];
  if (!is_zero_vec(f, ext.A->mul(t, t))) return std::nullopt;
  for (int j = 0; j < 2 * r; ++j)
    if (!vec_eq(f, ext.A->mul(t, ext.A->basis(j)), ext.A->mul(ext.A->basis(j), t))) return std::nullopt;
  Mat<F> G(f, 2 * r, 2 * r);
  for (int k = 0; k < r; ++k) {
    G.set_col(k, ext.u.col(k));
    G.set_col(r + k, ext.A->mul(ext.u.col(k), t));
  }
  if (!inverse(G)) return std::nullopt;
  return t;
}

template <class F>
struct Homotopy {
  bool ok = true;
  std::string reason;
  std::vector<Mat<F>> h;  // h[m]: Q_{m+1} -> Q_m
  std::vector<Vec<F>> q_gen;  // q_m, m >= 1
};

// h_0 = first projection, h_m(r q_{m+1} + s t q_{m+1}) = r t q_m + s q_m.
template <class F>
Homotopy<F> homotopy_trivial_extension(const QComplex<F>& q) {
  const auto& ext = q.ext();
  const F& f = q.field();
  auto t = trivial_extension_generator(ext);
  if (!t) throw std::invalid_argument("homotopy needs a trivial extension A = R + Rt");
  const int r = ext.R->n, d = q.degree();
  Homotopy<F> H;
  H.q_gen.resize(d + 1);
  H.q_gen[1] = q.coords(1, to_sparse(f, ext.A->unit));
  for (int m = 1; m < d; ++m) H.q_gen[m + 1] = q.diff(m) * (q.act_A(m, *t, true) * H.q_gen[m]);
  auto frame = [&](int m, bool swapped) {
    Mat<F> G(f, q.dim(m), 2 * r);
    Vec<F> tq = q.act_A(m, *t, true) * H.q_gen[m];
    for (int k = 0; k < r; ++k) {
      Mat<F> ek = q.bimodule(m).left[k];
      G.set_col(swapped ? r + k : k, ek * H.q_gen[m]);
      G.set_col(swapped ? k : r + k, ek * tq);
    }
    return G;
  };
  // h_0
  Mat<F> h0(f, r, q.dim(1));
  {
    auto Ginv = inverse(frame(1, false));
    if (!Ginv) {
      H.ok = false;
      H.reason = "Q_1 is not free on {q_1, t q_1}";
      return H;
    }
    Mat<F> proj(f, r, 2 * r);
    for (int k = 0; k < r; ++k) proj(k, k) = f.one();
    h0 = proj * *Ginv;
  }
  H.h.push_back(h0);
  for (int m = 1; m < d; ++m) {
    auto Ginv = inverse(frame(m + 1, false));
    if (!Ginv) {
      H.ok = false;
      H.reason = "Q_" + std::to_string(m + 1) + " is not free on {q, t q}";
      return H;
    }
    H.h.push_back(frame(m, true) * *Ginv);
  }
  // d h + h d = id
  if (H.h[0] * q.diff(0) != Mat<F>::identity(f, r)) {
    H.ok = false;
    H.reason = "h_0 d_0 != id";
    return H;
  }
  for (int m = 1; m < d; ++m) {
    Mat<F> lhs = q.diff(m - 1) * H.h[m - 1] + H.h[m] * q.diff(m);
    if (lhs != Mat<F>::identity(f, q.dim(m))) {
      H.ok = false;
      H.reason = "dh + hd != id on Q_" + std::to_string(m);
      return H;
    }
  }
  return H;
}

}  // namespace coendo
