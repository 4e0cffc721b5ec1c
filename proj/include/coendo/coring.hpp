#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coendo/algebra.hpp"

namespace coendo {

// Based R-bimodule with sparse action columns: left[k][j] = e_k . b_j and
// right[k][j] = b_j . e_k.
template <class F>
struct RBimod {
  int dim = 0;
  std::vector<std::vector<SpVec<F>>> left, right;

  static SpVec<F> apply(const F& f, const std::vector<SpVec<F>>& cols, const SpVec<F>& x) {
    SpAccum<F> acc(f);
    for (const auto& [j, v] : x) acc.add_vec(v, cols[j]);
    return acc.take();
  }
  static SpVec<F> apply_combo(const F& f, const std::vector<std::vector<SpVec<F>>>& acts, const Vec<F>& r,
                              const SpVec<F>& x) {
    SpAccum<F> acc(f);
    for (size_t k = 0; k < acts.size(); ++k) {
      if (f.is_zero(r[k])) continue;
      for (const auto& [j, v] : x) acc.add_vec(f.mul(r[k], v), acts[k][j]);
    }
    return acc.take();
  }

  static RBimod from_bimodule(const Bimodule<F>& b) {
    RBimod out;
    out.dim = b.dim;
    for (const auto& m : b.left) {
      out.left.emplace_back();
      for (int j = 0; j < b.dim; ++j) out.left.back().push_back(m.sparse_col(j));
    }
    for (const auto& m : b.right) {
      out.right.emplace_back();
      for (int j = 0; j < b.dim; ++j) out.right.back().push_back(m.sparse_col(j));
    }
    return out;
  }
};

// X (x)_R Y as a quotient of X (x)_k Y (pair (i, j) has index i * Y.dim + j).
template <class F>
class RTensor {
 public:
  RTensor(const AlgPtr<F>& R, const RBimod<F>& X, const RBimod<F>& Y)
      : R_(R), xdim_(X.dim), ydim_(Y.dim) {
    const F& f = R->f;
    const long amb = long(X.dim) * Y.dim;
    if (amb > (1L << 30)) throw std::length_error("tensor product too large");
    Echelon<F> rel(f, static_cast<int>(amb));
    ground_ = R->n == 1;
    if (!ground_)
      for (int k = 0; k < R->n; ++k)
        for (int i = 0; i < X.dim; ++i)
          for (int j = 0; j < Y.dim; ++j) {
            SpAccum<F> acc(f);
            for (const auto& [a, v] : X.right[k][i]) acc.add(a * ydim_ + j, v);
            for (const auto& [b, v] : Y.left[k][j]) acc.add(i * ydim_ + b, f.neg(v));
            rel.insert(acc.take());
          }
    nf_ = NormalForm<F>(std::move(rel));
    if (ground_) return;  // outer actions are identities, built on demand
    for (int k = 0; k < R->n; ++k) {
      outer_.left.emplace_back();
      outer_.right.emplace_back();
      for (int b = 0; b < nf_.dim(); ++b) {
        auto [i, j] = section(b);
        SpAccum<F> l(f), r(f);
        for (const auto& [a, v] : X.left[k][i]) l.add(a * ydim_ + j, v);
        for (const auto& [c, v] : Y.right[k][j]) r.add(i * ydim_ + c, v);
        outer_.left.back().push_back(nf_.project(l.take()));
        outer_.right.back().push_back(nf_.project(r.take()));
      }
    }
    outer_.dim = nf_.dim();
  }

  int dim() const { return nf_.dim(); }
  int xdim() const { return xdim_; }
  int ydim() const { return ydim_; }
  const NormalForm<F>& nf() const { return nf_; }
  const RBimod<F>& bimod() const {
    if (!ground_) return outer_;
    std::call_once(identity_->once, [&] {
      auto& m = identity_->bimod;
      m.dim = nf_.dim();
      std::vector<SpVec<F>> id;
      id.reserve(nf_.dim());
      for (int b = 0; b < nf_.dim(); ++b) id.push_back(sp_unit(R_->f, b));
      m.left = {id};
      m.right = {std::move(id)};
    });
    return identity_->bimod;
  }
  std::pair<int, int> section(int b) const {
    int c = nf_.section(b);
    return {c / ydim_, c % ydim_};
  }
  SpVec<F> pair(int i, int j) const { return nf_.project_col(i * ydim_ + j); }
  SpVec<F> tensor(const SpVec<F>& x, const SpVec<F>& y) const {
    const F& f = R_->f;
    SpAccum<F> acc(f);
    for (const auto& [i, xv] : x)
      for (const auto& [j, yv] : y) acc.add(i * ydim_ + j, f.mul(xv, yv));
    return nf_.project(acc.take());
  }
  // Projects a combination of pairs given as (i, j, coefficient) triples.
  SpVec<F> project_pairs(const std::vector<std::tuple<int, int, typename F::E>>& terms) const {
    SpAccum<F> acc(R_->f);
    for (const auto& [i, j, c] : terms) acc.add(i * ydim_ + j, c);
    return nf_.project(acc.take());
  }

 private:
  AlgPtr<F> R_;
  int xdim_, ydim_;
  bool ground_ = false;
  NormalForm<F> nf_;
  RBimod<F> outer_;
  struct Lazy {
    std::once_flag once;
    RBimod<F> bimod;
  };
  std::shared_ptr<Lazy> identity_ = std::make_shared<Lazy>();
};

// An R-coring with a basis: bimodule actions, comultiplication into C (x)_R C,
// counit, and optionally the ring structure of a bialgebroid.
template <class F>
struct CoringData {
  std::string name;
  AlgPtr<F> R;
  int dim = 0;
  std::vector<int> degree;
  RBimod<F> bimod;  // left: r |> x = s(r) x ; right: x <| r = t(r) x
  std::shared_ptr<const RTensor<F>> cc;
  std::vector<SpVec<F>> delta;
  std::vector<Vec<F>> eps;
  // right multiplication by s(e_k) = e_k (x) 1 and t(e_k) = 1 (x) e_k
  std::vector<std::vector<SpVec<F>>> right_s, right_t;
  // product of basis vectors, nullopt beyond the truncation
  std::function<std::optional<SpVec<F>>(int, int)> mul;
  // class of s(r) t(s)
  std::function<SpVec<F>(const Vec<F>&, const Vec<F>&)> unit;

  const F& field() const { return R->f; }
  bool is_bialgebroid() const { return static_cast<bool>(mul); }

  Vec<F> eps_of(const SpVec<F>& x) const {
    Vec<F> out = zeros(field(), R->n);
    for (const auto& [b, v] : x) axpy(field(), out, v, eps[b]);
    return out;
  }
  SpVec<F> delta_of(const SpVec<F>& x) const {
    SpAccum<F> acc(field());
    for (const auto& [b, v] : x) acc.add_vec(v, delta[b]);
    return acc.take();
  }
  std::optional<SpVec<F>> mul_elems(const SpVec<F>& x, const SpVec<F>& y) const {
    const F& f = field();
    SpAccum<F> acc(f);
    for (const auto& [a, xv] : x)
      for (const auto& [b, yv] : y) {
        auto p = mul(a, b);
        if (!p) return std::nullopt;
        acc.add_vec(f.mul(xv, yv), *p);
      }
    return acc.take();
  }
  int max_degree(const SpVec<F>& x) const {
    int d = 0;
    for (const auto& [b, v] : x) d = std::max(d, degree[b]);
    return d;
  }
};

template <class F>
using CoringPtr = std::shared_ptr<const CoringData<F>>;

}  // namespace coendo
