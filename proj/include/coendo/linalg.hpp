#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coendo/field.hpp"

namespace coendo {

template <class F>
using Vec = std::vector<typename F::E>;

// Sparse vector: strictly increasing indices, no stored zeros.
template <class F>
using SpVec = std::vector<std::pair<int, typename F::E>>;

template <class F>
Vec<F> zeros(const F& f, int n) {
  return Vec<F>(n, f.zero());
}

template <class F>
Vec<F> unit_vec(const F& f, int n, int i) {
  Vec<F> v(n, f.zero());
  v[i] = f.one();
  return v;
}

template <class F>
bool is_zero_vec(const F& f, const Vec<F>& v) {
  for (const auto& x : v)
    if (!f.is_zero(x)) return false;
  return true;
}

template <class F>
bool vec_eq(const F& f, const Vec<F>& a, const Vec<F>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!f.eq(a[i], b[i])) return false;
  return true;
}

template <class F>
void axpy(const F& f, Vec<F>& y, const typename F::E& a, const Vec<F>& x) {
  if (f.is_zero(a)) return;
  for (size_t i = 0; i < x.size(); ++i)
    if (!f.is_zero(x[i])) f.addmul(y[i], a, x[i]);
}

template <class F>
Vec<F> vadd(const F& f, Vec<F> a, const Vec<F>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], b[i]);
  return a;
}

template <class F>
Vec<F> vsub(const F& f, Vec<F> a, const Vec<F>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] = f.sub(a[i], b[i]);
  return a;
}

template <class F>
Vec<F> vscale(const F& f, const typename F::E& c, Vec<F> a) {
  for (auto& x : a) x = f.mul(c, x);
  return a;
}

template <class F>
SpVec<F> to_sparse(const F& f, const Vec<F>& v) {
  SpVec<F> s;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (!f.is_zero(v[i])) s.emplace_back(i, v[i]);
  return s;
}

template <class F>
Vec<F> to_dense(const F& f, const SpVec<F>& s, int n) {
  Vec<F> v(n, f.zero());
  for (const auto& [i, x] : s) v[i] = x;
  return v;
}

template <class F>
SpVec<F> sp_unit(const F& f, int i) {
  return {{i, f.one()}};
}

// a*x + b*y
template <class F>
SpVec<F> sp_comb(const F& f, const typename F::E& a, const SpVec<F>& x,
                 const typename F::E& b, const SpVec<F>& y) {
  SpVec<F> out;
  out.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      auto v = f.mul(a, x[i].second);
      if (!f.is_zero(v)) out.emplace_back(x[i].first, std::move(v));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      auto v = f.mul(b, y[j].second);
      if (!f.is_zero(v)) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      auto v = f.mul(a, x[i].second);
      f.addmul(v, b, y[j].second);
      if (!f.is_zero(v)) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class F>
SpVec<F> sp_add(const F& f, const SpVec<F>& x, const SpVec<F>& y) {
  return sp_comb(f, f.one(), x, f.one(), y);
}

template <class F>
SpVec<F> sp_sub(const F& f, const SpVec<F>& x, const SpVec<F>& y) {
  return sp_comb(f, f.one(), x, f.neg(f.one()), y);
}

template <class F>
SpVec<F> sp_scale(const F& f, const typename F::E& a, const SpVec<F>& x) {
  if (f.is_zero(a)) return {};
  SpVec<F> out(x);
  for (auto& e : out) e.second = f.mul(a, e.second);
  return out;
}

// Accumulates scattered (index, value) contributions and emits a SpVec.
template <class F>
class SpAccum {
 public:
  using E = typename F::E;
  explicit SpAccum(const F& f) : f_(f) {}
  void add(int i, const E& v) {
    if (f_.is_zero(v)) return;
    auto [it, fresh] = m_.try_emplace(i, v);
    if (!fresh) it->second = f_.add(it->second, v);
  }
  void addmul(int i, const E& a, const E& b) {
    if (f_.is_zero(a) || f_.is_zero(b)) return;
    add(i, f_.mul(a, b));
  }
  void add_vec(const E& a, const SpVec<F>& v) {
    if (f_.is_zero(a)) return;
    for (const auto& [i, x] : v) add(i, f_.mul(a, x));
  }
  SpVec<F> take() {
    SpVec<F> out;
    out.reserve(m_.size());
    for (auto& [i, x] : m_)
      if (!f_.is_zero(x)) out.emplace_back(i, std::move(x));
    m_.clear();
    return out;
  }

 private:
  F f_;
  std::map<int, E> m_;
};

// Equality of sparse vectors regardless of entry order or stored zeros.
template <class F>
bool sp_eq(const F& f, const SpVec<F>& a, const SpVec<F>& b) {
  SpAccum<F> acc(f);
  acc.add_vec(f.one(), a);
  acc.add_vec(f.neg(f.one()), b);
  return acc.take().empty();
}

template <class F>
class Mat {
 public:
  using E = typename F::E;

  Mat() = default;
  Mat(const F& f, int rows, int cols)
      : f_(f), r_(rows), c_(cols), a_(size_t(rows) * cols, f.zero()) {}

  static Mat identity(const F& f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = f.one();
    return m;
  }
  static Mat from_rows(const F& f, const std::vector<Vec<F>>& rows, int cols) {
    Mat m(f, static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.r_; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
  }
  static Mat from_cols(const F& f, const std::vector<Vec<F>>& cols, int rows) {
    Mat m(f, rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.c_; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }
  static Mat from_sparse_cols(const F& f, const std::vector<SpVec<F>>& cols, int rows) {
    Mat m(f, rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.c_; ++j)
      for (const auto& [i, x] : cols[j]) m(i, j) = x;
    return m;
  }

  const F& field() const { return f_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  E& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const E& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  Vec<F> col(int j) const {
    Vec<F> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec<F> row(int i) const {
    return Vec<F>(a_.begin() + size_t(i) * c_, a_.begin() + size_t(i + 1) * c_);
  }
  SpVec<F> sparse_col(int j) const {
    SpVec<F> s;
    for (int i = 0; i < r_; ++i)
      if (!f_.is_zero((*this)(i, j))) s.emplace_back(i, (*this)(i, j));
    return s;
  }
  void set_col(int j, const Vec<F>& v) {
    for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }
  void set_col(int j, const SpVec<F>& v) {
    for (int i = 0; i < r_; ++i) (*this)(i, j) = f_.zero();
    for (const auto& [i, x] : v) (*this)(i, j) = x;
  }

  Mat transpose() const {
    Mat t(f_, c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  bool is_zero() const {
    for (const auto& x : a_)
      if (!f_.is_zero(x)) return false;
    return true;
  }
  bool operator==(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (size_t k = 0; k < a_.size(); ++k)
      if (!f_.eq(a_[k], o.a_[k])) return false;
    return true;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator*(const Mat& b) const {
    if (c_ != b.r_) throw std::invalid_argument("matrix product shape mismatch");
    Mat out(f_, r_, b.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const E& x = (*this)(i, k);
        if (f_.is_zero(x)) continue;
        for (int j = 0; j < b.c_; ++j)
          if (!f_.is_zero(b(k, j))) f_.addmul(out(i, j), x, b(k, j));
      }
    return out;
  }
  Vec<F> operator*(const Vec<F>& v) const {
    if (c_ != static_cast<int>(v.size())) throw std::invalid_argument("matrix-vector shape mismatch");
    Vec<F> out(r_, f_.zero());
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j)
        if (!f_.is_zero(v[j])) f_.addmul(out[i], (*this)(i, j), v[j]);
    return out;
  }
  SpVec<F> apply(const SpVec<F>& v) const {
    Vec<F> out(r_, f_.zero());
    for (const auto& [j, x] : v)
      for (int i = 0; i < r_; ++i) f_.addmul(out[i], (*this)(i, j), x);
    return to_sparse(f_, out);
  }
  Mat operator+(const Mat& b) const {
    Mat out(*this);
    for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = f_.add(a_[k], b.a_[k]);
    return out;
  }
  Mat operator-(const Mat& b) const {
    Mat out(*this);
    for (size_t k = 0; k < a_.size(); ++k) out.a_[k] = f_.sub(a_[k], b.a_[k]);
    return out;
  }
  Mat scaled(const E& c) const {
    Mat out(*this);
    for (auto& x : out.a_) x = f_.mul(c, x);
    return out;
  }
  void add_scaled(const E& c, const Mat& b) {
    if (f_.is_zero(c)) return;
    for (size_t k = 0; k < a_.size(); ++k)
      if (!f_.is_zero(b.a_[k])) f_.addmul(a_[k], c, b.a_[k]);
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < r_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < c_; ++j) s += (j ? "," : "") + f_.str((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  F f_;
  int r_ = 0, c_ = 0;
  std::vector<E> a_;
};

template <class F>
Mat<F> kron(const Mat<F>& a, const Mat<F>& b) {
  const F& f = a.field();
  Mat<F> out(f, a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (f.is_zero(a(i, j))) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = f.mul(a(i, j), b(k, l));
    }
  return out;
}

// Incremental row echelon form over sparse rows.  Each stored row has a
// leading 1 at its pivot and no entries left of it.
template <class F>
class Echelon {
 public:
  using E = typename F::E;

  Echelon() = default;
  Echelon(const F& f, int n) : f_(f), n_(n) {}

  const F& field() const { return f_; }
  int ambient() const { return n_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<SpVec<F>>& rows() const { return rows_; }
  bool is_pivot(int col) const { return !piv_.empty() && piv_[col] >= 0; }

  // Remainder of v modulo the row span; supported on non-pivot columns.
  SpVec<F> reduce(const SpVec<F>& v) const {
    if (rows_.empty()) return v;
    std::map<int, E> work;
    for (const auto& [i, x] : v) work.emplace(i, x);
    SpVec<F> out;
    while (!work.empty()) {
      auto it = work.begin();
      int j = it->first;
      E c = std::move(it->second);
      work.erase(it);
      if (f_.is_zero(c)) continue;
      int r = piv_[j];
      if (r < 0) {
        out.emplace_back(j, std::move(c));
        continue;
      }
      const auto& row = rows_[r];
      for (size_t k = 1; k < row.size(); ++k) {
        auto [pos, fresh] = work.try_emplace(row[k].first, f_.zero());
        f_.submul(pos->second, c, row[k].second);
      }
    }
    return out;
  }

  bool contains(const SpVec<F>& v) const { return reduce(v).empty(); }

  // Returns true when v was independent of the current rows.
  bool insert(const SpVec<F>& v) {
    SpVec<F> r = reduce(v);
    if (r.empty()) return false;
    if (piv_.empty()) piv_.assign(n_, -1);
    E inv = f_.inv(r[0].second);
    for (auto& e : r) e.second = f_.mul(inv, e.second);
    piv_[r[0].first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  // Pivot columns in increasing order.
  std::vector<int> pivots() const {
    std::vector<int> p;
    for (const auto& r : rows_) p.push_back(r[0].first);
    std::sort(p.begin(), p.end());
    return p;
  }

  // Reduced rows sorted by pivot.
  std::vector<SpVec<F>> rref_rows() const {
    std::vector<int> order(rows_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rows_[a][0].first < rows_[b][0].first; });
    std::vector<SpVec<F>> red(rows_.size());
    std::vector<int> red_of_col;
    if (!rows_.empty()) red_of_col.assign(n_, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto& row = rows_[*it];
      int p = row[0].first;
      std::map<int, E> work;
      for (size_t k = 1; k < row.size(); ++k) work.emplace(row[k].first, row[k].second);
      SpVec<F> out{{p, f_.one()}};
      while (!work.empty()) {
        auto w = work.begin();
        int j = w->first;
        E c = std::move(w->second);
        work.erase(w);
        if (f_.is_zero(c)) continue;
        int rr = red_of_col[j];
        if (rr < 0) {
          out.emplace_back(j, std::move(c));
          continue;
        }
        const auto& red_row = red[rr];
        for (size_t k = 1; k < red_row.size(); ++k) {
          auto [pos, fresh] = work.try_emplace(red_row[k].first, f_.zero());
          f_.submul(pos->second, c, red_row[k].second);
        }
      }
      red[*it] = std::move(out);
      red_of_col[p] = *it;
    }
    std::vector<SpVec<F>> sorted;
    sorted.reserve(red.size());
    for (int i : order) sorted.push_back(std::move(red[i]));
    return sorted;
  }

 private:
  F f_;
  int n_ = 0;
  std::vector<SpVec<F>> rows_;
  std::vector<int> piv_;  // column -> row index, allocated on first insert
};

// Subspace of F^n with a basis in reduced row echelon form.
template <class F>
class Subspace {
 public:
  using E = typename F::E;

  Subspace() = default;
  Subspace(const F& f, int n) : f_(f), n_(n), ech_(f, n) {}
  static Subspace span(const F& f, int n, const std::vector<SpVec<F>>& gens) {
    Echelon<F> e(f, n);
    for (const auto& g : gens) e.insert(g);
    return from_echelon(e);
  }
  static Subspace span_dense(const F& f, int n, const std::vector<Vec<F>>& gens) {
    Echelon<F> e(f, n);
    for (const auto& g : gens) e.insert(to_sparse(f, g));
    return from_echelon(e);
  }
  static Subspace from_echelon(const Echelon<F>& e) {
    Subspace s(e.field(), e.ambient());
    s.rows_ = e.rref_rows();
    for (const auto& r : s.rows_) {
      s.piv_.push_back(r[0].first);
      s.ech_.insert(r);
    }
    return s;
  }

  const F& field() const { return f_; }
  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<SpVec<F>>& rows() const { return rows_; }
  const SpVec<F>& row(int i) const { return rows_[i]; }
  const std::vector<int>& pivots() const { return piv_; }
  const Echelon<F>& echelon() const { return ech_; }

  Mat<F> basis_matrix() const {
    Mat<F> m(f_, dim(), n_);
    for (int i = 0; i < dim(); ++i)
      for (const auto& [j, x] : rows_[i]) m(i, j) = x;
    return m;
  }
  Vec<F> basis_vector(int i) const { return to_dense(f_, rows_[i], n_); }

  bool contains(const SpVec<F>& v) const { return ech_.contains(v); }
  bool contains(const Vec<F>& v) const { return contains(to_sparse(f_, v)); }

  // Coordinates in the echelon basis, or nullopt when v is not a member.
  std::optional<Vec<F>> coords(const SpVec<F>& v) const {
    check_index(v);
    if (!ech_.contains(v)) return std::nullopt;
    Vec<F> c(dim(), f_.zero());
    size_t k = 0;
    for (int i = 0; i < dim(); ++i) {
      while (k < v.size() && v[k].first < piv_[i]) ++k;
      if (k < v.size() && v[k].first == piv_[i]) c[i] = v[k].second;
    }
    return c;
  }
  std::optional<Vec<F>> coords(const Vec<F>& v) const {
    if (static_cast<int>(v.size()) != n_)
      throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                  " does not match ambient dimension " + std::to_string(n_));
    return coords(to_sparse(f_, v));
  }
  // Element with the given coordinates, as a sparse ambient vector.
  SpVec<F> element(const Vec<F>& c) const {
    SpAccum<F> acc(f_);
    for (int i = 0; i < dim(); ++i) acc.add_vec(c[i], rows_[i]);
    return acc.take();
  }

  bool operator==(const Subspace& o) const {
    if (n_ != o.n_ || dim() != o.dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      const auto &a = rows_[i], &b = o.rows_[i];
      if (a.size() != b.size()) return false;
      for (size_t k = 0; k < a.size(); ++k)
        if (a[k].first != b[k].first || !f_.eq(a[k].second, b[k].second)) return false;
    }
    return true;
  }

 private:
  void check_index(const SpVec<F>& v) const {
    if (!v.empty() && (v.front().first < 0 || v.back().first >= n_))
      throw std::invalid_argument("sparse vector index outside ambient dimension " +
                                  std::to_string(n_));
  }

  F f_;
  int n_ = 0;
  std::vector<SpVec<F>> rows_;
  std::vector<int> piv_;
  Echelon<F> ech_;
};

template <class F>
std::pair<Mat<F>, std::vector<int>> rref(const Mat<F>& m) {
  const F& f = m.field();
  Mat<F> a(m);
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = -1;
    for (int i = r; i < a.rows(); ++i)
      if (!f.is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    auto inv = f.inv(a(r, c));
    for (int j = c; j < a.cols(); ++j) a(r, j) = f.mul(inv, a(r, j));
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || f.is_zero(a(i, c))) continue;
      auto factor = a(i, c);
      for (int j = c; j < a.cols(); ++j)
        if (!f.is_zero(a(r, j))) f.submul(a(i, j), factor, a(r, j));
    }
    piv.push_back(c);
    ++r;
  }
  return {a, piv};
}

template <class F>
int rank(const Mat<F>& m) {
  Echelon<F> e(m.field(), m.cols());
  for (int i = 0; i < m.rows(); ++i) e.insert(to_sparse(m.field(), m.row(i)));
  return e.rank();
}

// Right null space {x : m x = 0}.
template <class F>
Subspace<F> kernel(const Mat<F>& m) {
  const F& f = m.field();
  auto [a, piv] = rref(m);
  std::vector<char> is_piv(m.cols(), 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<SpVec<F>> gens;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    SpAccum<F> acc(f);
    acc.add(free, f.one());
    for (size_t i = 0; i < piv.size(); ++i) acc.add(piv[i], f.neg(a(static_cast<int>(i), free)));
    gens.push_back(acc.take());
  }
  return Subspace<F>::span(f, m.cols(), gens);
}

// Kernel of the linear map whose j-th column (image of e_j) is cols[j].
template <class F>
Subspace<F> kernel_of_columns(const F& f, int target_dim, const std::vector<SpVec<F>>& cols) {
  const int n = static_cast<int>(cols.size());
  Echelon<F> e(f, target_dim + n);
  for (int j = 0; j < n; ++j) {
    SpVec<F> row = cols[j];
    row.emplace_back(target_dim + j, f.one());
    e.insert(row);
  }
  std::vector<SpVec<F>> gens;
  for (const auto& row : e.rows())
    if (row[0].first >= target_dim) {
      SpVec<F> g;
      for (const auto& [i, x] : row) g.emplace_back(i - target_dim, x);
      gens.push_back(std::move(g));
    }
  return Subspace<F>::span(f, n, gens);
}

// Image span of a column family.
template <class F>
Subspace<F> image_of_columns(const F& f, int target_dim, const std::vector<SpVec<F>>& cols) {
  return Subspace<F>::span(f, target_dim, cols);
}

// Solves sum_j x_j cols[j] = b for many right-hand sides.
template <class F>
class ColumnSolver {
 public:
  ColumnSolver(const F& f, int target_dim, const std::vector<SpVec<F>>& cols)
      : f_(f), m_(target_dim), n_(static_cast<int>(cols.size())), ech_(f, target_dim + n_) {
    for (int j = 0; j < n_; ++j) {
      SpVec<F> row = cols[j];
      row.emplace_back(m_ + j, f.one());
      ech_.insert(row);
    }
  }
  std::optional<Vec<F>> solve(const SpVec<F>& b) const {
    SpVec<F> r = ech_.reduce(b);
    Vec<F> x(n_, f_.zero());
    for (const auto& [i, v] : r) {
      if (i < m_) return std::nullopt;
      x[i - m_] = f_.neg(v);
    }
    return x;
  }

 private:
  F f_;
  int m_, n_;
  Echelon<F> ech_;
};

// Some x with m x = b, or nullopt.
template <class F>
std::optional<Vec<F>> solve(const Mat<F>& m, const Vec<F>& b) {
  std::vector<SpVec<F>> cols;
  for (int j = 0; j < m.cols(); ++j) cols.push_back(m.sparse_col(j));
  return ColumnSolver<F>(m.field(), m.rows(), cols).solve(to_sparse(m.field(), b));
}

template <class F>
std::optional<Mat<F>> inverse(const Mat<F>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const F& f = m.field();
  int n = m.rows();
  if (n == 0) return m;
  Mat<F> aug(f, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = f.one();
  }
  auto [r, piv] = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat<F> inv(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

// Quotient of F^n by a relation subspace, realized on the non-pivot
// coordinates of the relation echelon.
template <class F>
class NormalForm {
 public:
  using E = typename F::E;

  NormalForm() = default;
  NormalForm(const F& f, int n) : f_(f), n_(n), rel_(f, n), dim_(n) {}
  explicit NormalForm(Echelon<F> rel) : f_(rel.field()), n_(rel.ambient()), rel_(std::move(rel)) {
    finish();
  }

  const F& field() const { return f_; }
  int ambient() const { return n_; }
  int dim() const { return dim_; }
  const Echelon<F>& relations() const { return rel_; }
  bool trivial() const { return rel_.rank() == 0; }

  SpVec<F> project(const SpVec<F>& v) const {
    if (trivial()) return v;
    SpVec<F> r = rel_.reduce(v);
    for (auto& e : r) e.first = col_to_q_[e.first];
    return r;
  }
  Vec<F> project_dense(const SpVec<F>& v) const { return to_dense(f_, project(v), dim_); }
  SpVec<F> project_col(int col) const { return project(sp_unit(f_, col)); }
  // Ambient index representing the q-th quotient basis vector.
  int section(int q) const { return trivial() ? q : basis_cols_[q]; }
  // Quotient index of an ambient column, -1 for pivot columns.
  int quotient_index(int col) const { return trivial() ? col : col_to_q_[col]; }
  SpVec<F> lift(const SpVec<F>& q) const {
    SpVec<F> out(q);
    for (auto& e : out) e.first = section(e.first);
    return out;
  }
  bool kills(const SpVec<F>& v) const { return rel_.contains(v); }

 private:
  void finish() {
    if (trivial()) {
      dim_ = n_;
      return;
    }
    col_to_q_.assign(n_, -1);
    for (int c = 0; c < n_; ++c)
      if (!rel_.is_pivot(c)) {
        col_to_q_[c] = static_cast<int>(basis_cols_.size());
        basis_cols_.push_back(c);
      }
    dim_ = static_cast<int>(basis_cols_.size());
  }

  F f_;
  int n_ = 0;
  Echelon<F> rel_;
  int dim_ = 0;
  std::vector<int> basis_cols_;
  std::vector<int> col_to_q_;
};

}  // namespace coendo
