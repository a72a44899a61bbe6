#pragma once

#include "flagpar/scalar.hpp"

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace flagpar {

/// Which side scalars act on when forming linear combinations of rows.
/// Right: span{ row_i · λ_i }  (subspaces of V, a right D-module).
/// Left:  span{ λ_i · row_i }  (subspaces of W, a left D-module).
/// For commutative scalars the two coincide.
enum class ModuleSide { Left, Right };

template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, T(0)) {}
  Mat(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      assert(row.size() == cols_);
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Mat unit(std::size_t n, std::size_t i, std::size_t j) {
    Mat m(n, n);
    m(i, j) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Mat operator+(const Mat& a, const Mat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Mat r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Mat r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
  }
  friend Mat operator-(const Mat& a) {
    Mat r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = -a.data_[i];
    return r;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols_ == b.rows_);
    Mat r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (isZero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }
  friend Mat operator*(const T& s, const Mat& a) {
    Mat r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = s * a.data_[i];
    return r;
  }
  friend Mat operator*(const Mat& a, const T& s) {
    Mat r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] * s;
    return r;
  }
  Mat& operator+=(const Mat& o) { return *this = *this + o; }
  Mat& operator-=(const Mat& o) { return *this = *this - o; }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  bool isZeroMat() const {
    for (const auto& x : data_)
      if (!isZero(x)) return false;
    return true;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  Mat conjTranspose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conj((*this)(i, j));
    return r;
  }

  T trace() const {
    assert(rows_ == cols_);
    T t(0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void setRow(std::size_t i, const std::vector<T>& v) {
    assert(v.size() == cols_);
    std::copy(v.begin(), v.end(), data_.begin() + i * cols_);
  }
  void appendRow(const std::vector<T>& v) {
    assert(cols_ == 0 || v.size() == cols_);
    if (cols_ == 0) cols_ = v.size();
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }
  Mat verticalStack(const Mat& below) const {
    if (rows_ == 0) return below;
    if (below.rows_ == 0) return *this;
    assert(cols_ == below.cols_);
    Mat r = *this;
    r.data_.insert(r.data_.end(), below.data_.begin(), below.data_.end());
    r.rows_ += below.rows_;
    return r;
  }
  Mat horizontalStack(const Mat& right) const {
    assert(rows_ == right.rows_);
    Mat r(rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < right.cols_; ++j) r(i, cols_ + j) = right(i, j);
    }
    return r;
  }

  /// Matrix–vector product (matrix acts on the left; right-module compatible).
  std::vector<T> apply(const std::vector<T>& v) const {
    assert(v.size() == cols_);
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!isZero((*this)(i, j))) r[i] += (*this)(i, j) * v[j];
    return r;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? "\n[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << scalarStr(m(i, j));
    os << "]";
  }
  return os;
}

/// Reduced row echelon form. Row combinations use scalars on `side`;
/// the result is the canonical form of the row span as a left/right module.
/// Zero rows are dropped. Returns pivot column indices.
template <class T>
std::vector<std::size_t> rowReduce(Mat<T>& m, ModuleSide side = ModuleSide::Right) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && isZero(m(sel, c))) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(sel, j));
    // normalize pivot to 1
    T pinv = inverse(m(r, c));
    for (std::size_t j = 0; j < m.cols(); ++j)
      m(r, j) = (side == ModuleSide::Right) ? m(r, j) * pinv : pinv * m(r, j);
    // eliminate the column everywhere else
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || isZero(m(i, c))) continue;
      T f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j)
        m(i, j) = (side == ModuleSide::Right) ? m(i, j) - m(r, j) * f : m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  // drop zero rows
  Mat<T> out(0, m.cols());
  for (std::size_t i = 0; i < r; ++i) out.appendRow(m.row(i));
  m = out;
  return pivots;
}

template <class T>
std::size_t rankOf(Mat<T> m, ModuleSide side = ModuleSide::Right) {
  return rowReduce(m, side).size();
}

/// Does v lie in the row span of the reduced matrix `rref`?
template <class T>
bool rrefContains(const Mat<T>& rref, const std::vector<std::size_t>& pivots,
                  std::vector<T> v, ModuleSide side = ModuleSide::Right) {
  for (std::size_t i = 0; i < rref.rows(); ++i) {
    const T& coef = v[pivots[i]];
    if (isZero(coef)) continue;
    T f = coef;
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = (side == ModuleSide::Right) ? v[j] - rref(i, j) * f : v[j] - f * rref(i, j);
  }
  for (const auto& x : v)
    if (!isZero(x)) return false;
  return true;
}

/// Right kernel {x : A x = 0}, a right submodule of T^cols given as rows of
/// the returned matrix. Noncommutative-safe.
template <class T>
Mat<T> rightKernel(Mat<T> a) {
  std::size_t n = a.cols();
  // Row reduction with LEFT row operations keeps the solution set intact.
  std::vector<std::size_t> pivots;
  {
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < a.rows(); ++c) {
      std::size_t sel = r;
      while (sel < a.rows() && isZero(a(sel, c))) ++sel;
      if (sel == a.rows()) continue;
      if (sel != r)
        for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(sel, j));
      T pinv = inverse(a(r, c));
      for (std::size_t j = 0; j < n; ++j) a(r, j) = pinv * a(r, j);
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (i == r || isZero(a(i, c))) continue;
        T f = a(i, c);
        for (std::size_t j = 0; j < n; ++j) a(i, j) = a(i, j) - f * a(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
  }
  std::vector<bool> isPivot(n, false);
  for (auto p : pivots) isPivot[p] = true;
  Mat<T> ker(0, n);
  for (std::size_t f = 0; f < n; ++f) {
    if (isPivot[f]) continue;
    std::vector<T> x(n, T(0));
    x[f] = T(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -a(i, f);
    ker.appendRow(x);
  }
  return ker;
}

/// Left kernel {x : x A = 0}, rows of the result spanning it as a left module.
template <class T>
Mat<T> leftKernel(const Mat<T>& a) {
  // Augment [A | I] and row-reduce with LEFT row operations: E·A = R.
  // Rows of E opposite the zero rows of R span the left kernel.
  std::size_t m = a.rows(), n = a.cols();
  Mat<T> aug = a.horizontalStack(Mat<T>::identity(m));
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t sel = r;
    while (sel < m && isZero(aug(sel, c))) ++sel;
    if (sel == m) continue;
    if (sel != r)
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(r, j), aug(sel, j));
    T pinv = inverse(aug(r, c));
    for (std::size_t j = 0; j < aug.cols(); ++j) aug(r, j) = pinv * aug(r, j);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || isZero(aug(i, c))) continue;
      T f = aug(i, c);
      for (std::size_t j = 0; j < aug.cols(); ++j) aug(i, j) = aug(i, j) - f * aug(r, j);
    }
    ++r;
  }
  Mat<T> ker(0, m);
  for (std::size_t i = r; i < m; ++i) {
    std::vector<T> full = aug.row(i);
    ker.appendRow(std::vector<T>(full.begin() + n, full.end()));
  }
  return ker;
}

/// Solve A x = b over a (possibly noncommutative) division ring.
/// Returns nullopt if inconsistent.
template <class T>
std::optional<std::vector<T>> solve(Mat<T> a, std::vector<T> b) {
  std::size_t m = a.rows(), n = a.cols();
  assert(b.size() == m);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t sel = r;
    while (sel < m && isZero(a(sel, c))) ++sel;
    if (sel == m) continue;
    if (sel != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(sel, j));
      std::swap(b[r], b[sel]);
    }
    T pinv = inverse(a(r, c));
    for (std::size_t j = 0; j < n; ++j) a(r, j) = pinv * a(r, j);
    b[r] = pinv * b[r];
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || isZero(a(i, c))) continue;
      T f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) a(i, j) = a(i, j) - f * a(r, j);
      b[i] = b[i] - f * b[r];
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (!isZero(b[i])) return std::nullopt;
  std::vector<T> x(n, T(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i];
  return x;
}

/// Inverse of a square matrix over a division ring; throws on singular input.
template <class T>
Mat<T> inverseMat(const Mat<T>& a) {
  assert(a.rows() == a.cols());
  std::size_t n = a.rows();
  Mat<T> aug = a.horizontalStack(Mat<T>::identity(n));
  std::size_t r = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = r;
    while (sel < n && isZero(aug(sel, c))) ++sel;
    if (sel == n) throw std::domain_error("inverseMat: singular matrix");
    if (sel != r)
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(r, j), aug(sel, j));
    T pinv = inverse(aug(r, c));
    for (std::size_t j = 0; j < aug.cols(); ++j) aug(r, j) = pinv * aug(r, j);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || isZero(aug(i, c))) continue;
      T f = aug(i, c);
      for (std::size_t j = 0; j < aug.cols(); ++j) aug(i, j) = aug(i, j) - f * aug(r, j);
    }
    ++r;
  }
  Mat<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <class T>
T determinant(Mat<T> a) {
  static_assert(ScalarTraits<T>::kind != ScalarKind::Quaternion,
                "determinant over a commutative scalar only");
  assert(a.rows() == a.cols());
  std::size_t n = a.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && isZero(a(sel, c))) ++sel;
    if (sel == n) return T(0);
    if (sel != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(sel, j));
      det = -det;
    }
    det = det * a(c, c);
    T pinv = inverse(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (isZero(a(i, c))) continue;
      T f = a(i, c) * pinv;
      for (std::size_t j = c; j < n; ++j) a(i, j) = a(i, j) - f * a(c, j);
    }
  }
  return det;
}

}  // namespace flagpar
