#pragma once

#include "flagpar/matrix.hpp"

#include <cstddef>
#include <vector>

namespace flagpar {

/// A subspace of ℚ^n held in reduced row echelon form. Used for all
/// ℚ-linear computations on realified matrix coordinates.
class QSpan {
 public:
  QSpan() = default;
  explicit QSpan(Mat<Rational> rows) : rref_(std::move(rows)) {
    pivots_ = rowReduce(rref_, ModuleSide::Right);
  }

  std::size_t dim() const { return rref_.rows(); }
  std::size_t ambient() const { return rref_.cols(); }
  const Mat<Rational>& basis() const { return rref_; }

  bool contains(const std::vector<Rational>& v) const {
    return rrefContains(rref_, pivots_, v, ModuleSide::Right);
  }
  bool containsSpan(const QSpan& other) const {
    for (std::size_t i = 0; i < other.rref_.rows(); ++i)
      if (!contains(other.rref_.row(i))) return false;
    return true;
  }

  QSpan sum(const QSpan& other) const {
    return QSpan(rref_.verticalStack(other.rref_));
  }

  QSpan intersect(const QSpan& other) const {
    // Coefficients (x, y) with x·A − y·B = 0 give the common vectors x·A.
    if (dim() == 0 || other.dim() == 0) return QSpan(Mat<Rational>(0, ambient()));
    std::size_t ra = rref_.rows(), rb = other.rref_.rows(), n = ambient();
    Mat<Rational> coef(n, ra + rb);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < ra; ++i) coef(j, i) = rref_(i, j);
      for (std::size_t i = 0; i < rb; ++i) coef(j, ra + i) = -other.rref_(i, j);
    }
    Mat<Rational> sols = rightKernel(coef);
    Mat<Rational> out(0, n);
    for (std::size_t s = 0; s < sols.rows(); ++s) {
      std::vector<Rational> v(n, Rational(0));
      for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < n; ++j) v[j] += sols(s, i) * rref_(i, j);
      out.appendRow(v);
    }
    return QSpan(out);
  }

  friend bool operator==(const QSpan& a, const QSpan& b) { return a.rref_ == b.rref_; }
  friend bool operator!=(const QSpan& a, const QSpan& b) { return !(a == b); }

 private:
  Mat<Rational> rref_;
  std::vector<std::size_t> pivots_;
};

// --- realification of matrices over Q, Q(i), or rational quaternions -------

template <class T>
std::vector<Rational> realifyMat(const Mat<T>& m) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::vector<Rational> out(d * m.rows() * m.cols());
  Rational comp[4];
  std::size_t idx = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      ScalarTraits<T>::split(m(i, j), comp);
      for (std::size_t c = 0; c < d; ++c) out[idx++] = comp[c];
    }
  return out;
}

template <class T>
Mat<T> unrealifyMat(const std::vector<Rational>& v, std::size_t rows, std::size_t cols) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  assert(v.size() == d * rows * cols);
  Mat<T> m(rows, cols);
  std::size_t idx = 0;
  Rational comp[4];
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t c = 0; c < d; ++c) comp[c] = v[idx++];
      m(i, j) = ScalarTraits<T>::join(comp);
    }
  return m;
}

template <class T>
QSpan spanOfMats(const std::vector<Mat<T>>& mats) {
  if (mats.empty()) return QSpan();
  Mat<Rational> rows(0, 0);
  for (const auto& m : mats) rows.appendRow(realifyMat(m));
  return QSpan(std::move(rows));
}

/// Extract a ℚ-basis of the span as matrices.
template <class T>
std::vector<Mat<T>> matBasisOf(const QSpan& s, std::size_t rows, std::size_t cols) {
  std::vector<Mat<T>> out;
  out.reserve(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    out.push_back(unrealifyMat<T>(s.basis().row(i), rows, cols));
  return out;
}

}  // namespace flagpar
