#pragma once

#include "flagpar/matrix.hpp"

#include <stdexcept>
#include <vector>

namespace flagpar {

enum class FormType { Symmetric, Alternating, Hermitian };

/// A nondegenerate form on V at every truncation level, described by a
/// finite signature prefix plus a tail rule so that it is meaningful at
/// arbitrary truncations.
///
/// Diagonal layout: gram = diag(prefix, tail signs...).
/// SplitPairs layout: consecutive coordinate pairs (e_{2k-1}, e_{2k}) are
/// hyperbolic; stable under the standard level embeddings by pairs.
struct FormDescriptor {
  enum class Layout { Diagonal, SplitPairs };
  enum class TailSign { Plus, Minus, Alternate };

  FormType type = FormType::Symmetric;
  Layout layout = Layout::Diagonal;
  std::vector<int> prefix;  // entries ±1, Diagonal layout only
  TailSign tail = TailSign::Plus;

  static FormDescriptor diagonal(FormType t, std::vector<int> pre,
                                 TailSign ts = TailSign::Plus) {
    FormDescriptor f;
    f.type = t;
    f.layout = Layout::Diagonal;
    f.prefix = std::move(pre);
    f.tail = ts;
    return f;
  }
  static FormDescriptor splitPairs(FormType t) {
    if (t == FormType::Hermitian)
      throw std::invalid_argument("split-pair layout is for bilinear forms");
    FormDescriptor f;
    f.type = t;
    f.layout = Layout::SplitPairs;
    return f;
  }

  int diagonalSign(std::size_t i) const {  // 0-based coordinate
    if (i < prefix.size()) return prefix[i];
    std::size_t k = i - prefix.size();
    switch (tail) {
      case TailSign::Plus: return 1;
      case TailSign::Minus: return -1;
      case TailSign::Alternate: return k % 2 == 0 ? 1 : -1;
    }
    return 1;
  }

  /// Gram matrix at truncation n: f(e_i, e_j) = gram(i,j).
  template <class T>
  Mat<T> gram(std::size_t n) const {
    Mat<T> g(n, n);
    if (layout == Layout::Diagonal) {
      for (std::size_t i = 0; i < n; ++i) g(i, i) = T(diagonalSign(i));
    } else {
      if (n % 2 != 0)
        throw std::invalid_argument("split-pair form needs an even truncation");
      for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
        g(2 * k, 2 * k + 1) = T(1);
        g(2 * k + 1, 2 * k) = (type == FormType::Alternating) ? T(-1) : T(1);
      }
    }
    return g;
  }

  /// f(v, w); conjugate-linear in the first slot for hermitian forms.
  template <class T>
  T evaluate(const std::vector<T>& v, const std::vector<T>& w) const {
    assert(v.size() == w.size());
    Mat<T> g = gram<T>(v.size());
    T acc(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (isZero(v[i])) continue;
      T vi = (type == FormType::Hermitian) ? conj(v[i]) : v[i];
      for (std::size_t j = 0; j < w.size(); ++j)
        if (!isZero(g(i, j)) && !isZero(w[j])) acc += vi * g(i, j) * w[j];
    }
    return acc;
  }
};

}  // namespace flagpar
