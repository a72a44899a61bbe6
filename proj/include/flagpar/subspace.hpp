#pragma once

#include "flagpar/form.hpp"
#include "flagpar/matrix.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagpar {

enum class Side { V, W };

inline Side oppositeSide(Side s) { return s == Side::V ? Side::W : Side::V; }

/// Side V is a right D-module, side W (the dual side) a left D-module.
inline ModuleSide moduleSideOf(Side s) {
  return s == Side::V ? ModuleSide::Right : ModuleSide::Left;
}

enum class TailKind { None, Full, Chain };

enum class IsotropyType { Isotropic, Coisotropic, Neither };

struct UnstabilizedTruncation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finitely-described subspace of the countable-dimensional paired space:
/// finitely many generators plus a tail rule.
///
///   None      — dim F < ∞
///   Full(s)   — e_k ∈ F for all k ≥ s
///   Chain(s)  — e_k − e_{k+1} ∈ F for all k ≥ s
///
/// Coordinates are 1-based throughout. The representation is canonical:
/// equal subspaces compare equal member-wise.
template <class T>
class Subspace {
 public:
  Subspace() : side_(Side::V), tail_(TailKind::None), tailStart_(0) {}

  static Subspace zero(Side side) {
    Subspace s;
    s.side_ = side;
    return s;
  }
  static Subspace whole(Side side) {
    Subspace s;
    s.side_ = side;
    s.tail_ = TailKind::Full;
    s.tailStart_ = 1;
    return s;
  }
  static Subspace spanOf(Side side, Mat<T> generators, TailKind tail = TailKind::None,
                         std::size_t tailStart = 0) {
    Subspace s;
    s.side_ = side;
    s.tail_ = tail;
    s.tailStart_ = tail == TailKind::None ? 0 : tailStart;
    if (tail != TailKind::None && tailStart < 1)
      throw std::invalid_argument("tail start must be >= 1");
    s.gens_ = std::move(generators);
    s.canonicalize();
    return s;
  }
  static Subspace coordinate(Side side, std::size_t i) {  // span{e_i}, 1-based
    Mat<T> g(1, i);
    g(0, i - 1) = T(1);
    return spanOf(side, g);
  }

  Side side() const { return side_; }
  TailKind tailKind() const { return tail_; }
  std::size_t tailStart() const { return tailStart_; }
  const Mat<T>& generators() const { return gens_; }

  bool isFiniteDimensional() const { return tail_ == TailKind::None; }
  std::size_t finiteDim() const {
    assert(isFiniteDimensional());
    return gens_.rows();
  }
  bool isZeroSpace() const { return tail_ == TailKind::None && gens_.rows() == 0; }
  bool isWholeSpace() const { return tail_ == TailKind::Full && tailStart_ == 1; }

  /// Largest coordinate the description touches.
  std::size_t extent() const {
    std::size_t e = gens_.cols();
    if (tail_ != TailKind::None) e = std::max(e, tailStart_);
    return e;
  }

  /// Basis of F ∩ span{e_1..e_n} as rows (tail materialized up to n).
  Mat<T> materialize(std::size_t n) const {
    if (n < gens_.cols())
      throw std::invalid_argument("materialize: truncation below generator support");
    Mat<T> rows(0, n);
    for (std::size_t i = 0; i < gens_.rows(); ++i) {
      std::vector<T> v(n, T(0));
      for (std::size_t j = 0; j < gens_.cols(); ++j) v[j] = gens_(i, j);
      rows.appendRow(v);
    }
    if (tail_ == TailKind::Full) {
      for (std::size_t k = tailStart_; k <= n; ++k) {
        std::vector<T> v(n, T(0));
        v[k - 1] = T(1);
        rows.appendRow(v);
      }
    } else if (tail_ == TailKind::Chain) {
      for (std::size_t k = tailStart_; k + 1 <= n; ++k) {
        std::vector<T> v(n, T(0));
        v[k - 1] = T(1);
        v[k] = T(-1);
        rows.appendRow(v);
      }
    }
    rowReduce(rows, moduleSideOf(side_));
    return rows;
  }

  /// Annihilator on the opposite side, in canonical form.
  Subspace perp() const {
    Subspace out;
    out.side_ = oppositeSide(side_);
    if (tail_ == TailKind::None) {
      // Constraints only touch coordinates up to the extent; everything
      // beyond is free, giving a Full tail.
      std::size_t m = gens_.cols();
      out.gens_ = pairingKernel(gens_, side_);
      out.tail_ = TailKind::Full;
      out.tailStart_ = m + 1;
    } else {
      // Both Full(s) and Chain(s) force annihilator coordinates >= s to
      // vanish (finite support meets an infinite equal-coefficient chain
      // only at zero). What remains is the finite system on 1..s-1.
      std::size_t s = tailStart_;
      Mat<T> restricted(gens_.rows(), s - 1);
      for (std::size_t i = 0; i < gens_.rows(); ++i)
        for (std::size_t j = 0; j + 1 < s && j < gens_.cols(); ++j)
          restricted(i, j) = gens_(i, j);
      out.gens_ = pairingKernel(restricted, side_);
      out.tail_ = TailKind::None;
      out.tailStart_ = 0;
    }
    out.canonicalize();
    return out;
  }

  /// Mackey closure F ↦ F⊥⊥.
  Subspace mackeyClosure() const { return perp().perp(); }

  bool isClosed() const { return mackeyClosure() == *this; }

  Subspace sum(const Subspace& other) const {
    assert(side_ == other.side_);
    Subspace out;
    out.side_ = side_;
    std::size_t cols = std::max(gens_.cols(), other.gens_.cols());
    Mat<T> g(0, cols);
    auto push = [&](const Mat<T>& src) {
      for (std::size_t i = 0; i < src.rows(); ++i) {
        std::vector<T> v(cols, T(0));
        for (std::size_t j = 0; j < src.cols(); ++j) v[j] = src(i, j);
        g.appendRow(v);
      }
    };
    push(gens_);
    push(other.gens_);
    out.gens_ = std::move(g);
    // Combine tails: Full beats Chain, lower start beats higher.
    TailKind ta = tail_, tb = other.tail_;
    std::size_t sa = tailStart_, sb = other.tailStart_;
    if (ta == TailKind::None) {
      out.tail_ = tb;
      out.tailStart_ = sb;
    } else if (tb == TailKind::None) {
      out.tail_ = ta;
      out.tailStart_ = sa;
    } else if (ta == TailKind::Full || tb == TailKind::Full) {
      // Chain(c) + Full(f) absorbs to Full(min(c,f)): walking the chain from
      // any full coordinate reaches every earlier chain coordinate.
      out.tail_ = TailKind::Full;
      out.tailStart_ = std::min(sa, sb);
    } else {
      out.tail_ = TailKind::Chain;
      out.tailStart_ = std::min(sa, sb);
    }
    out.canonicalize();
    return out;
  }

  bool contains(const Subspace& other) const {
    if (side_ != other.side_) return false;
    // Tail comparison first: a None tail cannot contain Full or Chain;
    // Chain cannot contain Full.
    if (other.tail_ == TailKind::Full) {
      if (tail_ != TailKind::Full) return false;
    } else if (other.tail_ == TailKind::Chain) {
      if (tail_ == TailKind::None) return false;
    }
    return sum(other) == *this;
  }

  bool containsVector(std::vector<T> v) const {
    std::size_t n = std::max(v.size(), extent());
    v.resize(n, T(0));
    Mat<T> basis = materialize(n);
    auto b = basis;
    auto pivots = rowReduce(b, moduleSideOf(side_));
    return rrefContains(b, pivots, v, moduleSideOf(side_));
  }

  /// Isotropy classification against a form identifying V with W.
  /// Decided at two consecutive truncations; disagreement raises
  /// UnstabilizedTruncation.
  IsotropyType isotropyType(const FormDescriptor& form) const {
    std::size_t base = extent() + 4;
    if (form.layout == FormDescriptor::Layout::SplitPairs && base % 2) ++base;
    std::size_t step = form.layout == FormDescriptor::Layout::SplitPairs ? 2 : 1;
    IsotropyType a = isotropyAt(form, base);
    IsotropyType b = isotropyAt(form, base + step);
    if (a != b)
      throw UnstabilizedTruncation(
          "isotropyType: tail incompatible with the form descriptor "
          "(classification did not stabilize across truncations)");
    return a;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.side_ == b.side_ && a.tail_ == b.tail_ && a.tailStart_ == b.tailStart_ &&
           a.gens_ == b.gens_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  std::string describe() const {
    std::string s = side_ == Side::V ? "V-subspace" : "W-subspace";
    s += " rank " + std::to_string(gens_.rows());
    switch (tail_) {
      case TailKind::None: break;
      case TailKind::Full: s += " + full(" + std::to_string(tailStart_) + ")"; break;
      case TailKind::Chain: s += " + chain(" + std::to_string(tailStart_) + ")"; break;
    }
    return s;
  }

 private:
  Side side_;
  TailKind tail_;
  std::size_t tailStart_;
  Mat<T> gens_;  // canonical reduced echelon rows, trailing zero cols trimmed

  /// Annihilator of the row span under the standard pairing; result rows
  /// live on the opposite side.
  static Mat<T> pairingKernel(const Mat<T>& gens, Side side) {
    if (gens.rows() == 0) return Mat<T>::identity(gens.cols());
    if (side == Side::V) {
      // w annihilates F: sum_j w_j g_ij = 0 — left kernel of gensᵀ.
      return leftKernel(gens.transpose());
    }
    // v annihilated by F ⊂ W: sum_j g_ij v_j = 0 — right kernel of gens.
    return rightKernel(gens);
  }

  void foldTail() {
    if (tail_ == TailKind::None) return;
    std::size_t s = tailStart_;
    if (tail_ == TailKind::Full) {
      // kill all coordinates >= s
      Mat<T> g(gens_.rows(), std::min<std::size_t>(gens_.cols(), s - 1));
      for (std::size_t i = 0; i < gens_.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = gens_(i, j);
      gens_ = std::move(g);
    } else {
      // modulo the chain span, coordinates >= s collapse to their sum at e_s
      if (gens_.cols() < s) return;
      Mat<T> g(gens_.rows(), s);
      for (std::size_t i = 0; i < gens_.rows(); ++i) {
        for (std::size_t j = 0; j + 1 < s; ++j) g(i, j) = gens_(i, j);
        T acc(0);
        for (std::size_t j = s - 1; j < gens_.cols(); ++j) acc += gens_(i, j);
        g(i, s - 1) = acc;
      }
      gens_ = std::move(g);
    }
  }

  void trim() {
    std::size_t last = 0;
    for (std::size_t i = 0; i < gens_.rows(); ++i)
      for (std::size_t j = 0; j < gens_.cols(); ++j)
        if (!isZero(gens_(i, j))) last = std::max(last, j + 1);
    if (last == gens_.cols()) return;
    Mat<T> g(gens_.rows(), last);
    for (std::size_t i = 0; i < gens_.rows(); ++i)
      for (std::size_t j = 0; j < last; ++j) g(i, j) = gens_(i, j);
    gens_ = std::move(g);
  }

  bool spanHasVector(std::vector<T> v) const {
    if (v.size() < gens_.cols()) v.resize(gens_.cols(), T(0));
    Mat<T> b = gens_;
    if (b.cols() < v.size()) {
      Mat<T> wide(b.rows(), v.size());
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) wide(i, j) = b(i, j);
      b = std::move(wide);
    }
    auto pivots = rowReduce(b, moduleSideOf(side_));
    return rrefContains(b, pivots, v, moduleSideOf(side_));
  }

  void canonicalize() {
    foldTail();
    rowReduce(gens_, moduleSideOf(side_));
    // Absorb generators into the tail and pull the tail start as low as it
    // goes; each step decreases tailStart or upgrades Chain to Full, so
    // this terminates.
    bool changed = true;
    while (changed && tail_ != TailKind::None) {
      changed = false;
      std::size_t s = tailStart_;
      if (tail_ == TailKind::Chain) {
        std::vector<T> es(s, T(0));
        es[s - 1] = T(1);
        if (spanHasVector(es)) {
          // e_s plus the chain generates every later coordinate
          tail_ = TailKind::Full;
          changed = true;
        } else if (s > 1) {
          std::vector<T> diff(s, T(0));
          diff[s - 2] = T(1);
          diff[s - 1] = T(-1);
          if (spanHasVector(diff)) {
            tailStart_ = s - 1;
            changed = true;
          }
        }
      } else if (s > 1) {
        std::vector<T> prev(s - 1, T(0));
        prev[s - 2] = T(1);
        if (spanHasVector(prev)) {
          tailStart_ = s - 1;
          changed = true;
        }
      }
      if (changed) {
        foldTail();
        rowReduce(gens_, moduleSideOf(side_));
      }
    }
    trim();
  }

  IsotropyType isotropyAt(const FormDescriptor& form, std::size_t n) const {
    Mat<T> basis = materialize(n);
    Mat<T> g = form.template gram<T>(n);
    bool hermitian = form.type == FormType::Hermitian;
    // isotropic: form vanishes on basis x basis
    bool isotropic = true;
    for (std::size_t i = 0; i < basis.rows() && isotropic; ++i)
      for (std::size_t j = 0; j < basis.rows() && isotropic; ++j) {
        T acc(0);
        for (std::size_t a = 0; a < n; ++a) {
          if (isZero(basis(i, a))) continue;
          T vi = hermitian ? conj(basis(i, a)) : basis(i, a);
          for (std::size_t b = 0; b < n; ++b)
            if (!isZero(g(a, b)) && !isZero(basis(j, b))) acc += vi * g(a, b) * basis(j, b);
        }
        if (!isZero(acc)) isotropic = false;
      }
    if (isotropic) return IsotropyType::Isotropic;
    // coisotropic: truncated form-perp of F lies inside F
    // constraints: for each basis row w: sum_b conj?(w_a) g(a,b) v_b = 0
    Mat<T> constr(basis.rows(), n);
    for (std::size_t i = 0; i < basis.rows(); ++i)
      for (std::size_t b = 0; b < n; ++b) {
        T acc(0);
        for (std::size_t a = 0; a < n; ++a) {
          if (isZero(basis(i, a)) || isZero(g(a, b))) continue;
          T vi = hermitian ? conj(basis(i, a)) : basis(i, a);
          acc += vi * g(a, b);
        }
        constr(i, b) = acc;
      }
    Mat<T> formPerp = rightKernel(constr);
    Mat<T> b2 = basis;
    auto pivots = rowReduce(b2, moduleSideOf(side_));
    bool coiso = true;
    for (std::size_t i = 0; i < formPerp.rows() && coiso; ++i)
      if (!rrefContains(b2, pivots, formPerp.row(i), moduleSideOf(side_))) coiso = false;
    return coiso ? IsotropyType::Coisotropic : IsotropyType::Neither;
  }
};

}  // namespace flagpar
