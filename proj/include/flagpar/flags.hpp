#pragma once

#include "flagpar/subspace.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace flagpar {

/// A strictly increasing chain of subspaces on one side of the pairing.
/// The zero space and the whole space are always present (added on
/// construction when missing) so consecutive members cover every basis
/// vector at any truncation.
template <class T>
class GeneralizedFlag {
 public:
  GeneralizedFlag(Side side, std::vector<Subspace<T>> members) : side_(side) {
    bool haveZero = false, haveWhole = false;
    for (const auto& m : members) {
      if (m.side() != side) throw std::invalid_argument("flag member on the wrong side");
      haveZero = haveZero || m.isZeroSpace();
      haveWhole = haveWhole || m.isWholeSpace();
    }
    if (!haveZero) members.insert(members.begin(), Subspace<T>::zero(side));
    if (!haveWhole) members.push_back(Subspace<T>::whole(side));
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      if (!members[i + 1].contains(members[i]) || members[i + 1] == members[i])
        throw std::invalid_argument("flag members must strictly increase");
    }
    members_ = std::move(members);
  }

  Side side() const { return side_; }
  const std::vector<Subspace<T>>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  std::size_t extent() const {
    std::size_t e = 1;
    for (const auto& m : members_) e = std::max(e, m.extent());
    return e;
  }

  friend bool operator==(const GeneralizedFlag& a, const GeneralizedFlag& b) {
    return a.side_ == b.side_ && a.members_ == b.members_;
  }
  friend bool operator!=(const GeneralizedFlag& a, const GeneralizedFlag& b) {
    return !(a == b);
  }

  /// Insert a new member, keeping the chain strictly increasing.
  GeneralizedFlag refined(const Subspace<T>& extra) const {
    std::vector<Subspace<T>> m = members_;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      if (m[i] == extra || m[i + 1] == extra) return *this;
      if (extra.contains(m[i]) && m[i + 1].contains(extra)) {
        m.insert(m.begin() + static_cast<std::ptrdiff_t>(i) + 1, extra);
        return GeneralizedFlag(side_, std::move(m));
      }
    }
    throw std::invalid_argument("refined: subspace not comparable with the chain");
  }

 private:
  Side side_;
  std::vector<Subspace<T>> members_;
};

/// Consecutive (immediate predecessor, immediate successor) pairs.
template <class T>
std::vector<std::pair<Subspace<T>, Subspace<T>>> ipsPairs(const GeneralizedFlag<T>& f) {
  std::vector<std::pair<Subspace<T>, Subspace<T>>> out;
  const auto& m = f.members();
  for (std::size_t i = 0; i + 1 < m.size(); ++i) out.emplace_back(m[i], m[i + 1]);
  return out;
}

/// Semiclosed: every non-closed member has its Mackey closure as the
/// immediate successor.
template <class T>
bool isSemiclosed(const GeneralizedFlag<T>& f) {
  const auto& m = f.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].isClosed()) continue;
    if (i + 1 == m.size()) return false;
    if (m[i + 1] != m[i].mackeyClosure()) return false;
  }
  return true;
}

/// Transport a flag across a form identifying V with W: each member maps to
/// the span of its coordinate vectors re-read on the opposite side through
/// the gram matrix. Used by the self-taut check.
template <class T>
GeneralizedFlag<T> transportFlag(const GeneralizedFlag<T>& f, const FormDescriptor& form) {
  std::vector<Subspace<T>> out;
  std::size_t n = f.extent() + 2;
  if (form.layout == FormDescriptor::Layout::SplitPairs && n % 2) ++n;
  Mat<T> g = form.template gram<T>(n);
  for (const auto& m : f.members()) {
    // check the tail itself transports into our tail vocabulary
    if (m.tailKind() != TailKind::None) {
      if (form.layout == FormDescriptor::Layout::SplitPairs &&
          (m.tailKind() == TailKind::Chain || m.tailStart() % 2 == 0))
        throw UnstabilizedTruncation("transportFlag: tail not alignable with pair layout");
      if (form.layout == FormDescriptor::Layout::Diagonal &&
          m.tailKind() == TailKind::Chain) {
        // a chain only transports to a chain when all signs past its start agree
        bool constant = form.tail != FormDescriptor::TailSign::Alternate;
        for (std::size_t k = m.tailStart(); constant && k <= form.prefix.size() + 1; ++k)
          if (form.diagonalSign(k - 1) != form.diagonalSign(m.tailStart() - 1))
            constant = false;
        if (!constant)
          throw UnstabilizedTruncation("transportFlag: chain tail under varying signs");
      }
    }
    Mat<T> gens = m.generators();
    Mat<T> wide(gens.rows(), n);
    for (std::size_t i = 0; i < gens.rows(); ++i)
      for (std::size_t j = 0; j < gens.cols(); ++j)
        wide(i, j) = (form.type == FormType::Hermitian) ? conj(gens(i, j)) : gens(i, j);
    out.push_back(Subspace<T>::spanOf(oppositeSide(m.side()), wide * g, m.tailKind(),
                                      m.tailStart()));
  }
  return GeneralizedFlag<T>(oppositeSide(f.side()), std::move(out));
}

}  // namespace flagpar
