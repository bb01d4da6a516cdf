#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treeflip/chord.hpp"

namespace treeflip {

enum class FlipKind { kCrossing, kCompatible, kRotation, kSlide };

std::string to_string(FlipKind k);

/// Rotations and slides are refinements of compatible flips.
constexpr bool is_compatible(FlipKind k) { return k != FlipKind::kCrossing; }

struct FlipMove {
  Chord removed;
  Chord inserted;
  FlipKind kind = FlipKind::kCompatible;

  friend bool operator==(const FlipMove& x, const FlipMove& y) {
    return x.removed == y.removed && x.inserted == y.inserted;
  }
};

/// Why a flip (or a candidate tree) is not a plane spanning tree.
enum class Violation {
  kNone,
  kLabelOutOfRange,
  kCount,
  kDuplicate,
  kCycle,
  kDisconnected,
  kCrossing,
  kSameChord,
  kRemovedAbsent,
  kInsertedPresent,
  kSizeMismatch,
};

std::string to_string(Violation v);

class InvalidTree : public Error {
 public:
  InvalidTree(Violation v, const std::string& what) : Error(what), violation_(v) {}
  Violation violation() const { return violation_; }

 private:
  Violation violation_;
};

/// A non-crossing spanning tree on n points in convex position. Immutable;
/// every instance satisfies the tree invariants.
class PlaneTree {
 public:
  /// Validates; throws InvalidTree naming the first violated invariant.
  static PlaneTree from_chords(int n, const std::vector<Chord>& chords);

  int n() const { return n_; }
  const std::vector<Chord>& chords() const { return chords_; }
  const ChordSet& bits() const { return bits_; }
  bool contains(const Chord& c) const { return bits_.contains(c); }

  friend bool operator==(const PlaneTree& x, const PlaneTree& y) {
    return x.n_ == y.n_ && x.bits_ == y.bits_;
  }

  std::string str() const;

 private:
  PlaneTree(int n, ChordSet bits);
  friend PlaneTree tree_from_trusted_bits(int n, const ChordSet& bits);

  int n_ = 0;
  ChordSet bits_;
  std::vector<Chord> chords_;
};

/// Skips validation. Only for sets known to be plane spanning trees (search internals).
PlaneTree tree_from_trusted_bits(int n, const ChordSet& bits);

struct TreeValidation {
  std::optional<PlaneTree> tree;
  Violation violation = Violation::kNone;
  std::string message;
  /// Set for kCrossing.
  std::optional<std::pair<Chord, Chord>> crossing_pair;

  bool ok() const { return tree.has_value(); }
};

TreeValidation validate_tree(const std::vector<Chord>& chords, int n);

/// Returns t - removed + inserted; throws InvalidTree with the distinguishing violation.
PlaneTree apply_flip(const PlaneTree& t, const Chord& removed, const Chord& inserted);
PlaneTree apply_flip(const PlaneTree& t, const FlipMove& m);

/// Precondition: removed -> inserted is legal in t (throws otherwise).
FlipKind classify_flip(const PlaneTree& t, const Chord& removed, const Chord& inserted);

/// All legal flips, sorted by (removed, inserted).
std::vector<FlipMove> legal_flips(const PlaneTree& t);

/// Move generation on raw chord sets. `bits` must be a plane spanning tree on n points.
/// Emits (removed, inserted) pairs sorted by (removed, inserted); kind is not classified.
void legal_moves_raw(int n, const ChordSet& bits, std::vector<std::pair<Chord, Chord>>& out);
FlipKind classify_raw(const ChordSet& bits, const Chord& removed, const Chord& inserted);

/// Stable textual token, e.g. "0-1.0-2.0-3" (sorted chords).
std::string canonical_key(const PlaneTree& t);
/// Inverse of canonical_key; validates.
PlaneTree tree_from_key(int n, const std::string& key);

/// Number of plane spanning trees on n convex points: C(3n-3, n-1) / (2n-1).
uint64_t count_plane_trees(int n);

/// Visits every plane spanning tree exactly once, in lexicographic chord order.
/// Throws Error when count_plane_trees(n) exceeds cap.
void for_each_plane_tree(int n, uint64_t cap, const std::function<void(const PlaneTree&)>& visit);
std::vector<PlaneTree> enumerate_all_trees(int n, uint64_t cap);

/// All hull edges for n points.
ChordSet hull_edges(int n);

}  // namespace treeflip

template <>
struct std::hash<treeflip::PlaneTree> {
  std::size_t operator()(const treeflip::PlaneTree& t) const { return t.bits().hash() ^ t.n(); }
};
