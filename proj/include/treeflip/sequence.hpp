#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "treeflip/plane_tree.hpp"

namespace treeflip {

struct Move {
  Chord removed;
  Chord inserted;

  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

/// A start tree and the flips applied to it, in order.
struct FlipSequence {
  PlaneTree start;
  std::vector<Move> moves;

  std::size_t length() const { return moves.size(); }
  friend bool operator==(const FlipSequence& x, const FlipSequence& y) {
    return x.start == y.start && x.moves == y.moves;
  }
};

/// Raised by replay at the first move that does not yield a plane spanning tree.
class ReplayError : public Error {
 public:
  ReplayError(std::size_t index, Violation v, const std::string& reason)
      : Error("move " + std::to_string(index) + ": " + reason), index_(index), violation_(v) {}
  std::size_t index() const { return index_; }
  Violation violation() const { return violation_; }

 private:
  std::size_t index_;
  Violation violation_;
};

/// T_0..T_k.
std::vector<PlaneTree> replay(const FlipSequence& seq);
/// Final tree of the sequence.
PlaneTree final_tree(const FlipSequence& seq);

/// The successive positions of one start-tree edge. links.front() == root;
/// flip_indices[i] is the move that turned links[i] into links[i+1].
struct Chain {
  Chord root;
  std::vector<Chord> links;
  std::vector<std::size_t> flip_indices;

  std::size_t length() const { return flip_indices.size(); }
  const Chord& tip() const { return links.back(); }
};

/// Partitions the moves into chains. A move x->y extends the chain whose tip is x;
/// otherwise x is an untouched start edge and opens a new chain. A start edge that is
/// re-inserted by another chain and removed again extends that other chain.
/// Chains are ordered by their first move.
std::vector<Chain> chain_decomposition(const FlipSequence& seq);

/// The trace of a start-tree edge (just {e} if never flipped). Throws if e not in start.
std::vector<Chord> trace(const FlipSequence& seq, const Chord& e);
std::size_t trace_length(const FlipSequence& seq, const Chord& e);

ChordSet happy_edges(const PlaneTree& ti, const PlaneTree& tf);

/// Chords present in some tree along the sequence but in neither endpoint tree.
/// Throws if the sequence does not end at tf.
ChordSet parking_edges(const FlipSequence& seq, const PlaneTree& tf);

/// True iff the chord inserted by move i is never removed later.
bool is_final_flip(const FlipSequence& seq, std::size_t i);

/// Moves whose inserted chord is not in tf.
std::size_t nonperfect_count(const FlipSequence& seq, const PlaneTree& tf);

/// Every tree along seq uses only chords of ti, tf and the hull.
bool hull_parking_only(const FlipSequence& seq, const PlaneTree& ti, const PlaneTree& tf);

/// Sequence from the final tree back to the start.
FlipSequence reverse_sequence(const FlipSequence& seq);

/// Non-final moves whose removed chord is crossed by no chord of any later tree.
/// Empty iff seq has the final-flip property.
std::vector<std::size_t> uncrossed_nonfinal_flips(const FlipSequence& seq);

struct SequenceReport {
  std::size_t length = 0;
  ChordSet happy;
  ChordSet fixed;  // happy edges with trace length zero
  ChordSet parking;
  std::map<Chord, std::size_t> trace_lengths;  // every start edge
  std::size_t max_trace_length = 0;
  std::size_t nonperfect = 0;
  bool hull_parking_only = false;
};

SequenceReport analyze(const FlipSequence& seq, const PlaneTree& tf);

std::string to_string(const FlipSequence& seq);

}  // namespace treeflip
