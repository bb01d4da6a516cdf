#pragma once

#include <map>
#include <string>

#include "treeflip/sequence.hpp"

namespace treeflip {

/// A rewrite precondition does not hold for the given sequence and chain.
class RewriteError : public Error {
 public:
  using Error::Error;
};

struct RewriteOutcome {
  FlipSequence sequence;
  /// New length minus old length.
  int length_delta = 0;
  /// Root of the chain that was rewritten.
  Chord changed_chain;
  /// For every other chain root of the input: whether its links are identical afterwards.
  std::map<Chord, bool> unchanged_traces;
  /// Set when the rewrite produced a strictly shorter sequence.
  bool shortened = false;

  bool other_traces_unchanged() const;
};

/// Move indices that insert and later remove one parking position of a chain.
struct ParkingLink {
  std::size_t insert_index;
  std::size_t remove_index;
};

/// For the chain rooted at `root` with trace (e, f, e'), the indices of e->f and f->e'.
ParkingLink parking_link(const FlipSequence& seq, const Chord& root);

/// Replaces a diagonal park f by a hull park h with the same length, when e->f or f->e'
/// is compatible. Flips on the two sides of f are reordered so the park happens after
/// every flip on the side away from e and is undone last. If the hull edge found is e'
/// itself, the park is dropped and the result is one flip shorter.
RewriteOutcome relocate_parking_to_hull(const FlipSequence& seq, const Chord& root);
RewriteOutcome relocate_parking_to_hull(const FlipSequence& seq, ParkingLink link);

/// Replaces a diagonal park reached and left by crossing flips with two hull parks,
/// one flip longer: trace (e, f, e') becomes (e, h, h', e').
RewriteOutcome split_diagonal_parking(const FlipSequence& seq, const Chord& root);
RewriteOutcome split_diagonal_parking(const FlipSequence& seq, ParkingLink link);

/// Rewrites the sequence so that the start edge e is flipped at most once. Every tree T
/// without e is replaced by T + e minus the first edge of the cycle closed by e that the
/// rest of the sequence removes. Coinciding consecutive trees are merged.
RewriteOutcome normalize(const FlipSequence& seq, const Chord& e);

/// Applies relocation or splitting to every diagonal parking position until the sequence
/// parks only on the hull.
RewriteOutcome eliminate_diagonal_parking(const FlipSequence& seq);

struct ReparkingConditions {
  Chord e, e1, e2, e3;
  bool ends_are_diagonals = false;  // e and e3
  bool e_crosses_e1 = false;
  bool e1_crosses_e2 = false;
  bool e2_crosses_e3 = false;

  bool all() const { return ends_are_diagonals && e_crosses_e1 && e1_crosses_e2 && e2_crosses_e3; }
};

/// Necessary conditions on a trace-3 chain that cannot be shortened.
ReparkingConditions check_reparking_conditions(const FlipSequence& seq, const Chord& root);

}  // namespace treeflip
