#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treeflip/plane_tree.hpp"
#include "treeflip/sequence.hpp"

namespace treeflip {

/// When a flip counts as perfect relative to the target tree.
enum class PerfectRule {
  /// Inserts a target chord and removes a non-target chord.
  kStrict,
  /// Inserts a target chord (target-for-target swaps count as perfect).
  kInsertOnly,
};

enum class FirstFlipFilter {
  kNone,
  /// The first flip of the sequence must insert a hull edge.
  kFirstFlipHull,
  /// The first non-perfect flip must insert a hull edge.
  kFirstNonperfectHull,
};

std::string to_string(FirstFlipFilter f);
FirstFlipFilter first_flip_filter_from_string(const std::string& s);

class CapExceeded : public Error {
 public:
  using Error::Error;
};

struct SearchOptions {
  int max_nonperfect = -1;  // negative: unlimited
  bool restrict_parking_to_hull = false;
  bool forbid_flipping_happy = false;
  FirstFlipFilter first_flip = FirstFlipFilter::kNone;
  std::size_t max_sequences = 100000;
  int max_length = 64;
  bool compatible_only = false;
  PerfectRule perfect = PerfectRule::kStrict;
  uint64_t node_cap = 2'000'000'000ull;
  unsigned threads = 1;
};

enum class SearchStatus {
  kFound,
  /// No sequence satisfying the options within max_length.
  kNone,
  /// A cap was hit. On the sequence cap the optimum is still certified and the first
  /// max_sequences sequences are returned; on the node cap nothing is certified.
  kInconclusive,
};

std::string to_string(SearchStatus s);

struct SearchStats {
  uint64_t nodes_expanded = 0;
  double seconds = 0.0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kNone;
  std::optional<int> optimum;
  /// Exact number of optimal sequences when status == kFound; the number returned otherwise.
  uint64_t count = 0;
  /// All optimal sequences in deterministic (sorted-move DFS) order.
  std::vector<FlipSequence> sequences;
  std::string reason;
  SearchStats stats;

  bool conclusive() const { return status != SearchStatus::kInconclusive; }
};

/// Iterative-deepening enumeration of every shortest sequence that satisfies opts.
SearchResult shortest_sequences(const PlaneTree& ti, const PlaneTree& tf, const SearchOptions& opts = {});

/// Exact distance by breadth-first search; throws CapExceeded beyond node_cap visited trees.
int flip_distance_bfs(const PlaneTree& ti, const PlaneTree& tf, uint64_t node_cap);

/// |tf \ ti|, plus one when every chord of tf \ ti is crossed at least twice by ti and
/// every chord of ti \ tf is crossed at least twice by tf.
int lower_bound(const PlaneTree& ti, const PlaneTree& tf);

struct DiameterResult {
  int diameter = 0;
  PlaneTree from;
  PlaneTree to;
};

/// All-pairs BFS on the full flip graph; throws CapExceeded when the tree count exceeds node_cap.
DiameterResult diameter(int n, uint64_t node_cap);

enum class SliceBound {
  /// Only the non-perfect budget restricts exploration.
  kBudgetOnly,
  /// Additionally depth + |tf \ T| must stay within the optimum length.
  kLengthPruned,
};

struct SliceOptions {
  int budget = 1;
  FirstFlipFilter first_flip = FirstFlipFilter::kNone;
  SliceBound bound = SliceBound::kLengthPruned;
  PerfectRule perfect = PerfectRule::kStrict;
  uint64_t node_cap = 5'000'000;
  uint64_t path_cap = 200'000'000;
};

struct SliceNode {
  PlaneTree tree;
  std::string key;
  int min_nonperfect = 0;
  int min_depth = 0;
};

struct SliceArc {
  std::size_t from = 0;
  std::size_t to = 0;
  Move move;
  FlipKind kind = FlipKind::kCompatible;
  bool perfect = false;
};

/// Trees and flips lying on simple paths from the root that respect the non-perfect-flip
/// budget. Nodes and arcs are numbered in depth-first discovery order over sorted moves;
/// node 0 is the root. Annotations are minima over all such paths.
struct FlipGraphSlice {
  int n = 0;
  int budget = 0;
  FirstFlipFilter first_flip = FirstFlipFilter::kNone;
  SliceBound bound = SliceBound::kLengthPruned;
  /// Depth + remaining-target bound used when bound == kLengthPruned.
  int length_bound = 0;
  ChordSet target;
  std::vector<SliceNode> nodes;
  std::vector<SliceArc> arcs;

  std::optional<std::size_t> find(const std::string& key) const;
};

/// The length bound is the optimum under the budget (unfiltered), or |tf \ ti| + budget
/// when no sequence fits the budget. Throws CapExceeded beyond node_cap trees or path_cap
/// visited paths.
FlipGraphSlice reachable_slice(const PlaneTree& ti, const PlaneTree& tf, const SliceOptions& opts);

/// Whether a flip counts as perfect toward tf.
bool is_perfect_flip(const ChordSet& target, const Chord& removed, const Chord& inserted,
                     PerfectRule rule);

}  // namespace treeflip
