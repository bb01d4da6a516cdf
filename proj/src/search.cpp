#include "treeflip/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace treeflip {

std::string to_string(FirstFlipFilter f) {
  switch (f) {
    case FirstFlipFilter::kNone: return "none";
    case FirstFlipFilter::kFirstFlipHull: return "first-flip-hull";
    case FirstFlipFilter::kFirstNonperfectHull: return "first-nonperfect-hull";
  }
  return "?";
}

FirstFlipFilter first_flip_filter_from_string(const std::string& s) {
  if (s == "none") return FirstFlipFilter::kNone;
  if (s == "first-flip-hull") return FirstFlipFilter::kFirstFlipHull;
  if (s == "first-nonperfect-hull") return FirstFlipFilter::kFirstNonperfectHull;
  throw Error("unknown first-flip filter '" + s + "'");
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kFound: return "found";
    case SearchStatus::kNone: return "none";
    case SearchStatus::kInconclusive: return "inconclusive";
  }
  return "?";
}

bool is_perfect_flip(const ChordSet& target, const Chord& removed, const Chord& inserted,
                     PerfectRule rule) {
  if (!target.contains(inserted)) return false;
  return rule == PerfectRule::kInsertOnly || !target.contains(removed);
}

namespace {

void require_same_n(const PlaneTree& ti, const PlaneTree& tf) {
  if (ti.n() != tf.n())
    throw InvalidTree(Violation::kSizeMismatch, "trees on different point counts: " +
                                                    std::to_string(ti.n()) + " vs " +
                                                    std::to_string(tf.n()));
}

struct StateKey {
  ChordSet tree;
  int remaining;
  int budget;
  bool np_seen;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    return k.tree.hash() ^ (static_cast<std::size_t>(k.remaining) * 0x9e3779b1u) ^
           (static_cast<std::size_t>(k.budget + 2) << 20) ^ (k.np_seen ? 0x5bd1e995u : 0u);
  }
};

// Which generated moves a search may use, independent of depth and budget.
struct MoveFilter {
  int n;
  ChordSet target;
  ChordSet happy;
  ChordSet allowed;  // only consulted when restricting parking to the hull
  const SearchOptions& opts;

  bool admits(const Chord& e, const Chord& f) const {
    if (opts.forbid_flipping_happy && happy.contains(e)) return false;
    if (opts.restrict_parking_to_hull && !allowed.contains(f)) return false;
    if (opts.compatible_only && chords_cross(e, f)) return false;
    return true;
  }
};

struct Aborted {
  std::string reason;
  bool sequence_cap = false;
  // On a sequence cap: the first max_sequences sequences in move order.
  std::vector<std::vector<Move>> partial;
};

class BoundedDfs {
 public:
  BoundedDfs(const MoveFilter& filter, int bound, std::atomic<uint64_t>& nodes)
      : filter_(filter), opts_(filter.opts), bound_(bound), nodes_(nodes) {}

  // Counts (and records) every sequence of length <= bound from `start`.
  // `first` restricts the root to a single move when set.
  void run(const ChordSet& start, const std::optional<Move>& first) {
    path_.push_back(start);
    int budget = opts_.max_nonperfect < 0 ? -1 : opts_.max_nonperfect;
    if (first) {
      descend(start, *first, 0, budget, false);
    } else {
      visit(start, 0, budget, false);
    }
  }

  uint64_t count() const { return count_; }
  std::vector<std::vector<Move>>& found() { return found_; }

 private:
  // Returns true if at least one sequence was found below this state.
  bool visit(const ChordSet& tree, int depth, int budget, bool np_seen) {
    if (nodes_.fetch_add(1, std::memory_order_relaxed) >= opts_.node_cap)
      throw Aborted{"node cap " + std::to_string(opts_.node_cap) + " exceeded", false, {}};
    const int h = (filter_.target - tree).size();
    if (h == 0) {
      ++count_;
      if (count_ > opts_.max_sequences)
        throw Aborted{"more than " + std::to_string(opts_.max_sequences) + " optimal sequences", true,
                      std::move(found_)};
      found_.push_back(moves_);
      return true;
    }
    if (depth + h > bound_) return false;
    StateKey key{tree, bound_ - depth, budget, np_seen};
    if (dead_.contains(key)) return false;

    std::vector<std::pair<Chord, Chord>> raw;
    legal_moves_raw(filter_.n, tree, raw);
    bool any_gain = false;
    for (const auto& [e, f] : raw)
      if (filter_.admits(e, f) && filter_.target.contains(f) && !filter_.target.contains(e)) {
        any_gain = true;
        break;
      }
    if (!any_gain && depth + h + 1 > bound_) {
      dead_.insert(key);
      return false;
    }
    bool any = false;
    for (const auto& [e, f] : raw)
      if (filter_.admits(e, f)) any |= descend(tree, Move{e, f}, depth, budget, np_seen);
    if (!any) dead_.insert(key);
    return any;
  }

  bool descend(const ChordSet& tree, const Move& m, int depth, int budget, bool np_seen) {
    const bool perfect = is_perfect_flip(filter_.target, m.removed, m.inserted, opts_.perfect);
    if (!perfect && budget == 0) return false;
    const bool hull = is_hull_edge(filter_.n, m.inserted);
    if (depth == 0 && opts_.first_flip == FirstFlipFilter::kFirstFlipHull && !hull) return false;
    if (!perfect && !np_seen && opts_.first_flip == FirstFlipFilter::kFirstNonperfectHull && !hull)
      return false;
    ChordSet next = tree;
    next.erase(m.removed);
    next.insert(m.inserted);
    if (depth + 1 + (filter_.target - next).size() > bound_) return false;
    if (std::find(path_.begin(), path_.end(), next) != path_.end()) return false;
    path_.push_back(next);
    moves_.push_back(m);
    int next_budget = (!perfect && budget > 0) ? budget - 1 : budget;
    bool any = visit(next, depth + 1, next_budget, np_seen || !perfect);
    moves_.pop_back();
    path_.pop_back();
    return any;
  }

  const MoveFilter& filter_;
  const SearchOptions& opts_;
  int bound_;
  std::atomic<uint64_t>& nodes_;
  std::vector<ChordSet> path_;
  std::vector<Move> moves_;
  std::unordered_set<StateKey, StateKeyHash> dead_;
  uint64_t count_ = 0;
  std::vector<std::vector<Move>> found_;
};

struct IterationOutcome {
  uint64_t count = 0;
  std::vector<std::vector<Move>> found;
};

IterationOutcome run_iteration(const MoveFilter& filter, const ChordSet& start, int bound,
                               std::atomic<uint64_t>& nodes) {
  const SearchOptions& opts = filter.opts;
  IterationOutcome out;
  if (opts.threads <= 1 || (filter.target - start).empty()) {
    BoundedDfs dfs(filter, bound, nodes);
    dfs.run(start, std::nullopt);
    out.count = dfs.count();
    out.found = std::move(dfs.found());
    return out;
  }
  // Fan out over root moves; merge in move order so output matches the sequential run.
  std::vector<std::pair<Chord, Chord>> raw;
  legal_moves_raw(filter.n, start, raw);
  std::vector<Move> roots;
  for (const auto& [e, f] : raw)
    if (filter.admits(e, f)) roots.push_back({e, f});
  struct Slot {
    uint64_t count = 0;
    std::vector<std::vector<Move>> found;
    std::optional<Aborted> abort;
  };
  std::vector<Slot> slots(roots.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < roots.size(); i = next.fetch_add(1)) {
      try {
        BoundedDfs dfs(filter, bound, nodes);
        dfs.run(start, roots[i]);
        slots[i].count = dfs.count();
        slots[i].found = std::move(dfs.found());
      } catch (const Aborted& a) {
        slots[i].abort = a;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < opts.threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& s : slots)
    if (s.abort && !s.abort->sequence_cap) throw *s.abort;
  bool capped = false;
  for (auto& s : slots) {
    auto& found = s.abort ? s.abort->partial : s.found;
    for (auto& f : found) {
      if (out.found.size() == opts.max_sequences) {
        capped = true;
        break;
      }
      out.found.push_back(std::move(f));
    }
    if (s.abort) capped = true;
    if (capped) break;
    out.count += s.count;
  }
  if (capped || out.count > opts.max_sequences)
    throw Aborted{"more than " + std::to_string(opts.max_sequences) + " optimal sequences", true,
                  std::move(out.found)};
  return out;
}

}  // namespace

SearchResult shortest_sequences(const PlaneTree& ti, const PlaneTree& tf, const SearchOptions& opts) {
  require_same_n(ti, tf);
  auto t0 = std::chrono::steady_clock::now();
  MoveFilter filter{ti.n(), tf.bits(), ti.bits() & tf.bits(),
                    ti.bits() | tf.bits() | hull_edges(ti.n()), opts};
  std::atomic<uint64_t> nodes{0};
  SearchResult result;
  auto finish = [&] {
    result.stats.nodes_expanded = nodes.load();
    result.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };
  const int start_bound = (tf.bits() - ti.bits()).size();
  for (int bound = start_bound; bound <= opts.max_length; ++bound) {
    try {
      auto it = run_iteration(filter, ti.bits(), bound, nodes);
      if (it.count == 0) continue;
      result.status = SearchStatus::kFound;
      result.optimum = bound;
      result.count = it.count;
      for (auto& moves : it.found) result.sequences.push_back({ti, std::move(moves)});
      return finish();
    } catch (const Aborted& a) {
      result.status = SearchStatus::kInconclusive;
      result.reason = a.reason;
      // Hitting the sequence cap still certifies the optimum: no shorter bound had any.
      if (a.sequence_cap) {
        result.optimum = bound;
        result.count = a.partial.size();
        for (auto& moves : a.partial) result.sequences.push_back({ti, std::move(moves)});
      }
      return finish();
    }
  }
  result.status = SearchStatus::kNone;
  result.reason = "no sequence within max_length " + std::to_string(opts.max_length);
  return finish();
}

int flip_distance_bfs(const PlaneTree& ti, const PlaneTree& tf, uint64_t node_cap) {
  require_same_n(ti, tf);
  if (ti == tf) return 0;
  const int n = ti.n();
  std::unordered_map<ChordSet, int, ChordSetHash> dist;
  std::deque<ChordSet> queue;
  dist.emplace(ti.bits(), 0);
  queue.push_back(ti.bits());
  std::vector<std::pair<Chord, Chord>> moves;
  while (!queue.empty()) {
    ChordSet cur = queue.front();
    queue.pop_front();
    int d = dist[cur];
    legal_moves_raw(n, cur, moves);
    for (const auto& [e, f] : moves) {
      ChordSet next = cur;
      next.erase(e);
      next.insert(f);
      if (dist.contains(next)) continue;
      if (next == tf.bits()) return d + 1;
      if (dist.size() >= node_cap)
        throw CapExceeded("breadth-first search visited more than " + std::to_string(node_cap) +
                          " trees");
      dist.emplace(next, d + 1);
      queue.push_back(next);
    }
  }
  throw Error("target tree unreachable");  // the flip graph is connected
}

int lower_bound(const PlaneTree& ti, const PlaneTree& tf) {
  require_same_n(ti, tf);
  ChordSet missing = tf.bits() - ti.bits();
  int m = missing.size();
  if (m == 0) return 0;
  bool forward = true, backward = true;
  missing.for_each([&](const Chord& c) {
    if (crossing_mask(c).count_common(ti.bits()) < 2) forward = false;
  });
  (ti.bits() - tf.bits()).for_each([&](const Chord& c) {
    if (crossing_mask(c).count_common(tf.bits()) < 2) backward = false;
  });
  return m + ((forward && backward) ? 1 : 0);
}

DiameterResult diameter(int n, uint64_t node_cap) {
  if (count_plane_trees(n) > node_cap)
    throw CapExceeded("n=" + std::to_string(n) + " has " + std::to_string(count_plane_trees(n)) +
                      " trees, above cap " + std::to_string(node_cap));
  auto trees = enumerate_all_trees(n, node_cap);
  std::unordered_map<ChordSet, int, ChordSetHash> index;
  for (std::size_t i = 0; i < trees.size(); ++i) index.emplace(trees[i].bits(), static_cast<int>(i));
  std::vector<std::vector<int>> adj(trees.size());
  std::vector<std::pair<Chord, Chord>> moves;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    legal_moves_raw(n, trees[i].bits(), moves);
    for (const auto& [e, f] : moves) {
      ChordSet next = trees[i].bits();
      next.erase(e);
      next.insert(f);
      adj[i].push_back(index.at(next));
    }
  }
  int best = -1;
  std::size_t best_from = 0, best_to = 0;
  std::vector<int> dist(trees.size());
  std::vector<int> queue(trees.size());
  for (std::size_t s = 0; s < trees.size(); ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::size_t head = 0, tail = 0;
    dist[s] = 0;
    queue[tail++] = static_cast<int>(s);
    while (head < tail) {
      int u = queue[head++];
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue[tail++] = v;
        }
    }
    for (std::size_t t = s + 1; t < trees.size(); ++t)
      if (dist[t] > best) {
        best = dist[t];
        best_from = s;
        best_to = t;
      }
  }
  if (best < 0) return {0, trees[0], trees[0]};
  return {best, trees[best_from], trees[best_to]};
}

std::optional<std::size_t> FlipGraphSlice::find(const std::string& key) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].key == key) return i;
  return std::nullopt;
}

FlipGraphSlice reachable_slice(const PlaneTree& ti, const PlaneTree& tf, const SliceOptions& opts) {
  require_same_n(ti, tf);
  if (opts.budget < 0) throw Error("slice budget must be non-negative");
  const int n = ti.n();
  FlipGraphSlice slice;
  slice.n = n;
  slice.budget = opts.budget;
  slice.first_flip = opts.first_flip;
  slice.bound = opts.bound;
  slice.target = tf.bits();
  const ChordSet& target = tf.bits();
  const int missing = (target - ti.bits()).size();

  int length_bound = missing + opts.budget;
  if (opts.bound == SliceBound::kLengthPruned) {
    SearchOptions so;
    so.max_nonperfect = opts.budget;
    so.perfect = opts.perfect;
    so.max_sequences = 1;
    so.max_length = missing + 2 * opts.budget;
    auto r = shortest_sequences(ti, tf, so);
    if (r.optimum) length_bound = *r.optimum;
  }
  slice.length_bound = length_bound;

  const bool pruned = opts.bound == SliceBound::kLengthPruned;
  std::unordered_map<ChordSet, std::size_t, ChordSetHash> node_of;
  std::unordered_set<uint64_t> arc_seen;
  std::vector<char> on_path;
  uint64_t paths = 0;

  auto add_node = [&](const ChordSet& bits, int np, int depth) {
    auto [it, inserted] = node_of.emplace(bits, slice.nodes.size());
    if (inserted) {
      if (slice.nodes.size() >= opts.node_cap)
        throw CapExceeded("slice exceeds " + std::to_string(opts.node_cap) + " nodes");
      auto tree = tree_from_trusted_bits(n, bits);
      slice.nodes.push_back({tree, canonical_key(tree), np, depth});
      on_path.push_back(0);
    } else {
      auto& node = slice.nodes[it->second];
      node.min_nonperfect = std::min(node.min_nonperfect, np);
      node.min_depth = std::min(node.min_depth, depth);
    }
    return it->second;
  };

  // Every simple path from the root is walked once; a tree never repeats within a path.
  auto walk = [&](auto&& self, const ChordSet& tree, std::size_t from, int np, int depth) -> void {
    if (++paths > opts.path_cap)
      throw CapExceeded("slice exceeds " + std::to_string(opts.path_cap) + " paths");
    if (tree == target) return;
    std::vector<std::pair<Chord, Chord>> moves;
    legal_moves_raw(n, tree, moves);
    for (const auto& [e, f] : moves) {
      const bool perfect = is_perfect_flip(target, e, f, opts.perfect);
      const int np2 = np + (perfect ? 0 : 1);
      if (np2 > opts.budget) continue;
      const bool hull = is_hull_edge(n, f);
      if (depth == 0 && opts.first_flip == FirstFlipFilter::kFirstFlipHull && !hull) continue;
      if (!perfect && np == 0 && opts.first_flip == FirstFlipFilter::kFirstNonperfectHull && !hull)
        continue;
      ChordSet next = tree;
      next.erase(e);
      next.insert(f);
      if (pruned && depth + 1 + (target - next).size() > length_bound) continue;
      auto known = node_of.find(next);
      if (known != node_of.end() && on_path[known->second]) continue;
      const std::size_t to = add_node(next, np2, depth + 1);
      if (arc_seen.insert(static_cast<uint64_t>(from) << 32 | to).second)
        slice.arcs.push_back({from, to, Move{e, f}, classify_raw(tree, e, f), perfect});
      on_path[to] = 1;
      self(self, next, to, np2, depth + 1);
      on_path[to] = 0;
    }
  };

  add_node(ti.bits(), 0, 0);
  on_path[0] = 1;
  walk(walk, ti.bits(), 0, 0, 0);
  return slice;
}

}  // namespace treeflip
