#include "treeflip/plane_tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace treeflip {

namespace {

struct ChordTables {
  std::array<Chord, kMaxChords> by_id{};
  std::array<ChordSet, kMaxChords> crossing{};

  ChordTables() {
    for (int b = 1; b < kMaxPoints; ++b)
      for (int a = 0; a < b; ++a) by_id[Chord(a, b).id()] = Chord(a, b);
    for (int i = 0; i < kMaxChords; ++i)
      for (int j = 0; j < kMaxChords; ++j)
        if (chords_cross(by_id[i], by_id[j])) crossing[i].insert_id(j);
  }
};

const ChordTables& tables() {
  static const ChordTables t;
  return t;
}

struct UnionFind {
  std::array<int, kMaxPoints> parent{};
  explicit UnionFind(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[x] = y;
    return true;
  }
};

// Rooted view of a tree on raw bits, for path queries.
struct RootedTree {
  int n;
  std::array<int, kMaxPoints> parent{};
  std::array<int, kMaxPoints> depth{};

  RootedTree(int n_, const ChordSet& bits) : n(n_) {
    std::array<std::array<int, kMaxPoints>, kMaxPoints> adj{};
    std::array<int, kMaxPoints> deg{};
    bits.for_each([&](const Chord& c) {
      adj[c.a][deg[c.a]++] = c.b;
      adj[c.b][deg[c.b]++] = c.a;
    });
    parent.fill(-2);
    std::array<int, kMaxPoints> queue{};
    int head = 0, tail = 0;
    queue[tail++] = 0;
    parent[0] = -1;
    depth[0] = 0;
    while (head < tail) {
      int u = queue[head++];
      for (int i = 0; i < deg[u]; ++i) {
        int v = adj[u][i];
        if (parent[v] != -2) continue;
        parent[v] = u;
        depth[v] = depth[u] + 1;
        queue[tail++] = v;
      }
    }
  }

  template <typename F>
  void for_each_path_edge(int u, int v, F&& f) const {
    while (u != v) {
      if (depth[u] >= depth[v]) {
        f(Chord(u, parent[u]));
        u = parent[u];
      } else {
        f(Chord(v, parent[v]));
        v = parent[v];
      }
    }
  }
};

std::vector<Chord> sorted_chords(const ChordSet& bits) { return bits.sorted(); }

}  // namespace

Chord Chord::from_id(int id) { return tables().by_id.at(static_cast<std::size_t>(id)); }

const ChordSet& crossing_mask(const Chord& c) { return tables().crossing[c.id()]; }

std::vector<Chord> ChordSet::sorted() const {
  std::vector<Chord> out;
  for_each([&](const Chord& c) { out.push_back(c); });
  std::sort(out.begin(), out.end());
  return out;
}

void check_chord(int n, const Chord& c) {
  if (c.a < 0 || c.b >= n || c.a >= c.b)
    throw InvalidTree(Violation::kLabelOutOfRange,
                      "chord " + c.str() + " out of range for n=" + std::to_string(n));
}

bool chords_cross(int n, const Chord& c1, const Chord& c2) {
  check_chord(n, c1);
  check_chord(n, c2);
  return chords_cross(c1, c2);
}

bool is_hull_edge_checked(int n, const Chord& c) {
  check_chord(n, c);
  return is_hull_edge(n, c);
}

ChordSet hull_edges(int n) {
  ChordSet s;
  for (int i = 0; i + 1 < n; ++i) s.insert(Chord(i, i + 1));
  s.insert(Chord(0, n - 1));
  return s;
}

std::string to_string(FlipKind k) {
  switch (k) {
    case FlipKind::kCrossing: return "crossing";
    case FlipKind::kCompatible: return "compatible";
    case FlipKind::kRotation: return "rotation";
    case FlipKind::kSlide: return "slide";
  }
  return "?";
}

std::string to_string(Violation v) {
  switch (v) {
    case Violation::kNone: return "none";
    case Violation::kLabelOutOfRange: return "label out of range";
    case Violation::kCount: return "wrong chord count";
    case Violation::kDuplicate: return "duplicate chord";
    case Violation::kCycle: return "cycle";
    case Violation::kDisconnected: return "disconnected";
    case Violation::kCrossing: return "crossing pair";
    case Violation::kSameChord: return "removed equals inserted";
    case Violation::kRemovedAbsent: return "removed chord not in tree";
    case Violation::kInsertedPresent: return "inserted already present";
    case Violation::kSizeMismatch: return "point count mismatch";
  }
  return "?";
}

PlaneTree::PlaneTree(int n, ChordSet bits) : n_(n), bits_(bits), chords_(sorted_chords(bits)) {}

PlaneTree tree_from_trusted_bits(int n, const ChordSet& bits) { return PlaneTree(n, bits); }

TreeValidation validate_tree(const std::vector<Chord>& chords, int n) {
  TreeValidation r;
  auto fail = [&](Violation v, std::string msg) {
    r.violation = v;
    r.message = std::move(msg);
    return r;
  };
  if (n < 3 || n > kMaxPoints)
    return fail(Violation::kLabelOutOfRange, "n=" + std::to_string(n) + " outside [3, 32]");
  ChordSet bits;
  for (const auto& c : chords) {
    if (c.a < 0 || c.b >= n || c.a >= c.b)
      return fail(Violation::kLabelOutOfRange,
                  "chord " + c.str() + " out of range for n=" + std::to_string(n));
    if (bits.contains(c)) return fail(Violation::kDuplicate, "duplicate chord " + c.str());
    bits.insert(c);
  }
  if (static_cast<int>(chords.size()) != n - 1)
    return fail(Violation::kCount, "expected " + std::to_string(n - 1) + " chords, got " +
                                       std::to_string(chords.size()));
  auto sorted = bits.sorted();
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j)
      if (chords_cross(sorted[i], sorted[j])) {
        r.crossing_pair = std::make_pair(sorted[i], sorted[j]);
        return fail(Violation::kCrossing,
                    "crossing pair (" + sorted[i].str() + ")x(" + sorted[j].str() + ")");
      }
  UnionFind uf(n);
  for (const auto& c : sorted)
    if (!uf.unite(c.a, c.b)) return fail(Violation::kCycle, "cycle closed by " + c.str());
  r.tree = tree_from_trusted_bits(n, bits);
  return r;
}

PlaneTree PlaneTree::from_chords(int n, const std::vector<Chord>& chords) {
  auto v = validate_tree(chords, n);
  if (!v.ok()) throw InvalidTree(v.violation, v.message);
  return *std::move(v.tree);
}

std::string PlaneTree::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < chords_.size(); ++i) os << (i ? " " : "") << chords_[i].str();
  os << "}";
  return os.str();
}

PlaneTree apply_flip(const PlaneTree& t, const Chord& removed, const Chord& inserted) {
  const int n = t.n();
  check_chord(n, removed);
  check_chord(n, inserted);
  if (removed == inserted)
    throw InvalidTree(Violation::kSameChord, "flip " + removed.str() + "->" + inserted.str() +
                                                 " removes and inserts the same chord");
  if (!t.contains(removed))
    throw InvalidTree(Violation::kRemovedAbsent, "removed chord " + removed.str() + " not in tree");
  if (t.contains(inserted))
    throw InvalidTree(Violation::kInsertedPresent,
                      "inserted already present: " + inserted.str());
  ChordSet rest = t.bits();
  rest.erase(removed);
  ChordSet crossed = crossing_mask(inserted) & rest;
  if (!crossed.empty()) {
    Chord other = crossed.sorted().front();
    throw InvalidTree(Violation::kCrossing,
                      "crossing pair (" + inserted.str() + ")x(" + other.str() + ")");
  }
  UnionFind uf(n);
  rest.for_each([&](const Chord& c) { uf.unite(c.a, c.b); });
  if (uf.find(inserted.a) == uf.find(inserted.b))
    throw InvalidTree(Violation::kCycle, "inserting " + inserted.str() + " after removing " + removed.str() +
                                             " closes a cycle and disconnects the tree");
  rest.insert(inserted);
  return tree_from_trusted_bits(n, rest);
}

PlaneTree apply_flip(const PlaneTree& t, const FlipMove& m) {
  return apply_flip(t, m.removed, m.inserted);
}

FlipKind classify_raw(const ChordSet& bits, const Chord& e, const Chord& f) {
  if (chords_cross(e, f)) return FlipKind::kCrossing;
  if (!e.shares_endpoint(f)) return FlipKind::kCompatible;
  int shared = f.has_endpoint(e.a) ? e.a : e.b;
  int v = e.a == shared ? e.b : e.a;
  int w = f.a == shared ? f.b : f.a;
  return bits.contains(Chord(v, w)) ? FlipKind::kSlide : FlipKind::kRotation;
}

FlipKind classify_flip(const PlaneTree& t, const Chord& removed, const Chord& inserted) {
  (void)apply_flip(t, removed, inserted);
  return classify_raw(t.bits(), removed, inserted);
}

void legal_moves_raw(int n, const ChordSet& bits, std::vector<std::pair<Chord, Chord>>& out) {
  out.clear();
  RootedTree rooted(n, bits);
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u) {
      Chord f(u, v);
      if (bits.contains(f)) continue;
      const ChordSet& cm = crossing_mask(f);
      int crossings = cm.count_common(bits);
      if (crossings >= 2) continue;
      if (crossings == 0) {
        rooted.for_each_path_edge(u, v, [&](const Chord& e) { out.emplace_back(e, f); });
      } else {
        Chord blocker = (cm & bits).sorted().front();
        rooted.for_each_path_edge(u, v, [&](const Chord& e) {
          if (e == blocker) out.emplace_back(e, f);
        });
      }
    }
  std::sort(out.begin(), out.end());
}

std::vector<FlipMove> legal_flips(const PlaneTree& t) {
  std::vector<std::pair<Chord, Chord>> raw;
  legal_moves_raw(t.n(), t.bits(), raw);
  std::vector<FlipMove> moves;
  moves.reserve(raw.size());
  for (const auto& [e, f] : raw) moves.push_back({e, f, classify_raw(t.bits(), e, f)});
  return moves;
}

std::string canonical_key(const PlaneTree& t) {
  std::string s;
  for (const auto& c : t.chords()) {
    if (!s.empty()) s += '.';
    s += c.str();
  }
  return s;
}

PlaneTree tree_from_key(int n, const std::string& key) {
  std::vector<Chord> chords;
  std::size_t pos = 0;
  while (pos < key.size()) {
    std::size_t end = key.find('.', pos);
    if (end == std::string::npos) end = key.size();
    std::string tok = key.substr(pos, end - pos);
    std::size_t dash = tok.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size())
      throw Error("malformed tree key token '" + tok + "'");
    try {
      std::size_t used_a = 0, used_b = 0;
      int a = std::stoi(tok.substr(0, dash), &used_a);
      int b = std::stoi(tok.substr(dash + 1), &used_b);
      if (used_a != dash || used_b != tok.size() - dash - 1)
        throw Error("malformed tree key token '" + tok + "'");
      if (a >= b) throw Error("tree key chord '" + tok + "' not in a<b form");
      chords.emplace_back(a, b);
    } catch (const std::logic_error&) {
      throw Error("malformed tree key token '" + tok + "'");
    }
    pos = end + 1;
  }
  return PlaneTree::from_chords(n, chords);
}

uint64_t count_plane_trees(int n) {
  if (n < 1) return 0;
  // C(3m, m) / (2m + 1) with m = n - 1, computed incrementally in 128 bits.
  const int m = n - 1;
  unsigned __int128 c = 1;
  for (int i = 1; i <= m; ++i) c = c * static_cast<unsigned>(2 * m + i) / static_cast<unsigned>(i);
  return static_cast<uint64_t>(c / static_cast<unsigned>(2 * m + 1));
}

namespace {

struct TreeEnumerator {
  int n;
  std::vector<Chord> order;
  const std::function<void(const PlaneTree&)>& visit;
  ChordSet chosen;

  void run(std::size_t idx, int count, UnionFind uf) {
    if (count == n - 1) {
      visit(tree_from_trusted_bits(n, chosen));
      return;
    }
    if (static_cast<int>(order.size() - idx) < n - 1 - count) return;
    const Chord& c = order[idx];
    if (crossing_mask(c).count_common(chosen) == 0) {
      UnionFind next = uf;
      if (next.unite(c.a, c.b)) {
        chosen.insert(c);
        run(idx + 1, count + 1, next);
        chosen.erase(c);
      }
    }
    run(idx + 1, count, uf);
  }
};

}  // namespace

void for_each_plane_tree(int n, uint64_t cap, const std::function<void(const PlaneTree&)>& visit) {
  ConvexSet guard(n);
  uint64_t predicted = count_plane_trees(n);
  if (predicted > cap)
    throw Error("enumeration of n=" + std::to_string(n) + " would produce " +
                std::to_string(predicted) + " trees, above cap " + std::to_string(cap));
  TreeEnumerator en{n, {}, visit, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) en.order.emplace_back(a, b);
  en.run(0, 0, UnionFind(n));
}

std::vector<PlaneTree> enumerate_all_trees(int n, uint64_t cap) {
  std::vector<PlaneTree> out;
  for_each_plane_tree(n, cap, [&](const PlaneTree& t) { out.push_back(t); });
  return out;
}

}  // namespace treeflip
