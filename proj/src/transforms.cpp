#include "treeflip/transforms.hpp"

#include <deque>
#include <numeric>

namespace treeflip {

bool RewriteOutcome::other_traces_unchanged() const {
  for (const auto& [root, same] : unchanged_traces)
    if (!same) return false;
  return true;
}

namespace {

enum class Side { kLow, kHigh, kNeither };

// Sides of a diagonal f=(a,b): kLow holds labels a..b, kHigh holds b..n-1,0..a.
Side side_of(const Chord& f, const Chord& c) {
  auto low = [&](int x) { return f.a <= x && x <= f.b; };
  auto high = [&](int x) { return x <= f.a || x >= f.b; };
  if (low(c.a) && low(c.b)) return Side::kLow;
  if (high(c.a) && high(c.b)) return Side::kHigh;
  return Side::kNeither;
}

std::vector<int> side_vertices(int n, const Chord& f, Side s) {
  std::vector<int> v;
  if (s == Side::kLow) {
    for (int x = f.a; x <= f.b; ++x) v.push_back(x);
  } else {
    for (int x = f.b; x != f.a; x = (x + 1) % n) v.push_back(x);
    v.push_back(f.a);
  }
  return v;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// The hull edge on side s of f that joins the two pieces of the tree's side-s part minus f.
Chord hull_joiner(const PlaneTree& t, const Chord& f, Side s) {
  const int n = t.n();
  Dsu dsu(n);
  for (const auto& c : t.chords())
    if (!(c == f) && side_of(f, c) == s) dsu.unite(c.a, c.b);
  auto verts = side_vertices(n, f, s);
  std::vector<Chord> joins;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i)
    if (dsu.find(verts[i]) != dsu.find(verts[i + 1])) joins.emplace_back(verts[i], verts[i + 1]);
  if (joins.size() != 1)
    throw RewriteError("expected a unique hull edge joining the two subtrees beside " + f.str() +
                       ", found " + std::to_string(joins.size()));
  return joins.front();
}

std::map<Chord, std::vector<Chord>> chains_by_root(const FlipSequence& seq) {
  std::map<Chord, std::vector<Chord>> out;
  for (auto& ch : chain_decomposition(seq)) out[ch.root] = ch.links;
  return out;
}

Chord chain_root_of_move(const FlipSequence& seq, std::size_t index) {
  for (const auto& ch : chain_decomposition(seq))
    for (std::size_t i : ch.flip_indices)
      if (i == index) return ch.root;
  throw Error("move index out of range");
}

RewriteOutcome make_outcome(const FlipSequence& before, FlipSequence after, const Chord& changed) {
  try {
    (void)replay(after);
  } catch (const ReplayError& err) {
    throw RewriteError(std::string("rewritten sequence is invalid: ") + err.what());
  }
  auto old_chains = chains_by_root(before);
  auto new_chains = chains_by_root(after);
  const int delta = static_cast<int>(after.length()) - static_cast<int>(before.length());
  RewriteOutcome out{std::move(after), delta, changed, {}, delta < 0};
  for (const auto& [root, links] : old_chains) {
    if (root == changed) continue;
    auto it = new_chains.find(root);
    out.unchanged_traces[root] = it != new_chains.end() && it->second == links;
  }
  for (const auto& [root, links] : new_chains)
    if (!(root == changed) && !old_chains.contains(root)) out.unchanged_traces[root] = false;
  return out;
}

struct LinkContext {
  std::vector<PlaneTree> trees;
  Chord e, f, e2;
  std::vector<Move> low, high;  // middle flips by side of f
};

LinkContext inspect_link(const FlipSequence& seq, ParkingLink link) {
  LinkContext ctx;
  ctx.trees = replay(seq);
  const auto i = link.insert_index, j = link.remove_index;
  if (!(i < j && j < seq.moves.size())) throw RewriteError("parking link indices out of order");
  ctx.e = seq.moves[i].removed;
  ctx.f = seq.moves[i].inserted;
  ctx.e2 = seq.moves[j].inserted;
  if (!(seq.moves[j].removed == ctx.f))
    throw RewriteError("move " + std::to_string(j) + " does not remove " + ctx.f.str());
  if (is_hull_edge(seq.start.n(), ctx.f)) throw RewriteError("f not a diagonal: " + ctx.f.str());
  for (std::size_t m = i + 1; m < j; ++m) {
    const auto& mv = seq.moves[m];
    if (mv.removed == ctx.f) throw RewriteError(ctx.f.str() + " removed before move " + std::to_string(j));
    Side s = side_of(ctx.f, mv.removed);
    if (s == Side::kNeither || side_of(ctx.f, mv.inserted) != s)
      throw RewriteError("move " + std::to_string(m) + " does not stay on one side of " + ctx.f.str());
    (s == Side::kLow ? ctx.low : ctx.high).push_back(mv);
  }
  return ctx;
}

FlipSequence splice(const FlipSequence& seq, ParkingLink link, const std::vector<Move>& middle) {
  FlipSequence out{seq.start, {}};
  out.moves.assign(seq.moves.begin(), seq.moves.begin() + link.insert_index);
  out.moves.insert(out.moves.end(), middle.begin(), middle.end());
  out.moves.insert(out.moves.end(), seq.moves.begin() + link.remove_index + 1, seq.moves.end());
  return out;
}

// Assumes e->f is compatible.
FlipSequence relocate_forward(const FlipSequence& seq, ParkingLink link) {
  auto ctx = inspect_link(seq, link);
  Side near = side_of(ctx.f, ctx.e);
  if (near == Side::kNeither) throw RewriteError("flip " + ctx.e.str() + "->" + ctx.f.str() + " is crossing");
  Side far = near == Side::kLow ? Side::kHigh : Side::kLow;
  const auto& far_moves = far == Side::kLow ? ctx.low : ctx.high;
  const auto& near_moves = near == Side::kLow ? ctx.low : ctx.high;
  Chord h = hull_joiner(ctx.trees[link.remove_index], ctx.f, far);
  std::vector<Move> middle(far_moves);
  middle.push_back({ctx.e, h});
  middle.insert(middle.end(), near_moves.begin(), near_moves.end());
  // When the joiner is e' itself the park disappears and the sequence gets one shorter.
  if (!(h == ctx.e2)) middle.push_back({h, ctx.e2});
  return splice(seq, link, middle);
}

}  // namespace

ParkingLink parking_link(const FlipSequence& seq, const Chord& root) {
  for (const auto& ch : chain_decomposition(seq))
    if (ch.root == root) {
      if (ch.length() != 2)
        throw RewriteError("chain of " + root.str() + " has trace length " +
                           std::to_string(ch.length()) + ", expected 2");
      return {ch.flip_indices[0], ch.flip_indices[1]};
    }
  throw RewriteError("chain of " + root.str() + " has trace length 0, expected 2");
}

RewriteOutcome relocate_parking_to_hull(const FlipSequence& seq, const Chord& root) {
  return relocate_parking_to_hull(seq, parking_link(seq, root));
}

RewriteOutcome relocate_parking_to_hull(const FlipSequence& seq, ParkingLink link) {
  auto ctx = inspect_link(seq, link);
  const Chord changed = chain_root_of_move(seq, link.insert_index);
  if (!chords_cross(ctx.e, ctx.f)) return make_outcome(seq, relocate_forward(seq, link), changed);
  if (chords_cross(ctx.f, ctx.e2))
    throw RewriteError("both " + ctx.e.str() + "->" + ctx.f.str() + " and " + ctx.f.str() + "->" +
                       ctx.e2.str() + " are crossing flips; split the park instead");
  const std::size_t k = seq.moves.size();
  auto rev = reverse_sequence(seq);
  ParkingLink rlink{k - 1 - link.remove_index, k - 1 - link.insert_index};
  return make_outcome(seq, reverse_sequence(relocate_forward(rev, rlink)), changed);
}

RewriteOutcome split_diagonal_parking(const FlipSequence& seq, const Chord& root) {
  return split_diagonal_parking(seq, parking_link(seq, root));
}

RewriteOutcome split_diagonal_parking(const FlipSequence& seq, ParkingLink link) {
  auto ctx = inspect_link(seq, link);
  if (!chords_cross(ctx.e, ctx.f) || !chords_cross(ctx.f, ctx.e2))
    throw RewriteError("park on " + ctx.f.str() + " has a compatible flip; relocate it instead");
  const Chord changed = chain_root_of_move(seq, link.insert_index);
  Chord h = hull_joiner(ctx.trees[link.insert_index + 1], ctx.f, Side::kLow);
  Chord h2 = hull_joiner(ctx.trees[link.remove_index], ctx.f, Side::kHigh);
  std::vector<Move> middle{{ctx.e, h}};
  middle.insert(middle.end(), ctx.high.begin(), ctx.high.end());
  middle.push_back({h, h2});
  middle.insert(middle.end(), ctx.low.begin(), ctx.low.end());
  middle.push_back({h2, ctx.e2});
  return make_outcome(seq, splice(seq, link, middle), changed);
}

namespace {

std::vector<Chord> tree_path(const PlaneTree& t, int from, int to) {
  const int n = t.n();
  std::vector<std::vector<int>> adj(n);
  for (const auto& c : t.chords()) {
    adj[c.a].push_back(c.b);
    adj[c.b].push_back(c.a);
  }
  std::vector<int> parent(n, -1);
  std::deque<int> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj[u])
      if (parent[v] < 0) {
        parent[v] = u;
        queue.push_back(v);
      }
  }
  std::vector<Chord> path;
  for (int v = to; v != from; v = parent[v]) path.emplace_back(parent[v], v);
  return path;
}

}  // namespace

RewriteOutcome normalize(const FlipSequence& seq, const Chord& e) {
  if (!seq.start.contains(e)) throw RewriteError("chord " + e.str() + " is not in the start tree");
  auto trees = replay(seq);
  for (std::size_t i = 0; i < trees.size(); ++i)
    if (crossing_mask(e).count_common(trees[i].bits()) != 0)
      throw RewriteError("tree " + std::to_string(i) + " has a chord crossing " + e.str());
  const std::size_t k = seq.moves.size();
  std::vector<ChordSet> normal(trees.size());
  for (std::size_t i = 0; i <= k; ++i) {
    ChordSet bits = trees[i].bits();
    if (!bits.contains(e)) {
      auto path = tree_path(trees[i], e.a, e.b);
      ChordSet on_cycle;
      for (const auto& c : path) on_cycle.insert(c);
      for (std::size_t m = i; m < k; ++m)
        if (on_cycle.contains(seq.moves[m].removed)) {
          bits.insert(e);
          bits.erase(seq.moves[m].removed);
          break;
        }
    }
    normal[i] = bits;
  }
  FlipSequence out{seq.start, {}};
  for (std::size_t i = 0; i < k; ++i) {
    if (normal[i] == normal[i + 1]) continue;
    auto gone = (normal[i] - normal[i + 1]).sorted();
    auto added = (normal[i + 1] - normal[i]).sorted();
    if (gone.size() != 1 || added.size() != 1)
      throw RewriteError("normalized trees " + std::to_string(i) + " and " + std::to_string(i + 1) +
                         " are not one flip apart");
    out.moves.push_back({gone[0], added[0]});
  }
  return make_outcome(seq, std::move(out), e);
}

RewriteOutcome eliminate_diagonal_parking(const FlipSequence& seq) {
  const PlaneTree target = final_tree(seq);
  FlipSequence cur = seq;
  std::optional<Chord> first_changed;
  const std::size_t limit = 4 * seq.moves.size() + 8;
  for (std::size_t round = 0;; ++round) {
    if (round > limit) throw RewriteError("diagonal parking elimination did not converge");
    std::optional<ParkingLink> link;
    for (std::size_t i = 0; i < cur.moves.size() && !link; ++i) {
      const Chord& f = cur.moves[i].inserted;
      if (is_hull_edge(cur.start.n(), f) || cur.start.contains(f) || target.contains(f)) continue;
      for (std::size_t j = i + 1; j < cur.moves.size(); ++j)
        if (cur.moves[j].removed == f) {
          link = ParkingLink{i, j};
          break;
        }
    }
    if (!link) break;
    const auto& in = cur.moves[link->insert_index];
    const auto& out = cur.moves[link->remove_index];
    if (!first_changed) first_changed = chain_root_of_move(cur, link->insert_index);
    bool compatible = !chords_cross(in.removed, in.inserted) || !chords_cross(out.removed, out.inserted);
    cur = compatible ? relocate_parking_to_hull(cur, *link).sequence
                     : split_diagonal_parking(cur, *link).sequence;
  }
  return make_outcome(seq, std::move(cur), first_changed.value_or(Chord{}));
}

ReparkingConditions check_reparking_conditions(const FlipSequence& seq, const Chord& root) {
  for (const auto& ch : chain_decomposition(seq))
    if (ch.root == root) {
      if (ch.length() != 3)
        throw RewriteError("chain of " + root.str() + " has trace length " +
                           std::to_string(ch.length()) + ", expected 3");
      const int n = seq.start.n();
      ReparkingConditions r{ch.links[0], ch.links[1], ch.links[2], ch.links[3]};
      r.ends_are_diagonals = !is_hull_edge(n, r.e) && !is_hull_edge(n, r.e3);
      r.e_crosses_e1 = chords_cross(r.e, r.e1);
      r.e1_crosses_e2 = chords_cross(r.e1, r.e2);
      r.e2_crosses_e3 = chords_cross(r.e2, r.e3);
      return r;
    }
  throw RewriteError("chain of " + root.str() + " has trace length 0, expected 3");
}

}  // namespace treeflip
