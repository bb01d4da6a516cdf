#include <doctest.h>

#include <set>

#include "support.hpp"
#include "treeflip/instances.hpp"
#include "treeflip/search.hpp"

using namespace treeflip;

namespace {

std::vector<Instance> small_instances(int count, uint64_t seed, int max_n) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) out.push_back(random_instance(4 + i % (max_n - 3), seed + static_cast<uint64_t>(i)));
  return out;
}

bool strict_perfect(const oracle::Tree& target, oracle::Edge e, oracle::Edge f) {
  return target.count(f) && !target.count(e);
}

// Every simple path from the root that respects the budget and the length bound; collects
// the trees and the (from, to) pairs it passes through.
struct PathSlice {
  int n;
  oracle::Tree target;
  int budget;
  int bound;  // < 0: no length bound
  bool first_hull;
  std::set<oracle::Tree> nodes;
  std::set<std::pair<oracle::Tree, oracle::Tree>> arcs;
  std::vector<oracle::Tree> path;

  int missing(const oracle::Tree& t) const {
    int m = 0;
    for (auto e : target) m += !t.count(e);
    return m;
  }

  void walk(const oracle::Tree& t, int depth, int np) {
    nodes.insert(t);
    if (t == target) return;
    for (auto [e, f] : oracle::flips(n, t)) {
      int np2 = np + (strict_perfect(target, e, f) ? 0 : 1);
      if (np2 > budget) continue;
      bool hull = f.second == f.first + 1 || (f.first == 0 && f.second == n - 1);
      if (depth == 0 && first_hull && !hull) continue;
      oracle::Tree u = t;
      u.erase(e);
      u.insert(f);
      if (bound >= 0 && depth + 1 + missing(u) > bound) continue;
      if (std::find(path.begin(), path.end(), u) != path.end()) continue;
      arcs.insert({t, u});
      path.push_back(u);
      walk(u, depth + 1, np2);
      path.pop_back();
    }
  }
};

}  // namespace

TEST_CASE("optimum and count of shortest sequences match breadth-first path counting") {
  for (const auto& inst : small_instances(40, 11, 7)) {
    const int n = inst.n();
    auto oracle_bfs = oracle::bfs(n, to_oracle(inst.t_initial));
    const auto target = to_oracle(inst.t_final);
    auto r = shortest_sequences(inst.t_initial, inst.t_final);
    REQUIRE(r.status == SearchStatus::kFound);
    CHECK(*r.optimum == oracle_bfs.dist.at(target));
    CHECK(r.count == oracle_bfs.paths.at(target));
    CHECK(r.sequences.size() == r.count);
    CHECK(flip_distance_bfs(inst.t_initial, inst.t_final, 1'000'000) == *r.optimum);
    std::set<std::vector<Move>> distinct;
    for (const auto& s : r.sequences) {
      CHECK(s.length() == static_cast<std::size_t>(*r.optimum));
      CHECK(final_tree(s) == inst.t_final);
      distinct.insert(s.moves);
    }
    CHECK(distinct.size() == r.sequences.size());
    const int lb = lower_bound(inst.t_initial, inst.t_final);
    CHECK(lb <= *r.optimum);
    CHECK(lb >= (inst.t_final.bits() - inst.t_initial.bits()).size());
  }
}

TEST_CASE("identical trees have distance zero and one empty sequence") {
  PlaneTree t = random_tree(6, 3);
  auto r = shortest_sequences(t, t);
  CHECK(r.status == SearchStatus::kFound);
  CHECK(*r.optimum == 0);
  CHECK(r.count == 1);
  CHECK(r.sequences.at(0).moves.empty());
  CHECK(flip_distance_bfs(t, t, 10) == 0);
}

TEST_CASE("constrained searches only return sequences meeting the constraint") {
  for (const auto& inst : small_instances(30, 101, 7)) {
    const auto happy = happy_edges(inst.t_initial, inst.t_final);
    auto free = shortest_sequences(inst.t_initial, inst.t_final);
    REQUIRE(free.status == SearchStatus::kFound);

    SearchOptions hull;
    hull.restrict_parking_to_hull = true;
    auto h = shortest_sequences(inst.t_initial, inst.t_final, hull);
    REQUIRE(h.status == SearchStatus::kFound);
    CHECK(*h.optimum >= *free.optimum);
    for (const auto& s : h.sequences) CHECK(hull_parking_only(s, inst.t_initial, inst.t_final));

    SearchOptions fixed;
    fixed.forbid_flipping_happy = true;
    auto f = shortest_sequences(inst.t_initial, inst.t_final, fixed);
    if (f.status == SearchStatus::kFound) {
      CHECK(*f.optimum >= *free.optimum);
      for (const auto& s : f.sequences)
        for (const auto& m : s.moves) CHECK(!happy.contains(m.removed));
    }

    SearchOptions compat;
    compat.compatible_only = true;
    auto c = shortest_sequences(inst.t_initial, inst.t_final, compat);
    REQUIRE(c.status == SearchStatus::kFound);
    CHECK(*c.optimum >= *free.optimum);
    for (const auto& s : c.sequences) {
      auto trees = replay(s);
      for (std::size_t i = 0; i < s.length(); ++i)
        CHECK(is_compatible(classify_flip(trees[i], s.moves[i].removed, s.moves[i].inserted)));
    }

    for (int budget = 0; budget <= 2; ++budget) {
      SearchOptions b;
      b.max_nonperfect = budget;
      auto rb = shortest_sequences(inst.t_initial, inst.t_final, b);
      if (rb.status != SearchStatus::kFound) continue;
      CHECK(*rb.optimum >= *free.optimum);
      for (const auto& s : rb.sequences) CHECK(nonperfect_count(s, inst.t_final) <= static_cast<std::size_t>(budget));
    }
  }
}

TEST_CASE("unconstrained count equals the count of sequences within an unlimited budget filter") {
  for (const auto& inst : small_instances(20, 500, 7)) {
    auto free = shortest_sequences(inst.t_initial, inst.t_final);
    std::size_t best_np = 1000;
    for (const auto& s : free.sequences) best_np = std::min(best_np, nonperfect_count(s, inst.t_final));
    SearchOptions b;
    b.max_nonperfect = static_cast<int>(best_np);
    auto rb = shortest_sequences(inst.t_initial, inst.t_final, b);
    REQUIRE(rb.status == SearchStatus::kFound);
    CHECK(*rb.optimum == *free.optimum);
    std::size_t within = 0;
    for (const auto& s : free.sequences) within += nonperfect_count(s, inst.t_final) <= best_np;
    CHECK(rb.count == within);
  }
}

TEST_CASE("threaded search returns the same sequences in the same order") {
  Instance p = parking12();
  auto one = shortest_sequences(p.t_initial, p.t_final);
  SearchOptions o;
  o.threads = 3;
  auto three = shortest_sequences(p.t_initial, p.t_final, o);
  CHECK(one.count == three.count);
  CHECK(one.sequences == three.sequences);
}

TEST_CASE("sequence cap keeps the optimum and the first sequences") {
  Instance p = parking12();
  auto all = shortest_sequences(p.t_initial, p.t_final);
  REQUIRE(all.count == 20);
  for (unsigned threads : {1u, 2u}) {
    SearchOptions o;
    o.max_sequences = 5;
    o.threads = threads;
    auto capped = shortest_sequences(p.t_initial, p.t_final, o);
    CHECK(capped.status == SearchStatus::kInconclusive);
    REQUIRE(capped.optimum);
    CHECK(*capped.optimum == 8);
    REQUIRE(capped.sequences.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(capped.sequences[i] == all.sequences[i]);
  }
}

TEST_CASE("node cap makes the search inconclusive without an optimum") {
  Instance p = parking12();
  SearchOptions o;
  o.node_cap = 50;
  auto r = shortest_sequences(p.t_initial, p.t_final, o);
  CHECK(r.status == SearchStatus::kInconclusive);
  CHECK(!r.optimum);
  CHECK(r.reason.find("node cap") != std::string::npos);
  CHECK_THROWS_AS(flip_distance_bfs(p.t_initial, p.t_final, 100), CapExceeded);
}

TEST_CASE("max_length bounds the search") {
  Instance p = parking12();
  SearchOptions o;
  o.max_length = 7;
  CHECK(shortest_sequences(p.t_initial, p.t_final, o).status == SearchStatus::kNone);
}

TEST_CASE("diameter matches all-pairs breadth-first search") {
  for (int n = 4; n <= 6; ++n) {
    int expected = 0;
    for (const auto& t : oracle::all_plane_trees(n))
      for (const auto& [u, d] : oracle::bfs(n, t).dist) expected = std::max(expected, d);
    auto r = diameter(n, 1'000'000);
    CHECK(r.diameter == expected);
    CHECK(flip_distance_bfs(r.from, r.to, 1'000'000) == expected);
  }
  CHECK_THROWS_AS(diameter(8, 100), CapExceeded);
}

TEST_CASE("twelve-point slices have 118 nodes / 214 arcs and 67 / 120 with a hull first flip") {
  Instance p = parking12();
  SliceOptions o;
  o.budget = 1;
  auto s = reachable_slice(p.t_initial, p.t_final, o);
  CHECK(s.length_bound == 8);
  CHECK(s.nodes.size() == 118);
  CHECK(s.arcs.size() == 214);
  o.first_flip = FirstFlipFilter::kFirstFlipHull;
  auto h = reachable_slice(p.t_initial, p.t_final, o);
  CHECK(h.nodes.size() == 67);
  CHECK(h.arcs.size() == 120);
  o.perfect = PerfectRule::kInsertOnly;
  o.first_flip = FirstFlipFilter::kNone;
  auto ins = reachable_slice(p.t_initial, p.t_final, o);
  CHECK(ins.nodes.size() == 118);
  CHECK(ins.arcs.size() == 214);
}

TEST_CASE("slice arcs replay and respect the budget") {
  for (const auto& inst : {parking12(), random_instance(7, 4), random_instance(8, 9)}) {
    for (auto bound : {SliceBound::kLengthPruned, SliceBound::kBudgetOnly}) {
      SliceOptions o;
      o.budget = 1;
      o.bound = bound;
      auto s = reachable_slice(inst.t_initial, inst.t_final, o);
      REQUIRE(!s.nodes.empty());
      CHECK(s.nodes[0].tree == inst.t_initial);
      std::set<std::pair<std::size_t, std::size_t>> pairs;
      for (const auto& a : s.arcs) {
        CHECK(apply_flip(s.nodes[a.from].tree, a.move.removed, a.move.inserted) == s.nodes[a.to].tree);
        CHECK(a.perfect == is_perfect_flip(s.target, a.move.removed, a.move.inserted, PerfectRule::kStrict));
        CHECK(a.kind == classify_flip(s.nodes[a.from].tree, a.move.removed, a.move.inserted));
        CHECK(pairs.insert({a.from, a.to}).second);
      }
      for (const auto& node : s.nodes) {
        CHECK(node.min_nonperfect <= 1);
        CHECK(s.find(node.key).has_value());
        if (bound == SliceBound::kLengthPruned)
          CHECK(node.min_depth + (s.target - node.tree.bits()).size() <= s.length_bound);
      }
      auto again = reachable_slice(inst.t_initial, inst.t_final, o);
      REQUIRE(again.nodes.size() == s.nodes.size());
      for (std::size_t i = 0; i < s.nodes.size(); ++i) CHECK(again.nodes[i].key == s.nodes[i].key);
    }
  }
}

TEST_CASE("slice nodes and arcs match brute-force simple-path enumeration") {
  for (const auto& inst : small_instances(15, 900, 6)) {
    for (int budget : {0, 1}) {
      for (bool hull_first : {false, true}) {
        for (auto bound : {SliceBound::kLengthPruned, SliceBound::kBudgetOnly}) {
          SliceOptions o;
          o.budget = budget;
          o.bound = bound;
          o.first_flip = hull_first ? FirstFlipFilter::kFirstFlipHull : FirstFlipFilter::kNone;
          auto s = reachable_slice(inst.t_initial, inst.t_final, o);
          PathSlice ps{inst.n(), to_oracle(inst.t_final), budget,
                       bound == SliceBound::kLengthPruned ? s.length_bound : -1, hull_first, {}, {}, {}};
          ps.path.push_back(to_oracle(inst.t_initial));
          ps.walk(to_oracle(inst.t_initial), 0, 0);
          std::set<oracle::Tree> got;
          for (const auto& node : s.nodes) got.insert(to_oracle(node.tree));
          CHECK(got == ps.nodes);
          std::set<std::pair<oracle::Tree, oracle::Tree>> got_arcs;
          for (const auto& a : s.arcs) got_arcs.insert({to_oracle(s.nodes[a.from].tree), to_oracle(s.nodes[a.to].tree)});
          CHECK(got_arcs == ps.arcs);
        }
      }
    }
  }
}

TEST_CASE("slice length bound is the optimum within the budget") {
  Instance p = parking12();
  SliceOptions o;
  o.budget = 0;
  auto s = reachable_slice(p.t_initial, p.t_final, o);
  // No sequence fits a zero budget: the first flip must park.
  CHECK(s.length_bound == 7);
  for (const auto& node : s.nodes) CHECK(!(node.tree == p.t_final));
  CHECK(s.nodes.size() == 1);
  CHECK_THROWS_AS(reachable_slice(p.t_initial, p.t_final, SliceOptions{-1}), Error);
  SliceOptions tiny;
  tiny.node_cap = 10;
  CHECK_THROWS_AS(reachable_slice(p.t_initial, p.t_final, tiny), CapExceeded);
  SliceOptions few_paths;
  few_paths.path_cap = 100;
  CHECK_THROWS_AS(reachable_slice(p.t_initial, p.t_final, few_paths), CapExceeded);
}

TEST_CASE("perfect flip rules") {
  ChordSet target;
  target.insert(Chord(0, 2));
  target.insert(Chord(1, 3));
  CHECK(is_perfect_flip(target, Chord(0, 1), Chord(0, 2), PerfectRule::kStrict));
  CHECK(!is_perfect_flip(target, Chord(1, 3), Chord(0, 2), PerfectRule::kStrict));
  CHECK(is_perfect_flip(target, Chord(1, 3), Chord(0, 2), PerfectRule::kInsertOnly));
  CHECK(!is_perfect_flip(target, Chord(0, 1), Chord(0, 3), PerfectRule::kInsertOnly));
}

TEST_CASE("first-flip filter names round trip") {
  for (auto f : {FirstFlipFilter::kNone, FirstFlipFilter::kFirstFlipHull, FirstFlipFilter::kFirstNonperfectHull})
    CHECK(first_flip_filter_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(first_flip_filter_from_string("sideways"), Error);
}
