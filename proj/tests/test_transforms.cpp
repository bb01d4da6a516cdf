#include <doctest.h>

#include "support.hpp"
#include "treeflip/instances.hpp"
#include "treeflip/search.hpp"
#include "treeflip/transforms.hpp"

using namespace treeflip;

namespace {

// Every intermediate tree is a plane spanning tree by the coordinate oracle.
bool all_trees_plane(const FlipSequence& s) {
  for (const auto& t : replay(s))
    if (!oracle::is_plane_tree(t.n(), to_oracle(t))) return false;
  return true;
}

std::map<Chord, std::vector<Chord>> traces(const FlipSequence& s) {
  std::map<Chord, std::vector<Chord>> out;
  for (const auto& c : s.start.chords()) out[c] = trace(s, c);
  return out;
}

// Every inserted chord outside both end trees is a hull edge.
bool parks_on_hull_only(const FlipSequence& s) {
  const int n = s.start.n();
  const PlaneTree last = final_tree(s);
  for (const auto& m : s.moves)
    if (!s.start.contains(m.inserted) && !last.contains(m.inserted) && !is_hull_edge(n, m.inserted)) return false;
  return true;
}

struct Harvest {
  std::vector<std::pair<FlipSequence, Chord>> compatible, crossing, uncrossed;
};

// Chains of trace length 2 with a diagonal middle, and start chords never crossed.
Harvest harvest(int walks) {
  Harvest h;
  for (int i = 0; i < walks; ++i) {
    auto s = random_walk(5 + i % 4, 4242 + static_cast<uint64_t>(i), 4 + i % 7);
    const int n = s.start.n();
    auto trees = replay(s);
    for (const auto& ch : chain_decomposition(s)) {
      if (ch.length() == 2 && !is_hull_edge(n, ch.links[1])) {
        bool compat = !chords_cross(ch.links[0], ch.links[1]) || !chords_cross(ch.links[1], ch.links[2]);
        (compat ? h.compatible : h.crossing).push_back({s, ch.root});
      }
      if (ch.length() >= 1) {
        bool crossed = false;
        for (const auto& t : trees)
          for (const auto& c : t.chords()) crossed = crossed || chords_cross(c, ch.root);
        if (!crossed) h.uncrossed.push_back({s, ch.root});
      }
    }
  }
  return h;
}

const Harvest& harvested() {
  static const Harvest h = harvest(800);
  return h;
}

}  // namespace

TEST_CASE("harvest finds every kind of chain") {
  CHECK(harvested().compatible.size() > 10);
  CHECK(harvested().crossing.size() > 10);
  CHECK(harvested().uncrossed.size() > 10);
}

TEST_CASE("relocation moves a compatible diagonal park to the hull") {
  for (const auto& [s, root] : harvested().compatible) {
    const int n = s.start.n();
    auto before = trace(s, root);
    auto out = relocate_parking_to_hull(s, root);
    REQUIRE(all_trees_plane(out.sequence));
    CHECK(out.sequence.start == s.start);
    CHECK(final_tree(out.sequence) == final_tree(s));
    CHECK(out.changed_chain == root);
    auto after = trace(out.sequence, root);
    CHECK(after.front() == before.front());
    CHECK(after.back() == before.back());
    if (out.length_delta == 0) {
      REQUIRE(after.size() == 3);
      CHECK(is_hull_edge(n, after[1]));
      CHECK(!out.shortened);
    } else {
      // The hull edge found was the chain's own end, so the park disappears.
      CHECK(out.length_delta == -1);
      CHECK(out.shortened);
      CHECK(after.size() == 2);
      CHECK(is_hull_edge(n, after[1]));
    }
    CHECK(out.sequence.length() == s.length() + out.length_delta);
    auto old_traces = traces(s), new_traces = traces(out.sequence);
    for (const auto& [c, tr] : old_traces)
      if (!(c == root)) CHECK(new_traces.at(c) == tr);
    CHECK(out.other_traces_unchanged());
  }
}

TEST_CASE("splitting replaces a crossing diagonal park by two hull parks") {
  for (const auto& [s, root] : harvested().crossing) {
    const int n = s.start.n();
    auto before = trace(s, root);
    auto out = split_diagonal_parking(s, root);
    REQUIRE(all_trees_plane(out.sequence));
    CHECK(final_tree(out.sequence) == final_tree(s));
    CHECK(out.length_delta == 1);
    auto after = trace(out.sequence, root);
    REQUIRE(after.size() == 4);
    CHECK(after[0] == before[0]);
    CHECK(after[3] == before[2]);
    CHECK(is_hull_edge(n, after[1]));
    CHECK(is_hull_edge(n, after[2]));
    auto old_traces = traces(s), new_traces = traces(out.sequence);
    for (const auto& [c, tr] : old_traces)
      if (!(c == root)) CHECK(new_traces.at(c) == tr);
  }
}

TEST_CASE("normalization flips an uncrossed start chord at most once") {
  for (const auto& [s, root] : harvested().uncrossed) {
    auto out = normalize(s, root);
    REQUIRE(all_trees_plane(out.sequence));
    CHECK(out.sequence.start == s.start);
    CHECK(final_tree(out.sequence) == final_tree(s));
    CHECK(trace_length(out.sequence, root) <= 1);
    CHECK(out.length_delta <= 0);
  }
}

TEST_CASE("normalization of a chord parked twice") {
  PlaneTree t = PlaneTree::from_chords(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  FlipSequence s{t, {{{0, 1}, {0, 2}}, {{0, 2}, {0, 3}}}};
  auto out = normalize(s, Chord(0, 1));
  CHECK(out.sequence.length() == 1);
  CHECK(out.length_delta == -1);
  CHECK(out.shortened);
  CHECK(to_string(out.sequence) == "0-1>0-3");
}

TEST_CASE("rewrites reject chains that do not fit") {
  Instance ex = trace_example();
  FlipSequence seq = ex.sequence();
  // 2-5 has trace length 3, 4-5 has length 1, 0-1 is never flipped.
  CHECK_THROWS_AS(parking_link(seq, Chord(2, 5)), RewriteError);
  CHECK_THROWS_AS(parking_link(seq, Chord(4, 5)), RewriteError);
  CHECK_THROWS_AS(parking_link(seq, Chord(0, 1)), RewriteError);
  CHECK_THROWS_AS(normalize(seq, Chord(1, 3)), RewriteError);
  // 2-5 is crossed by 0-4 right after its own flip.
  CHECK_THROWS_AS(normalize(seq, Chord(2, 5)), RewriteError);
  CHECK_THROWS_AS(relocate_parking_to_hull(seq, ParkingLink{2, 1}), RewriteError);

  const auto& [cs, croot] = harvested().crossing.front();
  CHECK_THROWS_AS(relocate_parking_to_hull(cs, croot), RewriteError);
  const auto& [ps, proot] = harvested().compatible.front();
  CHECK_THROWS_AS(split_diagonal_parking(ps, proot), RewriteError);
}

TEST_CASE("parking link indices point at the park and its removal") {
  const auto& [s, root] = harvested().compatible.front();
  auto link = parking_link(s, root);
  auto tr = trace(s, root);
  CHECK(s.moves[link.insert_index].removed == tr[0]);
  CHECK(s.moves[link.insert_index].inserted == tr[1]);
  CHECK(s.moves[link.remove_index].removed == tr[1]);
  CHECK(s.moves[link.remove_index].inserted == tr[2]);
}

TEST_CASE("eliminating the diagonal park of the twelve-point sequence costs one flip") {
  Instance p = parking12();
  FlipSequence seq = p.sequence();
  auto out = eliminate_diagonal_parking(seq);
  CHECK(all_trees_plane(out.sequence));
  CHECK(final_tree(out.sequence) == p.t_final);
  CHECK(out.sequence.length() == 9);
  CHECK(out.length_delta == 1);
  CHECK(parks_on_hull_only(out.sequence));
  CHECK(hull_parking_only(out.sequence, p.t_initial, p.t_final));
  // Nine is optimal under the hull restriction.
  SearchOptions o;
  o.restrict_parking_to_hull = true;
  o.max_sequences = 1;
  CHECK(*shortest_sequences(p.t_initial, p.t_final, o).optimum == 9);
}

TEST_CASE("eliminating diagonal parks on random walks") {
  for (int i = 0; i < 150; ++i) {
    auto s = random_walk(5 + i % 4, 99 + static_cast<uint64_t>(i), 3 + i % 8);
    auto out = eliminate_diagonal_parking(s);
    CHECK(all_trees_plane(out.sequence));
    CHECK(final_tree(out.sequence) == final_tree(s));
    CHECK(parks_on_hull_only(out.sequence));
    CHECK(hull_parking_only(out.sequence, out.sequence.start, final_tree(out.sequence)));
    auto again = eliminate_diagonal_parking(out.sequence);
    CHECK(again.sequence == out.sequence);
    CHECK(again.length_delta == 0);
  }
}

TEST_CASE("reparking conditions on the 22-point instance") {
  Instance r = reparking22();
  FlipSequence seq = r.sequence();
  bool found = false;
  for (const auto& ch : chain_decomposition(seq)) {
    if (ch.length() != 3) {
      CHECK_THROWS_AS(check_reparking_conditions(seq, ch.root), RewriteError);
      continue;
    }
    found = true;
    auto c = check_reparking_conditions(seq, ch.root);
    CHECK(c.e == ch.links[0]);
    CHECK(c.e3 == ch.links[3]);
    CHECK(c.ends_are_diagonals == (!is_hull_edge(22, c.e) && !is_hull_edge(22, c.e3)));
    CHECK(c.e_crosses_e1 == oracle::segments_cross(22, {c.e.a, c.e.b}, {c.e1.a, c.e1.b}));
    CHECK(c.e1_crosses_e2 == oracle::segments_cross(22, {c.e1.a, c.e1.b}, {c.e2.a, c.e2.b}));
    CHECK(c.e2_crosses_e3 == oracle::segments_cross(22, {c.e2.a, c.e2.b}, {c.e3.a, c.e3.b}));
    CHECK(c.all());
  }
  CHECK(found);
}
