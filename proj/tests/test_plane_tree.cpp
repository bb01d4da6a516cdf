#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "treeflip/plane_tree.hpp"

using namespace treeflip;

TEST_CASE("chords are stored with a < b and get dense ids") {
  Chord c(5, 2);
  CHECK(c.a == 2);
  CHECK(c.b == 5);
  std::set<int> ids;
  for (int b = 1; b < kMaxPoints; ++b)
    for (int a = 0; a < b; ++a) {
      Chord d(a, b);
      CHECK(Chord::from_id(d.id()) == d);
      ids.insert(d.id());
    }
  CHECK(ids.size() == static_cast<std::size_t>(kMaxChords));
  CHECK(*ids.rbegin() == kMaxChords - 1);
}

TEST_CASE("crossing test agrees with segment geometry") {
  for (int n : {4, 7, 12}) {
    auto edges = oracle::all_edges(n);
    for (auto e : edges)
      for (auto f : edges) {
        bool expected = oracle::segments_cross(n, e, f);
        CHECK(chords_cross(Chord(e.first, e.second), Chord(f.first, f.second)) == expected);
        CHECK(crossing_mask(Chord(e.first, e.second)).contains(Chord(f.first, f.second)) == expected);
      }
  }
}

TEST_CASE("hull edges") {
  CHECK(is_hull_edge(6, Chord(0, 1)));
  CHECK(is_hull_edge(6, Chord(0, 5)));
  CHECK(!is_hull_edge(6, Chord(0, 2)));
  CHECK(hull_edges(6).size() == 6);
  CHECK_THROWS_AS(is_hull_edge_checked(6, Chord(0, 6)), Error);
}

TEST_CASE("enumeration matches brute-force filtering of all spanning trees") {
  for (int n = 3; n <= 6; ++n) {
    auto expected = oracle::all_plane_trees(n);
    auto trees = enumerate_all_trees(n, 1'000'000);
    std::set<oracle::Tree> got;
    for (const auto& t : trees) got.insert(to_oracle(t));
    CHECK(got.size() == trees.size());
    CHECK(got == std::set<oracle::Tree>(expected.begin(), expected.end()));
    CHECK(count_plane_trees(n) == expected.size());
  }
}

TEST_CASE("enumeration counts for n = 3..6 are 3, 12, 55, 273") {
  CHECK(enumerate_all_trees(3, 100).size() == 3);
  CHECK(enumerate_all_trees(4, 100).size() == 12);
  CHECK(enumerate_all_trees(5, 100).size() == 55);
  CHECK(enumerate_all_trees(6, 1000).size() == 273);
}

TEST_CASE("closed-form count agrees with enumeration up to n = 9") {
  for (int n = 3; n <= 9; ++n) CHECK(count_plane_trees(n) == enumerate_all_trees(n, 10'000'000).size());
  CHECK_THROWS_AS(enumerate_all_trees(9, 1000), Error);
}

TEST_CASE("legal flips agree with brute force and kinds follow the definitions") {
  for (int n = 4; n <= 6; ++n)
    for (const auto& t : enumerate_all_trees(n, 1'000'000)) {
      auto expected = oracle::flips(n, to_oracle(t));
      auto got = legal_flips(t);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        const auto& m = got[i];
        CHECK(std::make_pair(oracle::Edge{m.removed.a, m.removed.b}, oracle::Edge{m.inserted.a, m.inserted.b}) ==
              expected[i]);
        const bool cross = oracle::segments_cross(n, expected[i].first, expected[i].second);
        FlipKind want = FlipKind::kCompatible;
        if (cross) {
          want = FlipKind::kCrossing;
        } else if (m.removed.shares_endpoint(m.inserted)) {
          // Rotation uv -> uw is a slide when vw is in the tree.
          int u = m.removed.has_endpoint(m.inserted.a) ? m.inserted.a : m.inserted.b;
          int v = m.removed.a == u ? m.removed.b : m.removed.a;
          int w = m.inserted.a == u ? m.inserted.b : m.inserted.a;
          want = t.contains(Chord(v, w)) ? FlipKind::kSlide : FlipKind::kRotation;
        }
        CHECK(m.kind == want);
        CHECK(classify_flip(t, m.removed, m.inserted) == want);
        PlaneTree next = apply_flip(t, m);
        CHECK(oracle::is_plane_tree(n, to_oracle(next)));
      }
    }
}

TEST_CASE("flip graph is symmetric") {
  for (const auto& t : enumerate_all_trees(6, 1000))
    for (const auto& m : legal_flips(t)) {
      PlaneTree u = apply_flip(t, m);
      auto back = legal_flips(u);
      CHECK(std::find(back.begin(), back.end(), FlipMove{m.inserted, m.removed}) != back.end());
    }
}

TEST_CASE("validation names the violated invariant") {
  SUBCASE("crossing pair") {
    auto v = validate_tree({{0, 2}, {1, 3}, {0, 1}}, 4);
    CHECK(v.violation == Violation::kCrossing);
    REQUIRE(v.crossing_pair);
    CHECK(v.crossing_pair->first == Chord(0, 2));
    CHECK(v.crossing_pair->second == Chord(1, 3));
    CHECK(v.message.find("crossing pair (0-2)x(1-3)") != std::string::npos);
  }
  SUBCASE("cycle") {
    auto v = validate_tree({{0, 1}, {1, 2}, {0, 2}}, 4);
    CHECK(v.violation == Violation::kCycle);
  }
  SUBCASE("count") { CHECK(validate_tree({{0, 1}, {1, 2}}, 4).violation == Violation::kCount); }
  SUBCASE("duplicate") { CHECK(validate_tree({{0, 1}, {1, 0}, {1, 2}}, 4).violation == Violation::kDuplicate); }
  SUBCASE("label range") { CHECK(validate_tree({{0, 1}, {1, 2}, {2, 4}}, 4).violation == Violation::kLabelOutOfRange); }
  SUBCASE("n range") { CHECK(validate_tree({}, 2).violation == Violation::kLabelOutOfRange); }
  SUBCASE("valid") {
    auto v = validate_tree({{0, 1}, {1, 2}, {2, 3}}, 4);
    CHECK(v.ok());
    CHECK_THROWS_AS(PlaneTree::from_chords(4, {{0, 2}, {1, 3}, {0, 1}}), InvalidTree);
  }
}

TEST_CASE("illegal flips are rejected with a reason") {
  PlaneTree t = PlaneTree::from_chords(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto violation = [&](Chord r, Chord i) {
    try {
      apply_flip(t, r, i);
    } catch (const InvalidTree& err) {
      return std::make_pair(err.violation(), std::string(err.what()));
    }
    return std::make_pair(Violation::kNone, std::string());
  };
  CHECK(violation({0, 1}, {0, 1}).first == Violation::kSameChord);
  CHECK(violation({0, 2}, {0, 3}).first == Violation::kRemovedAbsent);
  auto present = violation({0, 1}, {1, 2});
  CHECK(present.first == Violation::kInsertedPresent);
  CHECK(present.second.find("inserted already present") != std::string::npos);
  CHECK(violation({3, 4}, {1, 3}).first == Violation::kCycle);
  PlaneTree u = PlaneTree::from_chords(5, {{0, 1}, {1, 3}, {1, 2}, {3, 4}});
  try {
    apply_flip(u, Chord(0, 1), Chord(0, 2));
    FAIL("expected a crossing");
  } catch (const InvalidTree& err) {
    CHECK(err.violation() == Violation::kCrossing);
    CHECK(std::string(err.what()).find("crossing pair (0-2)x(1-3)") != std::string::npos);
  }
  CHECK(violation({0, 1}, {1, 3}).first == Violation::kCycle);
  CHECK_THROWS_AS(apply_flip(t, Chord(0, 1), Chord(0, 7)), Error);
}

TEST_CASE("canonical keys round trip and reject garbage") {
  for (const auto& t : enumerate_all_trees(6, 1000)) CHECK(tree_from_key(6, canonical_key(t)) == t);
  PlaneTree t = PlaneTree::from_chords(4, {{2, 3}, {0, 1}, {1, 2}});
  CHECK(canonical_key(t) == "0-1.1-2.2-3");
  CHECK(t.str() == "{0-1 1-2 2-3}");
  CHECK_THROWS_AS(tree_from_key(4, "0-1.1-x.2-3"), Error);
  CHECK_THROWS_AS(tree_from_key(4, ""), Error);
  CHECK_THROWS_AS(tree_from_key(4, "0-2.1-3.0-1"), InvalidTree);
}

TEST_CASE("move generation on raw sets matches legal_flips") {
  std::mt19937 rng(7);
  auto trees = enumerate_all_trees(7, 100000);
  for (int i = 0; i < 50; ++i) {
    const auto& t = trees[rng() % trees.size()];
    std::vector<std::pair<Chord, Chord>> raw;
    legal_moves_raw(7, t.bits(), raw);
    auto flips = legal_flips(t);
    REQUIRE(raw.size() == flips.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
      CHECK(raw[j].first == flips[j].removed);
      CHECK(raw[j].second == flips[j].inserted);
      CHECK(classify_raw(t.bits(), raw[j].first, raw[j].second) == flips[j].kind);
    }
  }
}
