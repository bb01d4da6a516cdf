#pragma once

#include <vector>

#include "oracle.hpp"
#include "treeflip/plane_tree.hpp"

inline oracle::Tree to_oracle(const treeflip::PlaneTree& t) {
  oracle::Tree out;
  for (const auto& c : t.chords()) out.insert({c.a, c.b});
  return out;
}

inline treeflip::PlaneTree from_oracle(int n, const oracle::Tree& t) {
  std::vector<treeflip::Chord> cs;
  for (auto [a, b] : t) cs.emplace_back(a, b);
  return treeflip::PlaneTree::from_chords(n, cs);
}

#include <random>

#include "treeflip/instances.hpp"
#include "treeflip/sequence.hpp"

// Uniformly chosen legal flips from a random start tree.
inline treeflip::FlipSequence random_walk(int n, uint64_t seed, int steps) {
  std::mt19937_64 rng(seed);
  treeflip::FlipSequence s{treeflip::random_tree(n, seed), {}};
  treeflip::PlaneTree cur = s.start;
  for (int i = 0; i < steps; ++i) {
    auto flips = treeflip::legal_flips(cur);
    const auto& m = flips[rng() % flips.size()];
    cur = treeflip::apply_flip(cur, m);
    s.moves.push_back({m.removed, m.inserted});
  }
  return s;
}
