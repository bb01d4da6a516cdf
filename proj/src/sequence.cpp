#include "treeflip/sequence.hpp"

#include <sstream>
#include <unordered_map>

namespace treeflip {

std::vector<PlaneTree> replay(const FlipSequence& seq) {
  std::vector<PlaneTree> trees;
  trees.reserve(seq.moves.size() + 1);
  trees.push_back(seq.start);
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    try {
      trees.push_back(apply_flip(trees.back(), seq.moves[i].removed, seq.moves[i].inserted));
    } catch (const InvalidTree& err) {
      throw ReplayError(i, err.violation(), err.what());
    }
  }
  return trees;
}

PlaneTree final_tree(const FlipSequence& seq) { return replay(seq).back(); }

std::vector<Chain> chain_decomposition(const FlipSequence& seq) {
  (void)replay(seq);
  std::vector<Chain> chains;
  std::unordered_map<int, std::size_t> open;  // tip chord id -> chain index
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    const auto& [x, y] = seq.moves[i];
    std::size_t c;
    if (auto it = open.find(x.id()); it != open.end()) {
      c = it->second;
      open.erase(it);
    } else {
      c = chains.size();
      chains.push_back({x, {x}, {}});
    }
    chains[c].links.push_back(y);
    chains[c].flip_indices.push_back(i);
    open[y.id()] = c;
  }
  return chains;
}

std::vector<Chord> trace(const FlipSequence& seq, const Chord& e) {
  if (!seq.start.contains(e)) throw Error("chord " + e.str() + " is not in the start tree");
  for (const auto& ch : chain_decomposition(seq))
    if (ch.root == e) return ch.links;
  return {e};
}

std::size_t trace_length(const FlipSequence& seq, const Chord& e) { return trace(seq, e).size() - 1; }

ChordSet happy_edges(const PlaneTree& ti, const PlaneTree& tf) {
  if (ti.n() != tf.n())
    throw InvalidTree(Violation::kSizeMismatch, "trees on different point counts: " +
                                                    std::to_string(ti.n()) + " vs " +
                                                    std::to_string(tf.n()));
  return ti.bits() & tf.bits();
}

namespace {

void require_ends_at(const std::vector<PlaneTree>& trees, const PlaneTree& tf) {
  if (!(trees.back() == tf)) throw Error("sequence does not end at the given final tree");
}

}  // namespace

ChordSet parking_edges(const FlipSequence& seq, const PlaneTree& tf) {
  auto trees = replay(seq);
  require_ends_at(trees, tf);
  ChordSet seen;
  for (const auto& t : trees) seen = seen | t.bits();
  return seen - seq.start.bits() - tf.bits();
}

bool is_final_flip(const FlipSequence& seq, std::size_t i) {
  if (i >= seq.moves.size())
    throw Error("move index " + std::to_string(i) + " out of range (length " +
                std::to_string(seq.moves.size()) + ")");
  const Chord& f = seq.moves[i].inserted;
  for (std::size_t j = i + 1; j < seq.moves.size(); ++j)
    if (seq.moves[j].removed == f) return false;
  return true;
}

std::size_t nonperfect_count(const FlipSequence& seq, const PlaneTree& tf) {
  std::size_t c = 0;
  for (const auto& m : seq.moves)
    if (!tf.contains(m.inserted)) ++c;
  return c;
}

bool hull_parking_only(const FlipSequence& seq, const PlaneTree& ti, const PlaneTree& tf) {
  auto trees = replay(seq);
  if (!(trees.front() == ti)) throw Error("sequence does not start at the given initial tree");
  require_ends_at(trees, tf);
  ChordSet allowed = ti.bits() | tf.bits() | hull_edges(ti.n());
  for (const auto& t : trees)
    if (!(t.bits() - allowed).empty()) return false;
  return true;
}

FlipSequence reverse_sequence(const FlipSequence& seq) {
  FlipSequence rev{final_tree(seq), {}};
  rev.moves.reserve(seq.moves.size());
  for (auto it = seq.moves.rbegin(); it != seq.moves.rend(); ++it)
    rev.moves.push_back({it->inserted, it->removed});
  return rev;
}

std::vector<std::size_t> uncrossed_nonfinal_flips(const FlipSequence& seq) {
  auto trees = replay(seq);
  // later[i]: union of chords of trees i..k
  std::vector<ChordSet> later(trees.size());
  later.back() = trees.back().bits();
  for (std::size_t i = trees.size() - 1; i-- > 0;) later[i] = later[i + 1] | trees[i].bits();
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < seq.moves.size(); ++i) {
    if (is_final_flip(seq, i)) continue;
    if (crossing_mask(seq.moves[i].removed).count_common(later[i + 1]) == 0) bad.push_back(i);
  }
  return bad;
}

SequenceReport analyze(const FlipSequence& seq, const PlaneTree& tf) {
  SequenceReport r;
  r.length = seq.moves.size();
  r.happy = happy_edges(seq.start, tf);
  r.parking = parking_edges(seq, tf);
  for (const auto& c : seq.start.chords()) r.trace_lengths[c] = 0;
  for (const auto& ch : chain_decomposition(seq)) {
    // Chains are rooted at start edges; a chord re-inserted into its own root
    // position still belongs to the chain that reached it.
    r.trace_lengths[ch.root] = ch.length();
    r.max_trace_length = std::max(r.max_trace_length, ch.length());
  }
  r.happy.for_each([&](const Chord& c) {
    if (r.trace_lengths[c] == 0) r.fixed.insert(c);
  });
  r.nonperfect = nonperfect_count(seq, tf);
  r.hull_parking_only = hull_parking_only(seq, seq.start, tf);
  return r;
}

std::string to_string(const FlipSequence& seq) {
  std::ostringstream os;
  for (std::size_t i = 0; i < seq.moves.size(); ++i)
    os << (i ? " " : "") << seq.moves[i].removed.str() << ">" << seq.moves[i].inserted.str();
  return os.str();
}

}  // namespace treeflip
