#include "treeflip/conjecture_lab.hpp"

#include <functional>
#include <sstream>

#include <json.hpp>

namespace treeflip {

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kHolds: return "holds-on-instance";
    case VerdictStatus::kRefuted: return "refuted-on-instance";
    case VerdictStatus::kInconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Fixedness f) {
  switch (f) {
    case Fixedness::kStronglyFixed: return "strongly-fixed";
    case Fixedness::kWeaklyFixed: return "weakly-fixed";
    case Fixedness::kNeither: return "neither";
  }
  return "?";
}

namespace {

SearchOptions options_for(const Caps& caps) {
  SearchOptions o;
  o.max_sequences = caps.max_sequences;
  o.node_cap = caps.node_cap;
  o.max_length = caps.max_length;
  return o;
}

std::size_t max_trace(const FlipSequence& seq) {
  std::size_t m = 0;
  for (const auto& ch : chain_decomposition(seq)) m = std::max(m, ch.length());
  return m;
}

// Scans every shortest sequence; holds iff some sequence satisfies pred.
Verdict scan(const std::string& property, const Instance& inst, const SearchOptions& opts,
             const std::function<bool(const FlipSequence&)>& pred) {
  Verdict v;
  v.property = property;
  auto r = shortest_sequences(inst.t_initial, inst.t_final, opts);
  v.optimum = r.optimum;
  if (r.status != SearchStatus::kFound) {
    v.status = VerdictStatus::kInconclusive;
    v.note = r.reason.empty() ? "no sequence found" : r.reason;
    return v;
  }
  v.examined = r.count;
  for (const auto& s : r.sequences)
    if (pred(s)) {
      v.status = VerdictStatus::kHolds;
      v.witness = s;
      return v;
    }
  v.status = VerdictStatus::kRefuted;
  return v;
}

}  // namespace

Verdict check_happy_property(const Instance& inst, const Caps& caps) {
  const ChordSet happy = happy_edges(inst.t_initial, inst.t_final);
  return scan("happy", inst, options_for(caps), [&](const FlipSequence& s) {
    for (const auto& m : s.moves)
      if (happy.contains(m.removed)) return false;
    return true;
  });
}

Verdict check_parking_property(const Instance& inst, const Caps& caps) {
  return scan("parking", inst, options_for(caps), [&](const FlipSequence& s) {
    return hull_parking_only(s, inst.t_initial, inst.t_final);
  });
}

Verdict check_reparking_property(const Instance& inst, const Caps& caps) {
  Verdict v;
  v.property = "reparking";
  auto r = shortest_sequences(inst.t_initial, inst.t_final, options_for(caps));
  v.optimum = r.optimum;
  if (r.status != SearchStatus::kFound) {
    v.note = r.reason.empty() ? "no sequence found" : r.reason;
    return v;
  }
  v.examined = r.count;
  const FlipSequence* best = nullptr;
  std::size_t least = 0;
  for (const auto& s : r.sequences) {
    std::size_t m = max_trace(s);
    if (!best || m < least) {
      best = &s;
      least = m;
    }
  }
  v.value = static_cast<int>(least);
  v.status = least <= 2 ? VerdictStatus::kHolds : VerdictStatus::kRefuted;
  if (v.status == VerdictStatus::kHolds) v.witness = *best;
  return v;
}

Verdict final_flip_property_check(const Instance& inst, const Caps& caps) {
  return scan("final-flip", inst, options_for(caps),
              [](const FlipSequence& s) { return uncrossed_nonfinal_flips(s).empty(); });
}

Verdict check_hull_once_property(const Instance& inst, const Caps& caps) {
  const int n = inst.n();
  return scan("hull-once", inst, options_for(caps), [&](const FlipSequence& s) {
    for (const auto& ch : chain_decomposition(s))
      if (is_hull_edge(n, ch.root) && ch.length() > 1) return false;
    return true;
  });
}

Verdict check_compatible_reparking(const Instance& inst, const Caps& caps) {
  auto opts = options_for(caps);
  opts.compatible_only = true;
  auto v = scan("compatible-reparking", inst, opts,
                [](const FlipSequence& s) { return max_trace(s) <= 2; });
  v.note = "shortest among compatible-only sequences" + (v.note.empty() ? "" : "; " + v.note);
  return v;
}

FixednessReport classify_fixedness(const Instance& inst, const Caps& caps) {
  FixednessReport rep;
  auto r = shortest_sequences(inst.t_initial, inst.t_final, options_for(caps));
  if (r.status != SearchStatus::kFound) {
    rep.note = r.reason.empty() ? "no sequence found" : r.reason;
    return rep;
  }
  rep.conclusive = true;
  rep.examined = r.count;
  const ChordSet happy = happy_edges(inst.t_initial, inst.t_final);
  std::map<Chord, uint64_t> fixed_in;
  happy.for_each([&](const Chord& c) { fixed_in[c] = 0; });
  for (const auto& s : r.sequences) {
    ChordSet touched;
    for (const auto& m : s.moves) touched.insert(m.removed);
    for (auto& [c, count] : fixed_in)
      if (!touched.contains(c)) ++count;
  }
  for (const auto& [c, count] : fixed_in)
    rep.edges[c] = count == r.count ? Fixedness::kStronglyFixed
                   : count > 0      ? Fixedness::kWeaklyFixed
                                    : Fixedness::kNeither;
  return rep;
}

std::string describe(const Verdict& v) {
  std::ostringstream os;
  os << v.property << ": " << to_string(v.status);
  if (v.optimum) os << ", optimum " << *v.optimum;
  os << ", examined " << v.examined;
  if (v.value) os << ", value " << *v.value;
  if (!v.note.empty()) os << " (" << v.note << ")";
  return os.str();
}

std::string verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["property"] = v.property;
  j["status"] = to_string(v.status);
  j["examined"] = v.examined;
  j["optimum"] = v.optimum ? nlohmann::ordered_json(*v.optimum) : nullptr;
  j["value"] = v.value ? nlohmann::ordered_json(*v.value) : nullptr;
  j["witness"] = v.witness ? nlohmann::ordered_json(to_string(*v.witness)) : nullptr;
  j["note"] = v.note;
  return j.dump();
}

}  // namespace treeflip
