#pragma once

#include <map>
#include <optional>
#include <string>

#include "treeflip/instances.hpp"
#include "treeflip/search.hpp"

namespace treeflip {

enum class VerdictStatus { kHolds, kRefuted, kInconclusive };

std::string to_string(VerdictStatus s);

struct Caps {
  std::size_t max_sequences = 100000;
  uint64_t node_cap = 500'000'000ull;
  int max_length = 64;
};

struct Verdict {
  std::string property;
  VerdictStatus status = VerdictStatus::kInconclusive;
  /// A shortest sequence with the property, when it holds.
  std::optional<FlipSequence> witness;
  /// Number of shortest sequences examined; all of them on a refutation.
  uint64_t examined = 0;
  std::optional<int> optimum;
  /// Property-specific measure, e.g. the least maximum trace length.
  std::optional<int> value;
  std::string note;
};

/// Some shortest sequence never flips a happy edge.
Verdict check_happy_property(const Instance& inst, const Caps& caps = {});
/// Some shortest sequence parks only on hull edges.
Verdict check_parking_property(const Instance& inst, const Caps& caps = {});
/// Some shortest sequence has every trace length at most 2. value = least max trace length.
Verdict check_reparking_property(const Instance& inst, const Caps& caps = {});
/// Some shortest sequence in which every non-final flip removes a chord crossed later.
Verdict final_flip_property_check(const Instance& inst, const Caps& caps = {});
/// Some shortest sequence flips every hull edge of the start tree at most once.
Verdict check_hull_once_property(const Instance& inst, const Caps& caps = {});
/// Over compatible-only sequences: some shortest one has every trace length at most 2.
Verdict check_compatible_reparking(const Instance& inst, const Caps& caps = {});

enum class Fixedness { kStronglyFixed, kWeaklyFixed, kNeither };

std::string to_string(Fixedness f);

struct FixednessReport {
  bool conclusive = false;
  uint64_t examined = 0;
  std::map<Chord, Fixedness> edges;
  std::string note;
};

FixednessReport classify_fixedness(const Instance& inst, const Caps& caps = {});

/// Human-readable one-line summary and a JSON document mirroring the verdict.
std::string describe(const Verdict& v);
std::string verdict_json(const Verdict& v);

}  // namespace treeflip
