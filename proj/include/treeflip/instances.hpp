#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treeflip/sequence.hpp"

namespace treeflip {

class InstanceError : public Error {
 public:
  using Error::Error;
};

struct Instance {
  std::string name;
  PlaneTree t_initial;
  PlaneTree t_final;
  std::string provenance;
  /// Optional worked sequence from t_initial to t_final.
  std::optional<std::vector<Move>> moves;

  int n() const { return t_initial.n(); }
  FlipSequence sequence() const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

/// JSON document: {"name", "n", "t_initial", "t_final"[, "provenance"][, "sequence"]}.
/// Trees are arrays of [a, b] label pairs; a sequence is an array of [[a, b], [c, d]]
/// removed/inserted pairs. Unknown fields are rejected.
Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& inst);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// Bundled instances.
Instance parking12();
Instance reparking22();
Instance reparking32();
/// Four-flip sequence on 8 points with one chain of length 3 and one of length 1.
Instance trace_example();
std::vector<std::string> bundled_names();
Instance bundled(const std::string& name);

/// k parking blocks glued along happy edges, n = 10k + 2; glue(1) == parking12().
Instance glue(int k);
/// Concatenation of each block's optimal sequence, relabeled into glue(k).
FlipSequence glue_sequence(int k);

/// Rotation-symmetric family with n = 10k + 2 whose shortest sequences need a chain of
/// length k + 1. k = 1, 2, 3 give parking12, reparking22 and reparking32.
Instance rotating_diameter_family(int k);

/// Two independent random plane trees on n points, deterministic per seed. Uniform for
/// n <= 10 (rejection from uniform labeled trees), greedy random insertion above.
Instance random_instance(int n, uint64_t seed);
PlaneTree random_tree(int n, uint64_t seed);

}  // namespace treeflip
