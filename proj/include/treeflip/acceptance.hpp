#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treeflip/instances.hpp"

namespace treeflip {

struct ClaimResult {
  std::string id;
  std::string claim;
  std::string expected;
  std::string observed;
  bool pass = false;
  bool skipped = false;
  double seconds = 0;
};

struct AcceptanceOptions {
  /// Instances looked up by name (parking12, reparking22, ...). Empty means the bundled corpus.
  std::vector<Instance> corpus;
  /// Runs the 32-point search and the 22-point hull-only search.
  bool include_slow = false;
  int random_instances = 200;
  uint64_t random_seed = 1;
  /// Random walks harvested for the rewrite contracts.
  int random_walks = 300;
  unsigned threads = 1;
};

/// Runs P1..P11 in order, calling on_result after each.
std::vector<ClaimResult> run_acceptance(const AcceptanceOptions& opts,
                                        const std::function<void(const ClaimResult&)>& on_result = {});

/// "PASS P1 ...", "FAIL P5 ..." or "SKIP P6 ..." with expected and observed values.
std::string format_claim(const ClaimResult& r);

/// The seeded random corpus shared by the oracle and property claims: n cycles through 4..7.
std::vector<Instance> random_corpus(int count, uint64_t seed);

}  // namespace treeflip
