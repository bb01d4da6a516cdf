#include "treeflip/acceptance.hpp"

#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>

#include "treeflip/conjecture_lab.hpp"
#include "treeflip/search.hpp"
#include "treeflip/transforms.hpp"

namespace treeflip {

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
  const AcceptanceOptions& opts;
  std::vector<Instance> corpus;

  const Instance* find(const std::string& name) const {
    for (const auto& inst : corpus)
      if (inst.name == name) return &inst;
    return nullptr;
  }
  const Instance& get(const std::string& name) const {
    if (auto* p = find(name)) return *p;
    throw InstanceError("corpus has no instance named '" + name + "'");
  }
};

SearchOptions base_options(const Context& ctx) {
  SearchOptions o;
  o.threads = ctx.opts.threads;
  return o;
}

std::string join_counts(std::size_t nodes, std::size_t arcs) {
  return std::to_string(nodes) + " nodes / " + std::to_string(arcs) + " arcs";
}

std::string status_word(const SearchResult& r) {
  if (r.status == SearchStatus::kFound) return "optimum " + std::to_string(*r.optimum);
  if (r.optimum) return "optimum " + std::to_string(*r.optimum) + " (" + r.reason + ")";
  return to_string(r.status) + (r.reason.empty() ? "" : " (" + r.reason + ")");
}

std::size_t max_chain(const FlipSequence& s) {
  std::size_t m = 0;
  for (const auto& ch : chain_decomposition(s)) m = std::max(m, ch.length());
  return m;
}

ClaimResult p1(const Context& ctx) {
  ClaimResult r{"P1", "parking12 optimum and number of shortest sequences", "optimum 8, 20 sequences", "", false, false, 0};
  auto res = shortest_sequences(ctx.get("parking12").t_initial, ctx.get("parking12").t_final, base_options(ctx));
  r.observed = status_word(res) + ", " + std::to_string(res.count) + " sequences";
  r.pass = res.status == SearchStatus::kFound && *res.optimum == 8 && res.count == 20 && res.sequences.size() == 20;
  return r;
}

ClaimResult p2(const Context& ctx) {
  ClaimResult r{"P2", "parking12 optimum with parking restricted to the hull", "optimum 9", "", false, false, 0};
  auto opts = base_options(ctx);
  opts.restrict_parking_to_hull = true;
  const auto& inst = ctx.get("parking12");
  auto res = shortest_sequences(inst.t_initial, inst.t_final, opts);
  r.observed = status_word(res);
  r.pass = res.status == SearchStatus::kFound && *res.optimum == 9;
  return r;
}

ClaimResult p3(const Context& ctx) {
  ClaimResult r{"P3", "parking12 budget-1 slice, unrestricted and hull-first",
                "118 nodes / 214 arcs; hull-first 67 nodes / 120 arcs", "", false, false, 0};
  const auto& inst = ctx.get("parking12");
  SliceOptions so;
  so.budget = 1;
  auto all = reachable_slice(inst.t_initial, inst.t_final, so);
  so.first_flip = FirstFlipFilter::kFirstFlipHull;
  auto hull = reachable_slice(inst.t_initial, inst.t_final, so);
  r.observed = join_counts(all.nodes.size(), all.arcs.size()) + "; hull-first " +
               join_counts(hull.nodes.size(), hull.arcs.size());
  r.pass = all.nodes.size() == 118 && all.arcs.size() == 214 && hull.nodes.size() == 67 && hull.arcs.size() == 120;
  return r;
}

ClaimResult p4(const Context& ctx) {
  ClaimResult r{"P4", "every shortest parking12 sequence parks on a diagonal",
                "20 of 20 park on a diagonal; parking property refuted-on-instance", "", false, false, 0};
  const auto& inst = ctx.get("parking12");
  auto res = shortest_sequences(inst.t_initial, inst.t_final, base_options(ctx));
  std::size_t diagonal = 0;
  for (const auto& s : res.sequences)
    if (!hull_parking_only(s, inst.t_initial, inst.t_final)) ++diagonal;
  auto v = check_parking_property(inst);
  r.observed = std::to_string(diagonal) + " of " + std::to_string(res.sequences.size()) +
               " park on a diagonal; parking property " + to_string(v.status) + " after " +
               std::to_string(v.examined) + " sequences";
  r.pass = res.status == SearchStatus::kFound && res.count == 20 && diagonal == 20 &&
           v.status == VerdictStatus::kRefuted && v.examined == 20;
  return r;
}

ClaimResult p5(const Context& ctx) {
  ClaimResult r{"P5", "reparking22 count, trace-3 chains, necessary conditions, budget-2 slice",
                "400 sequences; each has a trace-3 chain meeting all four conditions; slice 5086 nodes", "", false,
                false, 0};
  const auto& inst = ctx.get("reparking22");
  auto res = shortest_sequences(inst.t_initial, inst.t_final, base_options(ctx));
  std::size_t with_three = 0, conditions_hold = 0;
  for (const auto& s : res.sequences) {
    bool found = false, ok = false;
    for (const auto& ch : chain_decomposition(s))
      if (ch.length() == 3) {
        found = true;
        if (check_reparking_conditions(s, ch.root).all()) ok = true;
      }
    with_three += found;
    conditions_hold += ok;
  }
  SliceOptions so;
  so.budget = 2;
  so.bound = SliceBound::kBudgetOnly;
  auto budget_only = reachable_slice(inst.t_initial, inst.t_final, so);
  so.bound = SliceBound::kLengthPruned;
  auto pruned = reachable_slice(inst.t_initial, inst.t_final, so);
  std::string matched = budget_only.nodes.size() == 5086 ? "budget-only"
                        : pruned.nodes.size() == 5086    ? "length-pruned"
                                                         : "neither";
  std::ostringstream os;
  os << status_word(res) << ", " << res.count << " sequences; " << with_three << " with a trace-3 chain; "
     << conditions_hold << " meeting the conditions; slice budget-only " << budget_only.nodes.size()
     << " nodes, length-pruned " << pruned.nodes.size() << " nodes (match: " << matched << ")";
  r.observed = os.str();
  r.pass = res.status == SearchStatus::kFound && res.count == 400 && with_three == 400 && conditions_hold == 400 &&
           matched != "neither";
  return r;
}

ClaimResult p6(const Context& ctx) {
  ClaimResult r{"P6", "reparking32 shortest sequences all need a trace-4 chain",
                "every shortest sequence has a chain of trace length 4", "", false, false, 0};
  if (!ctx.opts.include_slow) {
    r.skipped = true;
    r.observed = "not run (slow)";
    return r;
  }
  const auto& inst = ctx.get("reparking32");
  auto res = shortest_sequences(inst.t_initial, inst.t_final, base_options(ctx));
  std::size_t least = 0, with_four = 0;
  bool first = true;
  for (const auto& s : res.sequences) {
    auto m = max_chain(s);
    with_four += m == 4;
    least = first ? m : std::min(least, m);
    first = false;
  }
  r.observed = status_word(res) + ", " + std::to_string(res.count) + " sequences, " + std::to_string(with_four) +
               " with a trace-4 chain, least maximum trace " + std::to_string(least);
  r.pass = res.status == SearchStatus::kFound && res.count > 0 && with_four == res.count && least == 4;
  return r;
}

ClaimResult p7(const Context& ctx) {
  ClaimResult r{"P7", "glued blocks: composed sequences have length 8k; hull-only optimum 9k",
                "valid length 8, 16, 24 for k=1..3; hull-only optimum 9 for k=1, 18 for k=2 (slow)", "", false, false, 0};
  std::ostringstream os;
  bool ok = true;
  for (int k = 1; k <= 3; ++k) {
    Instance g = glue(k);
    auto seq = glue_sequence(k);
    bool valid = false;
    try {
      valid = final_tree(seq) == g.t_final && seq.start == g.t_initial;
    } catch (const Error&) {
    }
    if (k > 1) {
      const Instance* stored = ctx.find("glue" + std::to_string(k));
      if (stored && !(stored->t_initial == g.t_initial && stored->t_final == g.t_final)) {
        os << "corpus glue" << k << " differs from construction; ";
        ok = false;
      }
    }
    os << "k=" << k << " " << (valid ? "valid" : "invalid") << " length " << seq.length() << "; ";
    ok = ok && valid && seq.length() == static_cast<std::size_t>(8 * k);
  }
  auto opts = base_options(ctx);
  opts.restrict_parking_to_hull = true;
  const Instance& p = ctx.get("parking12");
  auto res = shortest_sequences(p.t_initial, p.t_final, opts);
  os << "hull-only k=1 " << status_word(res);
  ok = ok && res.status == SearchStatus::kFound && *res.optimum == 9;
  if (ctx.opts.include_slow) {
    Instance g2 = glue(2);
    // Only the optimum is wanted; the sequence cap still certifies it.
    auto opts2 = opts;
    opts2.max_sequences = 1;
    auto res2 = shortest_sequences(g2.t_initial, g2.t_final, opts2);
    os << "; hull-only k=2 " << status_word(res2);
    ok = ok && res2.status != SearchStatus::kNone && res2.optimum && *res2.optimum == 18;
  } else {
    os << "; hull-only k=2 not run (slow)";
  }
  r.observed = os.str();
  r.pass = ok;
  return r;
}

ClaimResult p8(const Context& ctx, const std::vector<Instance>& randoms) {
  ClaimResult r{"P8", "search optimum equals breadth-first flip distance on random instances",
                std::to_string(randoms.size()) + " of " + std::to_string(randoms.size()) + " agree", "", false, false,
                0};
  std::size_t agree = 0;
  std::string first_bad;
  for (const auto& inst : randoms) {
    auto res = shortest_sequences(inst.t_initial, inst.t_final, base_options(ctx));
    int bfs = flip_distance_bfs(inst.t_initial, inst.t_final, 10'000'000);
    if (res.status == SearchStatus::kFound && *res.optimum == bfs) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = inst.name;
    }
  }
  r.observed = std::to_string(agree) + " of " + std::to_string(randoms.size()) + " agree" +
               (first_bad.empty() ? "" : "; first disagreement " + first_bad);
  r.pass = agree == randoms.size();
  return r;
}

ClaimResult p9(const Context&, const std::vector<Instance>& randoms) {
  ClaimResult r{"P9", "final-flip, hull-once and compatible reparking hold on random instances",
                "all three hold on every instance", "", false, false, 0};
  std::size_t final_ok = 0, hull_ok = 0, compat_ok = 0;
  std::string first_bad;
  for (const auto& inst : randoms) {
    bool a = final_flip_property_check(inst).status == VerdictStatus::kHolds;
    bool b = check_hull_once_property(inst).status == VerdictStatus::kHolds;
    bool c = check_compatible_reparking(inst).status == VerdictStatus::kHolds;
    final_ok += a;
    hull_ok += b;
    compat_ok += c;
    if (!(a && b && c) && first_bad.empty()) first_bad = inst.name;
  }
  const auto total = std::to_string(randoms.size());
  r.observed = "final-flip " + std::to_string(final_ok) + "/" + total + ", hull-once " + std::to_string(hull_ok) +
               "/" + total + ", compatible reparking " + std::to_string(compat_ok) + "/" + total +
               (first_bad.empty() ? "" : "; first failure " + first_bad);
  r.pass = final_ok == randoms.size() && hull_ok == randoms.size() && compat_ok == randoms.size();
  return r;
}

struct ContractTally {
  std::size_t relocate = 0, relocate_ok = 0;
  std::size_t split = 0, split_ok = 0;
  std::size_t normal = 0, normal_ok = 0;
  std::string first_bad;
};

void note_failure(ContractTally& t, const std::string& what, const FlipSequence& s) {
  if (t.first_bad.empty()) t.first_bad = what + " on " + canonical_key(s.start) + " " + to_string(s);
}

void check_contracts(const FlipSequence& s, ContractTally& t) {
  const int n = s.start.n();
  auto trees = replay(s);
  for (const auto& ch : chain_decomposition(s)) {
    if (ch.length() == 2 && !is_hull_edge(n, ch.links[1])) {
      const Chord &e = ch.links[0], &f = ch.links[1], &e2 = ch.links[2];
      const bool compatible = !chords_cross(e, f) || !chords_cross(f, e2);
      if (compatible) {
        ++t.relocate;
        try {
          auto out = relocate_parking_to_hull(s, ch.root);
          auto tr = trace(out.sequence, ch.root);
          bool kept = out.length_delta == 0 && tr.size() == 3 && tr[2] == e2 && is_hull_edge(n, tr[1]);
          bool dropped = out.length_delta == -1 && tr.size() == 2 && tr[1] == e2 && is_hull_edge(n, e2);
          if ((kept || dropped) && out.other_traces_unchanged() && tr[0] == e &&
              final_tree(out.sequence) == trees.back())
            ++t.relocate_ok;
          else
            note_failure(t, "relocate " + ch.root.str(), s);
        } catch (const Error& err) {
          note_failure(t, "relocate " + ch.root.str() + ": " + err.what(), s);
        }
      } else {
        ++t.split;
        try {
          auto out = split_diagonal_parking(s, ch.root);
          auto tr = trace(out.sequence, ch.root);
          if (out.length_delta == 1 && out.other_traces_unchanged() && tr.size() == 4 && tr[0] == e &&
              tr[3] == e2 && is_hull_edge(n, tr[1]) && is_hull_edge(n, tr[2]) &&
              final_tree(out.sequence) == trees.back())
            ++t.split_ok;
          else
            note_failure(t, "split " + ch.root.str(), s);
        } catch (const Error& err) {
          note_failure(t, "split " + ch.root.str() + ": " + err.what(), s);
        }
      }
    }
    if (ch.length() >= 1) {
      bool crossed = false;
      for (const auto& tree : trees)
        if (crossing_mask(ch.root).count_common(tree.bits()) != 0) crossed = true;
      if (crossed) continue;
      ++t.normal;
      try {
        auto out = normalize(s, ch.root);
        if (trace_length(out.sequence, ch.root) <= 1 && out.length_delta <= 0 &&
            final_tree(out.sequence) == trees.back())
          ++t.normal_ok;
        else
          note_failure(t, "normalize " + ch.root.str(), s);
      } catch (const Error& err) {
        note_failure(t, "normalize " + ch.root.str() + ": " + err.what(), s);
      }
    }
  }
}

FlipSequence random_walk(int n, uint64_t seed, int steps) {
  std::mt19937_64 rng(seed);
  FlipSequence s{random_tree(n, seed), {}};
  PlaneTree cur = s.start;
  std::vector<PlaneTree> seen{cur};
  for (int i = 0; i < steps; ++i) {
    auto flips = legal_flips(cur);
    std::uniform_int_distribution<std::size_t> pick(0, flips.size() - 1);
    const auto& m = flips[pick(rng)];
    cur = apply_flip(cur, m.removed, m.inserted);
    s.moves.push_back({m.removed, m.inserted});
  }
  return s;
}

ClaimResult p10(const Context& ctx, const std::vector<Instance>& randoms) {
  ClaimResult r{"P10", "rewrite contracts on harvested chains",
                "relocation keeps length and other traces; splitting adds one flip with hull parks; "
                "normalizing leaves trace <= 1 and never lengthens",
                "", false, false, 0};
  ContractTally t;
  for (const auto& inst : randoms) {
    auto res = shortest_sequences(inst.t_initial, inst.t_final, base_options(ctx));
    for (const auto& s : res.sequences) check_contracts(s, t);
  }
  for (int i = 0; i < ctx.opts.random_walks; ++i) {
    int n = 5 + i % 4;
    check_contracts(random_walk(n, ctx.opts.random_seed * 7919 + static_cast<uint64_t>(i), 4 + i % 7), t);
  }
  std::ostringstream os;
  os << "relocate " << t.relocate_ok << "/" << t.relocate << ", split " << t.split_ok << "/" << t.split
     << ", normalize " << t.normal_ok << "/" << t.normal;
  if (!t.first_bad.empty()) os << "; first failure " << t.first_bad;
  r.observed = os.str();
  r.pass = t.relocate > 0 && t.split > 0 && t.normal > 0 && t.relocate == t.relocate_ok && t.split == t.split_ok &&
           t.normal == t.normal_ok;
  return r;
}

ClaimResult p11(const Context&) {
  ClaimResult r{"P11", "number of plane spanning trees for n = 3..6", "3, 12, 55, 273", "", false, false, 0};
  std::vector<uint64_t> counts;
  for (int n = 3; n <= 6; ++n) counts.push_back(enumerate_all_trees(n, 1'000'000).size());
  std::ostringstream os;
  for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? ", " : "") << counts[i];
  r.observed = os.str();
  r.pass = counts == std::vector<uint64_t>{3, 12, 55, 273};
  return r;
}

}  // namespace

std::vector<Instance> random_corpus(int count, uint64_t seed) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) out.push_back(random_instance(4 + i % 4, seed * 1'000'003ull + static_cast<uint64_t>(i)));
  return out;
}

std::vector<ClaimResult> run_acceptance(const AcceptanceOptions& opts,
                                        const std::function<void(const ClaimResult&)>& on_result) {
  Context ctx{opts, opts.corpus};
  if (ctx.corpus.empty())
    for (const auto& name : bundled_names()) ctx.corpus.push_back(bundled(name));
  const auto randoms = random_corpus(opts.random_instances, opts.random_seed);

  std::vector<std::function<ClaimResult()>> claims{
      [&] { return p1(ctx); },  [&] { return p2(ctx); },
      [&] { return p3(ctx); },  [&] { return p4(ctx); },
      [&] { return p5(ctx); },  [&] { return p6(ctx); },
      [&] { return p7(ctx); },  [&] { return p8(ctx, randoms); },
      [&] { return p9(ctx, randoms); }, [&] { return p10(ctx, randoms); },
      [&] { return p11(ctx); },
  };
  std::vector<ClaimResult> results;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    auto start = Clock::now();
    ClaimResult r;
    try {
      r = claims[i]();
    } catch (const std::exception& err) {
      r.id = "P" + std::to_string(i + 1);
      r.claim = "claim raised an error";
      r.observed = err.what();
      r.pass = false;
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_claim(const ClaimResult& r) {
  std::ostringstream os;
  os << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.claim << " | expected: "
     << r.expected << " | observed: " << r.observed << " | " << std::fixed << std::setprecision(1) << r.seconds
     << " s";
  return os.str();
}

}  // namespace treeflip
