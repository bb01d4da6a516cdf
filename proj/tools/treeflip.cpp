#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "treeflip/acceptance.hpp"
#include "treeflip/conjecture_lab.hpp"
#include "treeflip/export.hpp"
#include "treeflip/search.hpp"
#include "treeflip/service.hpp"

using namespace treeflip;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInputError = 2;
constexpr int kCapExceeded = 3;

// A path to an instance file, or the name of a bundled instance.
Instance resolve(const std::string& ref) {
  if (std::filesystem::exists(ref)) return load_instance(ref);
  for (const auto& name : bundled_names())
    if (name == ref) return bundled(name);
  throw InstanceError("'" + ref + "' is neither a readable file nor a bundled instance");
}

PerfectRule rule_from(const std::string& s) {
  if (s == "strict") return PerfectRule::kStrict;
  if (s == "insert-only") return PerfectRule::kInsertOnly;
  throw Error("perfect rule must be strict or insert-only");
}

struct DistanceArgs {
  std::string instance;
  bool hull_parking_only = false;
  bool compatible_only = false;
  bool forbid_happy = false;
  int max_nonperfect = -1;
  std::size_t max_sequences = 100000;
  int max_length = 64;
  uint64_t node_cap = 2'000'000'000ull;
  unsigned threads = 1;
  std::string perfect = "strict";
  bool print = false;
};

int run_distance(const DistanceArgs& a) {
  Instance inst = resolve(a.instance);
  SearchOptions o;
  o.restrict_parking_to_hull = a.hull_parking_only;
  o.compatible_only = a.compatible_only;
  o.forbid_flipping_happy = a.forbid_happy;
  o.max_nonperfect = a.max_nonperfect;
  o.max_sequences = a.max_sequences;
  o.max_length = a.max_length;
  o.node_cap = a.node_cap;
  o.threads = a.threads;
  o.perfect = rule_from(a.perfect);
  auto r = shortest_sequences(inst.t_initial, inst.t_final, o);
  const int lb = lower_bound(inst.t_initial, inst.t_final);
  std::cout << std::fixed << std::setprecision(3);
  if (r.status == SearchStatus::kFound) {
    std::cout << "optimum " << *r.optimum << ", sequences " << r.count << ", lower bound " << lb << ", time "
              << r.stats.seconds << " s\n";
  } else if (r.status == SearchStatus::kNone) {
    std::cout << "no sequence within length " << a.max_length << ", lower bound " << lb << ", time "
              << r.stats.seconds << " s\n";
  } else {
    std::cout << "inconclusive: " << r.reason;
    if (r.optimum) std::cout << "; optimum " << *r.optimum << " certified, first " << r.count << " sequences kept";
    std::cout << ", lower bound " << lb << ", time " << r.stats.seconds << " s\n";
  }
  if (a.print)
    for (const auto& s : r.sequences) {
      auto rep = analyze(s, inst.t_final);
      std::cout << to_string(s) << "  [non-perfect " << rep.nonperfect << ", max trace " << rep.max_trace_length
                << (rep.hull_parking_only ? ", hull parking" : ", diagonal parking") << "]\n";
    }
  if (r.status == SearchStatus::kFound) return kOk;
  return kCapExceeded;
}

struct SliceArgs {
  std::string instance;
  int budget = 1;
  bool first_flip_hull = false;
  std::string format = "structured";
  std::string bound = "length-pruned";
  std::string out;
  uint64_t node_cap = 5'000'000;
  uint64_t path_cap = 200'000'000;
};

int run_slice(const SliceArgs& a) {
  Instance inst = resolve(a.instance);
  SliceOptions o;
  o.budget = a.budget;
  o.first_flip = a.first_flip_hull ? FirstFlipFilter::kFirstFlipHull : FirstFlipFilter::kNone;
  o.bound = a.bound == "budget-only" ? SliceBound::kBudgetOnly : SliceBound::kLengthPruned;
  o.node_cap = a.node_cap;
  o.path_cap = a.path_cap;
  auto s = reachable_slice(inst.t_initial, inst.t_final, o);
  const std::string text = a.format == "dot" ? slice_to_dot(s) : slice_to_json(s);
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f) throw InstanceError("cannot write '" + a.out + "'");
    f << text;
  }
  // Counts go to stderr when the slice itself is on stdout.
  (a.out.empty() || a.out == "-" ? std::cerr : std::cout) << s.nodes.size() << " nodes, " << s.arcs.size()
                                                           << " arcs\n";
  return kOk;
}

struct CheckArgs {
  std::string instance;
  std::string property = "reparking";
  bool json = false;
  std::size_t max_sequences = 100000;
  uint64_t node_cap = 500'000'000ull;
};

int run_check(const CheckArgs& a) {
  Instance inst = resolve(a.instance);
  Caps caps;
  caps.max_sequences = a.max_sequences;
  caps.node_cap = a.node_cap;
  if (a.property == "fixedness") {
    auto rep = classify_fixedness(inst, caps);
    if (!rep.conclusive) {
      std::cout << "inconclusive: " << rep.note << "\n";
      return kCapExceeded;
    }
    std::cout << "examined " << rep.examined << " shortest sequences\n";
    for (const auto& [c, f] : rep.edges) std::cout << c.str() << " " << to_string(f) << "\n";
    return kOk;
  }
  Verdict v;
  if (a.property == "happy") v = check_happy_property(inst, caps);
  else if (a.property == "parking") v = check_parking_property(inst, caps);
  else if (a.property == "reparking") v = check_reparking_property(inst, caps);
  else if (a.property == "final-flip") v = final_flip_property_check(inst, caps);
  else if (a.property == "hull-once") v = check_hull_once_property(inst, caps);
  else v = check_compatible_reparking(inst, caps);
  std::cout << (a.json ? verdict_json(v) : describe(v)) << "\n";
  if (!a.json && v.witness) std::cout << "witness: " << to_string(*v.witness) << "\n";
  return v.status == VerdictStatus::kInconclusive ? kCapExceeded : kOk;
}

int run_show(const std::string& ref) {
  Instance inst = resolve(ref);
  std::cout << inst.name << " (n = " << inst.n() << ")\n";
  std::cout << "initial " << inst.t_initial.str() << "\nfinal   " << inst.t_final.str() << "\n";
  std::cout << "happy   " << happy_edges(inst.t_initial, inst.t_final).sorted().size() << " edges, lower bound "
            << lower_bound(inst.t_initial, inst.t_final) << "\n";
  if (!inst.provenance.empty()) std::cout << inst.provenance << "\n";
  if (!inst.moves) return kOk;
  auto seq = inst.sequence();
  auto rep = analyze(seq, inst.t_final);
  std::cout << "sequence " << to_string(seq) << "\nlength " << rep.length << ", non-perfect " << rep.nonperfect
            << ", parking " << rep.parking.size() << (rep.hull_parking_only ? " (hull only)" : " (some diagonal)")
            << "\n";
  for (const auto& ch : chain_decomposition(seq)) {
    std::cout << "  trace " << ch.length() << ":";
    for (const auto& c : ch.links) std::cout << " " << c.str();
    std::cout << "\n";
  }
  return kOk;
}

int run_verify(bool include_slow, const std::string& corpus_dir, unsigned threads) {
  AcceptanceOptions o;
  o.include_slow = include_slow;
  o.threads = threads;
  if (!corpus_dir.empty()) o.corpus = load_corpus(corpus_dir);
  bool ok = true;
  run_acceptance(o, [&](const ClaimResult& r) {
    std::cout << format_claim(r) << std::endl;
    if (!r.pass && !r.skipped) ok = false;
  });
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flips between non-crossing spanning trees on convex point sets"};
  app.require_subcommand(1);

  DistanceArgs dist;
  auto* d = app.add_subcommand("distance", "Shortest flip sequences between the two trees of an instance");
  d->add_option("instance", dist.instance, "Instance file or bundled instance name")->required();
  d->add_flag("--hull-parking-only", dist.hull_parking_only, "Park only on hull edges");
  d->add_flag("--compatible-only", dist.compatible_only, "Use only compatible flips");
  d->add_flag("--forbid-happy-flips", dist.forbid_happy, "Never flip an edge common to both trees");
  d->add_option("--max-nonperfect", dist.max_nonperfect, "Budget of non-perfect flips (default unlimited)");
  d->add_option("--max-sequences", dist.max_sequences, "Stop enumerating after this many sequences");
  d->add_option("--max-length", dist.max_length, "Longest length tried");
  d->add_option("--node-cap", dist.node_cap, "Search node limit");
  d->add_option("--threads", dist.threads, "Worker threads");
  d->add_option("--perfect", dist.perfect, "strict or insert-only")->check(CLI::IsMember({"strict", "insert-only"}));
  d->add_flag("--print", dist.print, "Print every sequence found");

  SliceArgs sl;
  auto* s = app.add_subcommand("slice", "Export the reachable slice of the flip graph");
  s->add_option("instance", sl.instance, "Instance file or bundled instance name")->required();
  s->add_option("--budget", sl.budget, "Non-perfect flip budget")->check(CLI::Range(0, 8));
  s->add_flag("--first-flip-hull", sl.first_flip_hull, "First flip must insert a hull edge");
  s->add_option("--format", sl.format, "dot or structured")->check(CLI::IsMember({"dot", "structured"}));
  s->add_option("--bound", sl.bound, "length-pruned or budget-only")
      ->check(CLI::IsMember({"length-pruned", "budget-only"}));
  s->add_option("-o,--out", sl.out, "Output file (default stdout)");
  s->add_option("--node-cap", sl.node_cap, "Slice node limit");
  s->add_option("--path-cap", sl.path_cap, "Limit on enumerated paths");

  CheckArgs ck;
  auto* c = app.add_subcommand("check", "Decide a sequence property over all shortest sequences");
  c->add_option("instance", ck.instance, "Instance file or bundled instance name")->required();
  c->add_option("--property", ck.property)
      ->check(CLI::IsMember(
          {"happy", "parking", "reparking", "final-flip", "hull-once", "compatible-reparking", "fixedness"}));
  c->add_flag("--json", ck.json, "Machine-readable verdict");
  c->add_option("--max-sequences", ck.max_sequences, "Give up as inconclusive beyond this many sequences");
  c->add_option("--node-cap", ck.node_cap, "Search node limit");

  std::string show_ref;
  auto* sh = app.add_subcommand("show", "Print an instance and the traces of its stored sequence");
  sh->add_option("instance", show_ref, "Instance file or bundled instance name")->required();

  bool include_slow = false;
  std::string verify_dir;
  unsigned verify_threads = 1;
  auto* v = app.add_subcommand("verify", "Run the acceptance claims and print one line per claim");
  v->add_flag("--include-slow", include_slow, "Also run the 32-point and glued hull-only searches");
  v->add_option("--corpus-dir", verify_dir, "Read instances from this directory instead of the bundled corpus");
  v->add_option("--threads", verify_threads, "Worker threads for searches");

  std::string host = "127.0.0.1", serve_dir;
  int port = 8080;
  auto* sv = app.add_subcommand("serve", "Serve the JSON endpoints over HTTP");
  sv->add_option("--port", port, "Port to listen on (default 8080)")->check(CLI::Range(1, 65535));
  sv->add_option("--host", host, "Address to bind (default 127.0.0.1)");
  sv->add_option("--corpus-dir", serve_dir, "Serve instances from this directory instead of the bundled corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*d) return run_distance(dist);
    if (*s) return run_slice(sl);
    if (*c) return run_check(ck);
    if (*sh) return run_show(show_ref);
    if (*v) return run_verify(include_slow, verify_dir, verify_threads);
    if (*sv) {
      Service service(load_corpus(serve_dir));
      std::cerr << "listening on " << host << ":" << port << "\n";
      run_server(service, host, port);
      return kOk;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
