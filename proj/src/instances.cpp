#include "treeflip/instances.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpus_data.hpp"

namespace treeflip {

using json = nlohmann::ordered_json;

FlipSequence Instance::sequence() const {
  if (!moves) throw InstanceError("instance '" + name + "' has no sequence");
  return {t_initial, *moves};
}

namespace {

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

Chord parse_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InstanceError(where + ": expected [a, b] integer pair");
  int a = j[0].get<int>(), b = j[1].get<int>();
  if (a == b) throw InstanceError(where + ": degenerate chord [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  if (a > b) throw InstanceError(where + ": pair must satisfy a < b");
  return Chord(a, b);
}

PlaneTree parse_tree(const json& j, int n, const std::string& field) {
  if (!j.is_array()) throw InstanceError("field '" + field + "': expected an array of pairs");
  std::vector<Chord> chords;
  for (std::size_t i = 0; i < j.size(); ++i) {
    Chord c = parse_pair(j[i], "field '" + field + "'[" + std::to_string(i) + "]");
    if (c.b >= n)
      throw InstanceError("field '" + field + "'[" + std::to_string(i) + "]: label " +
                          std::to_string(c.b) + " out of range for n=" + std::to_string(n));
    chords.push_back(c);
  }
  auto v = validate_tree(chords, n);
  if (!v.ok()) throw InstanceError("field '" + field + "': " + v.message);
  return *v.tree;
}

json tree_json(const PlaneTree& t) {
  json arr = json::array();
  for (const auto& c : t.chords()) arr.push_back({c.a, c.b});
  return arr;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw InstanceError("parse error at line " + std::to_string(line_of(text, err.byte)) + ": " + err.what());
  }
  if (!doc.is_object()) throw InstanceError("instance document must be an object");
  static const std::set<std::string> known{"name", "n", "t_initial", "t_final", "provenance", "sequence"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw InstanceError("unknown field '" + key + "'");
  for (const char* key : {"name", "n", "t_initial", "t_final"})
    if (!doc.contains(key)) throw InstanceError(std::string("missing field '") + key + "'");
  if (!doc["name"].is_string()) throw InstanceError("field 'name': expected a string");
  if (!doc["n"].is_number_integer()) throw InstanceError("field 'n': expected an integer");
  const int n = doc["n"].get<int>();
  if (n < 3 || n > kMaxPoints)
    throw InstanceError("field 'n': " + std::to_string(n) + " outside 3.." + std::to_string(kMaxPoints));
  auto ti = parse_tree(doc["t_initial"], n, "t_initial");
  auto tf = parse_tree(doc["t_final"], n, "t_final");
  std::string provenance;
  if (doc.contains("provenance")) {
    if (!doc["provenance"].is_string()) throw InstanceError("field 'provenance': expected a string");
    provenance = doc["provenance"].get<std::string>();
  }
  Instance inst{doc["name"].get<std::string>(), ti, tf, provenance, std::nullopt};
  if (doc.contains("sequence")) {
    const auto& s = doc["sequence"];
    if (!s.is_array()) throw InstanceError("field 'sequence': expected an array of moves");
    std::vector<Move> moves;
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::string where = "field 'sequence'[" + std::to_string(i) + "]";
      if (!s[i].is_array() || s[i].size() != 2) throw InstanceError(where + ": expected [[a, b], [c, d]]");
      moves.push_back({parse_pair(s[i][0], where), parse_pair(s[i][1], where)});
    }
    FlipSequence seq{ti, moves};
    try {
      if (!(final_tree(seq) == tf)) throw InstanceError("field 'sequence': does not end at t_final");
    } catch (const ReplayError& err) {
      throw InstanceError(std::string("field 'sequence': ") + err.what());
    }
    inst.moves = std::move(moves);
  }
  return inst;
}

std::string dump_instance(const Instance& inst) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << json(inst.name).dump() << ",\n";
  os << "  \"n\": " << inst.n() << ",\n";
  os << "  \"t_initial\": " << tree_json(inst.t_initial).dump() << ",\n";
  os << "  \"t_final\": " << tree_json(inst.t_final).dump();
  if (!inst.provenance.empty()) os << ",\n  \"provenance\": " << json(inst.provenance).dump();
  if (inst.moves) {
    json s = json::array();
    for (const auto& m : *inst.moves)
      s.push_back({{m.removed.a, m.removed.b}, {m.inserted.a, m.inserted.b}});
    os << ",\n  \"sequence\": " << s.dump();
  }
  os << "\n}\n";
  return os.str();
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const InstanceError& err) {
    throw InstanceError(path + ": " + err.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write '" + path + "'");
  out << dump_instance(inst);
  if (!out) throw InstanceError("write failed for '" + path + "'");
}

std::vector<std::string> bundled_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::embedded_corpus()) names.emplace_back(name);
  return names;
}

Instance bundled(const std::string& name) {
  for (const auto& [key, text] : detail::embedded_corpus())
    if (key == name) return parse_instance(std::string(text));
  throw InstanceError("no bundled instance named '" + name + "'");
}

Instance parking12() { return bundled("parking12"); }
Instance reparking22() { return bundled("reparking22"); }
Instance reparking32() { return bundled("reparking32"); }
Instance trace_example() { return bundled("trace_example"); }

Instance rotating_diameter_family(int k) {
  if (k < 1 || 10 * k + 2 > kMaxPoints)
    throw InstanceError("family parameter k=" + std::to_string(k) + " outside 1.." +
                        std::to_string((kMaxPoints - 2) / 10));
  const int n = 10 * k + 2, half = n / 2;
  std::vector<Chord> ti, tf;
  auto add = [&](int a, int b) {
    Chord c(a % n, b % n);
    if (std::find(ti.begin(), ti.end(), c) == ti.end()) ti.push_back(c);
  };
  for (int r : {0, half}) {
    add(r, r + half);
    for (int b = 0; b < k; ++b) {
      int hub = half - 1 - b;
      for (int s : {4 * b, 4 * b + 2, 4 * b + 3}) add(r + s, r + hub);
      add(r + 4 * b, r + 4 * b + 1);
      add(r + 4 * b + 3, r + 4 * b + 4);
    }
  }
  const int c = 4 * k;
  auto mirror = [&](int x) { return ((c - x) % n + n) % n; };
  for (const auto& ch : ti) tf.emplace_back(mirror(ch.a), mirror(ch.b));
  return {"family" + std::to_string(k), PlaneTree::from_chords(n, ti), PlaneTree::from_chords(n, tf),
          "rotating-diameter construction, k=" + std::to_string(k), std::nullopt};
}

namespace {

// Labels of glue(k): block b's local label l maps to a global label.
std::vector<std::vector<int>> glue_labels(int k) {
  using Vertex = std::pair<int, int>;
  std::vector<Vertex> boundary;
  for (int l = 0; l < 12; ++l) boundary.push_back({0, l});
  for (int b = 1; b < k; ++b) {
    auto at = std::find(boundary.begin(), boundary.end(), Vertex{b - 1, 7});
    std::vector<Vertex> block;
    for (int l = 2; l < 12; ++l) block.push_back({b, l});
    boundary.insert(at, block.begin(), block.end());
  }
  std::vector<std::vector<int>> label(k, std::vector<int>(12, -1));
  for (std::size_t i = 0; i < boundary.size(); ++i)
    label[boundary[i].first][boundary[i].second] = static_cast<int>(i);
  for (int b = 1; b < k; ++b) {
    label[b][1] = label[b - 1][6];
    label[b][0] = label[b - 1][7];
  }
  return label;
}

Chord relabel(const Chord& c, const std::vector<int>& label) { return Chord(label[c.a], label[c.b]); }

}  // namespace

Instance glue(int k) {
  if (k < 1) throw InstanceError("glue needs k >= 1, got " + std::to_string(k));
  if (10 * k + 2 > kMaxPoints)
    throw InstanceError("glue(" + std::to_string(k) + ") needs " + std::to_string(10 * k + 2) +
                        " points, above the limit of " + std::to_string(kMaxPoints));
  const Instance block = parking12();
  if (k == 1) return block;
  auto label = glue_labels(k);
  std::vector<Chord> ti, tf;
  for (int b = 0; b < k; ++b) {
    for (const auto& c : block.t_initial.chords()) {
      Chord g = relabel(c, label[b]);
      if (std::find(ti.begin(), ti.end(), g) == ti.end()) ti.push_back(g);
    }
    for (const auto& c : block.t_final.chords()) {
      Chord g = relabel(c, label[b]);
      if (std::find(tf.begin(), tf.end(), g) == tf.end()) tf.push_back(g);
    }
  }
  const int n = 10 * k + 2;
  return {"glue" + std::to_string(k), PlaneTree::from_chords(n, ti), PlaneTree::from_chords(n, tf),
          std::to_string(k) + " parking blocks glued along happy edges", std::nullopt};
}

FlipSequence glue_sequence(int k) {
  const Instance inst = glue(k);
  const FlipSequence block = parking12().sequence();
  if (k == 1) return block;
  auto label = glue_labels(k);
  FlipSequence seq{inst.t_initial, {}};
  for (int b = 0; b < k; ++b)
    for (const auto& m : block.moves) seq.moves.push_back({relabel(m.removed, label[b]), relabel(m.inserted, label[b])});
  return seq;
}

namespace {

// Uniform labeled tree from a random Pruefer sequence.
std::vector<Chord> random_labeled_tree(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> code(n - 2);
  for (auto& x : code) x = pick(rng);
  std::vector<int> degree(n, 1);
  for (int x : code) ++degree[x];
  std::set<int> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.insert(v);
  std::vector<Chord> edges;
  for (int x : code) {
    int leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    edges.emplace_back(leaf, x);
    if (--degree[x] == 1) leaves.insert(x);
  }
  int u = *leaves.begin(), v = *std::next(leaves.begin());
  edges.emplace_back(u, v);
  return edges;
}

bool plane(const std::vector<Chord>& edges) {
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j)
      if (chords_cross(edges[i], edges[j])) return false;
  return true;
}

PlaneTree greedy_random_tree(int n, std::mt19937_64& rng) {
  std::vector<Chord> all;
  for (int b = 1; b < n; ++b)
    for (int a = 0; a < b; ++a) all.emplace_back(a, b);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<int> comp(n);
  for (int v = 0; v < n; ++v) comp[v] = v;
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  ChordSet bits, blocked;
  for (const auto& c : all) {
    if (blocked.contains(c)) continue;
    int ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    comp[ra] = rb;
    bits.insert(c);
    blocked = blocked | crossing_mask(c);
  }
  return tree_from_trusted_bits(n, bits);
}

PlaneTree draw_tree(int n, std::mt19937_64& rng) {
  if (n <= 10) {
    while (true) {
      auto edges = random_labeled_tree(n, rng);
      if (plane(edges)) return PlaneTree::from_chords(n, edges);
    }
  }
  return greedy_random_tree(n, rng);
}

}  // namespace

PlaneTree random_tree(int n, uint64_t seed) {
  ConvexSet check(n);
  (void)check;
  std::mt19937_64 rng(seed);
  return draw_tree(n, rng);
}

Instance random_instance(int n, uint64_t seed) {
  ConvexSet check(n);
  (void)check;
  std::mt19937_64 rng(seed);
  auto ti = draw_tree(n, rng);
  auto tf = draw_tree(n, rng);
  return {"random-n" + std::to_string(n) + "-s" + std::to_string(seed), ti, tf,
          "random_instance(n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")", std::nullopt};
}

}  // namespace treeflip
