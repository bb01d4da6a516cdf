#include "treeflip/export.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

namespace treeflip {

using json = nlohmann::ordered_json;

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string bound_name(SliceBound b) { return b == SliceBound::kLengthPruned ? "length-pruned" : "budget-only"; }

SliceBound bound_from(const std::string& s) {
  if (s == "length-pruned") return SliceBound::kLengthPruned;
  if (s == "budget-only") return SliceBound::kBudgetOnly;
  throw Error("unknown slice bound '" + s + "'");
}

FlipKind kind_from(const std::string& s) {
  for (auto k : {FlipKind::kCrossing, FlipKind::kCompatible, FlipKind::kRotation, FlipKind::kSlide})
    if (to_string(k) == s) return k;
  throw Error("unknown flip kind '" + s + "'");
}

json chord_json(const Chord& c) { return json::array({c.a, c.b}); }

Chord chord_from(const json& j) { return Chord(j.at(0).get<int>(), j.at(1).get<int>()); }

}  // namespace

std::string slice_to_dot(const FlipGraphSlice& slice) {
  std::ostringstream os;
  os << "digraph slice {\n";
  os << "  graph [n=" << slice.n << ", budget=" << slice.budget << ", length_bound=" << slice.length_bound
     << "];\n";
  for (std::size_t i = 0; i < slice.nodes.size(); ++i) {
    const auto& node = slice.nodes[i];
    os << "  " << quote(node.key) << " [label=" << quote(std::to_string(i)) << ", nonperfect="
       << node.min_nonperfect << ", depth=" << node.min_depth;
    if (i == 0) os << ", shape=doublecircle";
    if (node.tree.bits() == slice.target) os << ", shape=box";
    os << "];\n";
  }
  for (const auto& arc : slice.arcs) {
    os << "  " << quote(slice.nodes[arc.from].key) << " -> " << quote(slice.nodes[arc.to].key)
       << " [label=" << quote(arc.move.removed.str() + ">" + arc.move.inserted.str())
       << ", kind=" << to_string(arc.kind) << ", style=" << (arc.perfect ? "bold" : "dashed") << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string slice_to_json(const FlipGraphSlice& slice) {
  json doc;
  doc["n"] = slice.n;
  doc["budget"] = slice.budget;
  doc["first_flip"] = to_string(slice.first_flip);
  doc["bound"] = bound_name(slice.bound);
  doc["length_bound"] = slice.length_bound;
  json target = json::array();
  for (const auto& c : slice.target.sorted()) target.push_back(chord_json(c));
  doc["target"] = target;
  doc["root"] = slice.nodes.empty() ? "" : slice.nodes[0].key;
  json nodes = json::array();
  for (std::size_t i = 0; i < slice.nodes.size(); ++i) {
    const auto& node = slice.nodes[i];
    nodes.push_back({{"id", i},
                     {"key", node.key},
                     {"min_nonperfect", node.min_nonperfect},
                     {"min_depth", node.min_depth},
                     {"is_target", node.tree.bits() == slice.target}});
  }
  doc["nodes"] = nodes;
  json arcs = json::array();
  for (const auto& arc : slice.arcs)
    arcs.push_back({{"from", arc.from},
                    {"to", arc.to},
                    {"removed", chord_json(arc.move.removed)},
                    {"inserted", chord_json(arc.move.inserted)},
                    {"kind", to_string(arc.kind)},
                    {"perfect", arc.perfect}});
  doc["arcs"] = arcs;
  doc["node_count"] = slice.nodes.size();
  doc["arc_count"] = slice.arcs.size();
  return doc.dump(1) + "\n";
}

FlipGraphSlice slice_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
    FlipGraphSlice s;
    s.n = doc.at("n").get<int>();
    s.budget = doc.at("budget").get<int>();
    s.first_flip = first_flip_filter_from_string(doc.at("first_flip").get<std::string>());
    s.bound = bound_from(doc.at("bound").get<std::string>());
    s.length_bound = doc.at("length_bound").get<int>();
    for (const auto& c : doc.at("target")) s.target.insert(chord_from(c));
    for (const auto& node : doc.at("nodes")) {
      auto tree = tree_from_key(s.n, node.at("key").get<std::string>());
      s.nodes.push_back({tree, node.at("key").get<std::string>(), node.at("min_nonperfect").get<int>(),
                         node.at("min_depth").get<int>()});
    }
    for (const auto& arc : doc.at("arcs")) {
      SliceArc a;
      a.from = arc.at("from").get<std::size_t>();
      a.to = arc.at("to").get<std::size_t>();
      if (a.from >= s.nodes.size() || a.to >= s.nodes.size()) throw Error("arc endpoint out of range");
      a.move = {chord_from(arc.at("removed")), chord_from(arc.at("inserted"))};
      a.kind = kind_from(arc.at("kind").get<std::string>());
      a.perfect = arc.at("perfect").get<bool>();
      s.arcs.push_back(a);
    }
    return s;
  } catch (const json::exception& err) {
    throw Error(std::string("malformed slice document: ") + err.what());
  }
}

bool operator==(const SliceNode& x, const SliceNode& y) {
  return x.tree == y.tree && x.key == y.key && x.min_nonperfect == y.min_nonperfect && x.min_depth == y.min_depth;
}

bool operator==(const SliceArc& x, const SliceArc& y) {
  return x.from == y.from && x.to == y.to && x.move == y.move && x.kind == y.kind && x.perfect == y.perfect;
}

bool operator==(const FlipGraphSlice& x, const FlipGraphSlice& y) {
  return x.n == y.n && x.budget == y.budget && x.first_flip == y.first_flip && x.bound == y.bound &&
         x.length_bound == y.length_bound && x.target == y.target && x.nodes == y.nodes && x.arcs == y.arcs;
}

namespace {

class DotLexer {
 public:
  explicit DotLexer(const std::string& text) : s_(text) {}

  // Returns "" at end of input.
  std::string next() {
    skip();
    if (pos_ >= s_.size()) return "";
    char c = s_[pos_];
    if (c == '"') {
      std::string out;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) throw Error("dot: unterminated string");
      ++pos_;
      return "\"" + out;
    }
    if (c == '-' && pos_ + 1 < s_.size() && (s_[pos_ + 1] == '>' || s_[pos_ + 1] == '-')) {
      pos_ += 2;
      return s_.substr(pos_ - 2, 2);
    }
    if (std::string("{}[];,=").find(c) != std::string::npos) {
      ++pos_;
      return std::string(1, c);
    }
    std::string out;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '.' || s_[pos_] == '-'))
      out += s_[pos_++];
    if (out.empty()) throw Error(std::string("dot: unexpected character '") + c + "'");
    return out;
  }

  std::string peek() {
    auto save = pos_;
    auto t = next();
    pos_ = save;
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string unquote(const std::string& tok) { return !tok.empty() && tok[0] == '"' ? tok.substr(1) : tok; }

bool is_id(const std::string& tok) { return !tok.empty() && std::string("{}[];,=").find(tok[0]) == std::string::npos && tok != "->" && tok != "--"; }

std::vector<std::pair<std::string, std::string>> read_attrs(DotLexer& lex) {
  std::vector<std::pair<std::string, std::string>> attrs;
  if (lex.peek() != "[") return attrs;
  lex.next();
  while (true) {
    auto key = lex.next();
    if (key == "]") break;
    if (!is_id(key)) throw Error("dot: expected attribute name, got '" + key + "'");
    if (lex.next() != "=") throw Error("dot: expected '=' after " + key);
    auto value = lex.next();
    if (!is_id(value)) throw Error("dot: expected attribute value");
    attrs.emplace_back(unquote(key), unquote(value));
    auto sep = lex.peek();
    if (sep == "," || sep == ";") lex.next();
  }
  return attrs;
}

}  // namespace

DotGraph parse_dot(const std::string& text) {
  DotLexer lex(text);
  DotGraph g;
  auto kw = lex.next();
  if (kw == "strict") kw = lex.next();
  if (kw == "digraph") {
    g.directed = true;
  } else if (kw != "graph") {
    throw Error("dot: expected 'graph' or 'digraph'");
  }
  if (lex.peek() != "{") g.name = unquote(lex.next());
  if (lex.next() != "{") throw Error("dot: expected '{'");
  std::set<std::string> seen;
  auto add_node = [&](const std::string& id) {
    if (seen.insert(id).second) g.nodes.push_back(id);
  };
  while (true) {
    auto tok = lex.next();
    if (tok.empty()) throw Error("dot: missing closing '}'");
    if (tok == "}") break;
    if (tok == ";") continue;
    if (!is_id(tok)) throw Error("dot: unexpected token '" + tok + "'");
    if (tok == "graph" || tok == "node" || tok == "edge") {
      read_attrs(lex);
      continue;
    }
    std::vector<std::string> chain{unquote(tok)};
    while (lex.peek() == "->" || lex.peek() == "--") {
      auto op = lex.next();
      if ((op == "->") != g.directed) throw Error("dot: edge operator does not match graph kind");
      auto id = lex.next();
      if (!is_id(id)) throw Error("dot: expected node id after " + op);
      chain.push_back(unquote(id));
    }
    auto attrs = read_attrs(lex);
    for (const auto& id : chain) add_node(id);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      g.edges.emplace_back(chain[i], chain[i + 1]);
      g.edge_attrs.push_back(attrs);
    }
  }
  if (!lex.next().empty()) throw Error("dot: trailing content after graph");
  return g;
}

}  // namespace treeflip
