#include "treeflip/service.hpp"

#include <algorithm>
#include <filesystem>

#include <httplib.h>
#include <json.hpp>

#include "treeflip/export.hpp"
#include "treeflip/search.hpp"

namespace treeflip {

using json = nlohmann::ordered_json;

namespace {

struct HttpError {
  int status;
  std::string message;
};

Response reply(const json& body, int status = 200) { return {status, body.dump() + "\n"}; }

Response error_reply(int status, const std::string& message) {
  json body;
  body["error"] = message;
  body["status"] = status;
  return reply(body, status);
}

json chord_json(const Chord& c) { return json::array({c.a, c.b}); }

json chords_json(const std::vector<Chord>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(chord_json(c));
  return arr;
}

Chord parse_chord(const json& j, int n, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw HttpError{400, "field '" + field + "': expected [a, b]"};
  int a = j[0].get<int>(), b = j[1].get<int>();
  if (a < 0 || b < 0 || a >= n || b >= n || a == b)
    throw HttpError{400, "field '" + field + "': labels out of range"};
  return Chord(a, b);
}

PlaneTree tree_from_request_key(int n, const std::string& key) {
  try {
    return tree_from_key(n, key);
  } catch (const InvalidTree& err) {
    throw HttpError{404, std::string("not a plane spanning tree: ") + err.what()};
  } catch (const Error& err) {
    throw HttpError{400, err.what()};
  }
}

int query_int(const Request& req, const std::string& name, int fallback, int lo, int hi) {
  auto it = req.query.find(name);
  if (it == req.query.end()) return fallback;
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(name);
    if (v < lo || v > hi) throw HttpError{400, "query '" + name + "' outside " + std::to_string(lo) + ".." + std::to_string(hi)};
    return v;
  } catch (const std::logic_error&) {
    throw HttpError{400, "query '" + name + "' must be an integer"};
  }
}

bool query_flag(const Request& req, const std::string& name) {
  auto it = req.query.find(name);
  if (it == req.query.end()) return false;
  if (it->second == "1" || it->second == "true") return true;
  if (it->second == "0" || it->second == "false") return false;
  throw HttpError{400, "query '" + name + "' must be 0 or 1"};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto end = path.find('/', pos);
    if (end == std::string::npos) end = path.size();
    if (end > pos) parts.push_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return parts;
}

json tree_view(const Instance& inst, const PlaneTree& t) {
  const ChordSet& target = inst.t_final.bits();
  json j;
  j["key"] = canonical_key(t);
  j["chords"] = chords_json(t.chords());
  j["is_target"] = t.bits() == target;
  j["happy"] = chords_json(happy_edges(inst.t_initial, inst.t_final).sorted());
  j["target_present"] = chords_json((t.bits() & target).sorted());
  j["target_missing"] = chords_json((target - t.bits()).sorted());
  json flips = json::array();
  for (const auto& m : legal_flips(t))
    flips.push_back({{"removed", chord_json(m.removed)},
                     {"inserted", chord_json(m.inserted)},
                     {"kind", to_string(m.kind)},
                     {"perfect", is_perfect_flip(target, m.removed, m.inserted, PerfectRule::kStrict)}});
  j["flips"] = flips;
  return j;
}

}  // namespace

Service::Service(std::vector<Instance> instances, ServiceLimits limits) : limits_(limits) {
  for (auto& inst : instances) {
    auto name = inst.name;
    instances_.emplace(std::move(name), std::move(inst));
  }
}

Response Service::handle(const Request& req) const {
  try {
    auto parts = split_path(req.path);
    if (parts.empty() || parts[0] != "instances") throw HttpError{404, "no such endpoint: " + req.path};
    if (parts.size() == 1) {
      if (req.method != "GET") throw HttpError{400, "use GET"};
      return list();
    }
    auto it = instances_.find(parts[1]);
    if (it == instances_.end()) throw HttpError{404, "unknown instance '" + parts[1] + "'"};
    const Instance& inst = it->second;
    if (parts.size() == 2 && req.method == "GET") return instance(inst);
    if (parts.size() == 3) {
      const auto& what = parts[2];
      if (what == "tree" && req.method == "GET") return tree(inst, req);
      if (what == "flip" && req.method == "POST") return flip(inst, req);
      if (what == "slice" && req.method == "GET") return slice(inst, req);
      if (what == "shortest" && req.method == "GET") return shortest(inst, req);
    }
    throw HttpError{404, "no such endpoint: " + req.method + " " + req.path};
  } catch (const HttpError& err) {
    return error_reply(err.status, err.message);
  } catch (const CapExceeded& err) {
    return error_reply(503, err.what());
  } catch (const std::exception& err) {
    return error_reply(400, err.what());
  }
}

Response Service::list() const {
  json arr = json::array();
  for (const auto& [name, inst] : instances_)
    arr.push_back({{"name", name}, {"n", inst.n()}, {"has_sequence", inst.moves.has_value()}});
  json body;
  body["instances"] = arr;
  return reply(body);
}

Response Service::instance(const Instance& inst) const {
  json body;
  body["name"] = inst.name;
  body["n"] = inst.n();
  body["provenance"] = inst.provenance;
  body["t_initial"] = chords_json(inst.t_initial.chords());
  body["t_final"] = chords_json(inst.t_final.chords());
  body["initial_key"] = canonical_key(inst.t_initial);
  body["final_key"] = canonical_key(inst.t_final);
  body["happy"] = chords_json(happy_edges(inst.t_initial, inst.t_final).sorted());
  body["lower_bound"] = lower_bound(inst.t_initial, inst.t_final);
  if (inst.moves) {
    json moves = json::array();
    for (const auto& m : *inst.moves) moves.push_back({chord_json(m.removed), chord_json(m.inserted)});
    body["sequence"] = moves;
  }
  return reply(body);
}

Response Service::tree(const Instance& inst, const Request& req) const {
  auto it = req.query.find("key");
  PlaneTree t = it == req.query.end() ? inst.t_initial : tree_from_request_key(inst.n(), it->second);
  return reply(tree_view(inst, t));
}

Response Service::flip(const Instance& inst, const Request& req) const {
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error& err) {
    throw HttpError{400, std::string("malformed JSON body: ") + err.what()};
  }
  if (!body.is_object()) throw HttpError{400, "body must be an object"};
  for (const auto& [key, value] : body.items())
    if (key != "tree" && key != "removed" && key != "inserted") throw HttpError{400, "unknown field '" + key + "'"};
  if (!body.contains("tree") || !body.contains("removed") || !body.contains("inserted"))
    throw HttpError{400, "body needs 'tree', 'removed' and 'inserted'"};
  const int n = inst.n();
  PlaneTree t = inst.t_initial;
  if (body["tree"].is_string()) {
    t = tree_from_request_key(n, body["tree"].get<std::string>());
  } else if (body["tree"].is_array()) {
    std::vector<Chord> chords;
    for (const auto& c : body["tree"]) chords.push_back(parse_chord(c, n, "tree"));
    auto v = validate_tree(chords, n);
    if (!v.ok()) throw HttpError{400, "field 'tree': " + v.message};
    t = *v.tree;
  } else {
    throw HttpError{400, "field 'tree': expected a key or an array of pairs"};
  }
  Chord removed = parse_chord(body["removed"], n, "removed");
  Chord inserted = parse_chord(body["inserted"], n, "inserted");
  PlaneTree next = t;
  try {
    next = apply_flip(t, removed, inserted);
  } catch (const InvalidTree& err) {
    json out;
    out["error"] = err.what();
    out["status"] = 409;
    out["violation"] = to_string(err.violation());
    return reply(out, 409);
  }
  json out;
  out["move"] = {{"removed", chord_json(removed)},
                 {"inserted", chord_json(inserted)},
                 {"kind", to_string(classify_flip(t, removed, inserted))},
                 {"perfect", is_perfect_flip(inst.t_final.bits(), removed, inserted, PerfectRule::kStrict)}};
  out["tree"] = tree_view(inst, next);
  return reply(out);
}

Response Service::slice(const Instance& inst, const Request& req) const {
  SliceOptions opts;
  opts.budget = query_int(req, "budget", 1, 0, limits_.max_budget);
  opts.node_cap = limits_.slice_node_cap;
  opts.path_cap = limits_.slice_path_cap;
  if (auto it = req.query.find("first_flip"); it != req.query.end()) {
    try {
      opts.first_flip = first_flip_filter_from_string(it->second);
    } catch (const Error& err) {
      throw HttpError{400, err.what()};
    }
  }
  if (auto it = req.query.find("bound"); it != req.query.end()) {
    if (it->second == "length-pruned") {
      opts.bound = SliceBound::kLengthPruned;
    } else if (it->second == "budget-only") {
      opts.bound = SliceBound::kBudgetOnly;
    } else {
      throw HttpError{400, "query 'bound' must be length-pruned or budget-only"};
    }
  }
  auto s = reachable_slice(inst.t_initial, inst.t_final, opts);
  return {200, slice_to_json(s)};
}

Response Service::shortest(const Instance& inst, const Request& req) const {
  SearchOptions opts;
  opts.max_sequences = static_cast<std::size_t>(
      query_int(req, "max_sequences", static_cast<int>(limits_.max_sequences), 1, static_cast<int>(limits_.max_sequences)));
  opts.restrict_parking_to_hull = query_flag(req, "hull_parking_only");
  opts.compatible_only = query_flag(req, "compatible_only");
  opts.node_cap = limits_.search_node_cap;
  auto r = shortest_sequences(inst.t_initial, inst.t_final, opts);
  if (r.status == SearchStatus::kInconclusive) return error_reply(503, "search cap reached: " + r.reason);
  json out;
  out["status"] = to_string(r.status);
  out["optimum"] = r.optimum ? json(*r.optimum) : json(nullptr);
  out["count"] = r.count;
  out["lower_bound"] = lower_bound(inst.t_initial, inst.t_final);
  json seqs = json::array();
  for (const auto& s : r.sequences) {
    std::size_t longest = 0;
    for (const auto& ch : chain_decomposition(s)) longest = std::max(longest, ch.length());
    seqs.push_back({{"moves", to_string(s)},
                    {"nonperfect", nonperfect_count(s, inst.t_final)},
                    {"max_trace_length", longest},
                    {"hull_parking_only", hull_parking_only(s, inst.t_initial, inst.t_final)}});
  }
  out["sequences"] = seqs;
  return reply(out);
}

std::vector<Instance> load_corpus(const std::string& dir) {
  std::vector<Instance> out;
  if (dir.empty()) {
    for (const auto& name : bundled_names()) out.push_back(bundled(name));
    return out;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(load_instance(f.string()));
  return out;
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  auto bridge = [&service](const httplib::Request& hreq, httplib::Response& hres) {
    Request req{hreq.method, hreq.path, {}, hreq.body};
    for (const auto& [k, v] : hreq.params) req.query[k] = v;
    auto res = service.handle(req);
    hres.status = res.status;
    hres.set_header("Access-Control-Allow-Origin", "*");
    hres.set_content(res.body, "application/json");
  };
  impl_->server.Get(R"(/instances.*)", bridge);
  impl_->server.Post(R"(/instances.*)", bridge);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port = impl_->server.bind_to_any_port(host);
    if (port < 0) throw Error("cannot bind " + host);
    return port;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

bool HttpServer::running() const { return impl_->server.is_running(); }

void run_server(const Service& service, const std::string& host, int port) {
  HttpServer server(service);
  server.bind(host, port);
  server.listen();
}

}  // namespace treeflip
