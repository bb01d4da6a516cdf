#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "treeflip/instances.hpp"

namespace treeflip {

struct ServiceLimits {
  uint64_t slice_node_cap = 200'000;
  uint64_t slice_path_cap = 20'000'000;
  uint64_t search_node_cap = 50'000'000;
  std::size_t max_sequences = 10'000;
  int max_budget = 3;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
};

/// Stateless JSON endpoints over a fixed set of instances.
///   GET  /instances
///   GET  /instances/{name}
///   GET  /instances/{name}/tree?key=K          (default: the initial tree)
///   POST /instances/{name}/flip                 {"tree": K, "removed": [a,b], "inserted": [c,d]}
///   GET  /instances/{name}/slice?budget=B&first_flip=F&bound=length-pruned|budget-only
///   GET  /instances/{name}/shortest?max_sequences=M&hull_parking_only=0|1&compatible_only=0|1
/// Errors: 400 malformed, 404 unknown instance or tree, 409 illegal flip, 503 cap exceeded.
class Service {
 public:
  explicit Service(std::vector<Instance> instances, ServiceLimits limits = {});

  Response handle(const Request& req) const;

 private:
  Response list() const;
  Response instance(const Instance& inst) const;
  Response tree(const Instance& inst, const Request& req) const;
  Response flip(const Instance& inst, const Request& req) const;
  Response slice(const Instance& inst, const Request& req) const;
  Response shortest(const Instance& inst, const Request& req) const;

  std::map<std::string, Instance> instances_;
  ServiceLimits limits_;
};

/// Every *.json instance in dir, or the bundled corpus when dir is empty.
std::vector<Instance> load_corpus(const std::string& dir);

/// HTTP front end for a Service. Port 0 binds any free port; bind returns the port.
/// listen blocks until stop is called from another thread.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int bind(const std::string& host, int port);
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving HTTP until the process is stopped.
void run_server(const Service& service, const std::string& host, int port);

}  // namespace treeflip
