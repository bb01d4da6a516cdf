#pragma once

// Brute-force reference implementations used as test oracles. They work on explicit
// coordinates and edge lists and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Edge = std::pair<int, int>;
using Tree = std::set<Edge>;

inline Edge edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

struct Point {
  double x, y;
};

inline Point point(int n, int i) {
  const double t = 2 * M_PI * i / n;
  return {std::cos(t), std::sin(t)};
}

inline double orient(Point a, Point b, Point c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

// Proper intersection of two segments between points on a circle.
inline bool segments_cross(int n, Edge e, Edge f) {
  if (e.first == f.first || e.first == f.second || e.second == f.first || e.second == f.second) return false;
  Point a = point(n, e.first), b = point(n, e.second), c = point(n, f.first), d = point(n, f.second);
  double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

inline bool connected(int n, const Tree& t) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : t) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n;
}

inline bool is_plane_tree(int n, const Tree& t) {
  if (static_cast<int>(t.size()) != n - 1 || !connected(n, t)) return false;
  for (auto i = t.begin(); i != t.end(); ++i)
    for (auto j = std::next(i); j != t.end(); ++j)
      if (segments_cross(n, *i, *j)) return false;
  return true;
}

inline std::vector<Edge> all_edges(int n) {
  std::vector<Edge> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out.push_back({a, b});
  return out;
}

// Every (n-1)-subset of the complete graph, filtered.
inline std::vector<Tree> all_plane_trees(int n) {
  auto edges = all_edges(n);
  const int m = static_cast<int>(edges.size());
  std::vector<Tree> out;
  std::vector<int> pick(n - 1);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Tree t;
    for (int i : pick) t.insert(edges[i]);
    if (is_plane_tree(n, t)) out.push_back(t);
    int k = n - 2;
    while (k >= 0 && pick[k] == m - (n - 1) + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < n - 1; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

inline std::vector<std::pair<Edge, Edge>> flips(int n, const Tree& t) {
  std::vector<std::pair<Edge, Edge>> out;
  for (auto e : t)
    for (auto f : all_edges(n)) {
      if (t.count(f)) continue;
      Tree u = t;
      u.erase(e);
      u.insert(f);
      if (is_plane_tree(n, u)) out.push_back({e, f});
    }
  return out;
}

struct Distances {
  std::map<Tree, int> dist;
  std::map<Tree, uint64_t> paths;  // number of shortest paths from the source
};

inline Distances bfs(int n, const Tree& from) {
  Distances d;
  d.dist[from] = 0;
  d.paths[from] = 1;
  std::deque<Tree> q{from};
  while (!q.empty()) {
    Tree t = q.front();
    q.pop_front();
    for (auto [e, f] : flips(n, t)) {
      Tree u = t;
      u.erase(e);
      u.insert(f);
      auto it = d.dist.find(u);
      if (it == d.dist.end()) {
        d.dist[u] = d.dist[t] + 1;
        d.paths[u] = d.paths[t];
        q.push_back(u);
      } else if (it->second == d.dist[t] + 1) {
        d.paths[u] += d.paths[t];
      }
    }
  }
  return d;
}

}  // namespace oracle
