#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace treeflip {

/// Largest convex set supported. Chord ids are dense in [0, kMaxChords).
inline constexpr int kMaxPoints = 32;
inline constexpr int kMaxChords = kMaxPoints * (kMaxPoints - 1) / 2;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Points in convex position, labeled 0..n-1 counterclockwise.
class ConvexSet {
 public:
  explicit ConvexSet(int n) : n_(n) {
    if (n < 3 || n > kMaxPoints)
      throw Error("convex set size must be in [3, " + std::to_string(kMaxPoints) + "], got " +
                  std::to_string(n));
  }
  int size() const { return n_; }

 private:
  int n_;
};

/// A segment between two labels, stored with a < b.
struct Chord {
  int a = 0;
  int b = 0;

  constexpr Chord() = default;
  constexpr Chord(int u, int v) : a(u < v ? u : v), b(u < v ? v : u) {}

  /// Dense id independent of n: b(b-1)/2 + a.
  constexpr int id() const { return b * (b - 1) / 2 + a; }
  static Chord from_id(int id);

  constexpr bool has_endpoint(int v) const { return a == v || b == v; }
  constexpr bool shares_endpoint(const Chord& o) const {
    return has_endpoint(o.a) || has_endpoint(o.b);
  }

  friend constexpr bool operator==(const Chord&, const Chord&) = default;
  friend constexpr auto operator<=>(const Chord&, const Chord&) = default;

  std::string str() const { return std::to_string(a) + "-" + std::to_string(b); }
};

/// Throws unless 0 <= a < b < n.
void check_chord(int n, const Chord& c);

/// Strict cyclic interleaving; chords sharing an endpoint never cross.
constexpr bool chords_cross(const Chord& c1, const Chord& c2) {
  return (c1.a < c2.a && c2.a < c1.b && c1.b < c2.b) ||
         (c2.a < c1.a && c1.a < c2.b && c2.b < c1.b);
}
bool chords_cross(int n, const Chord& c1, const Chord& c2);

constexpr bool is_hull_edge(int n, const Chord& c) {
  return c.b == c.a + 1 || (c.a == 0 && c.b == n - 1);
}
bool is_hull_edge_checked(int n, const Chord& c);

/// Fixed-width bitset over chord ids.
class ChordSet {
 public:
  static constexpr int kWords = (kMaxChords + 63) / 64;

  constexpr ChordSet() = default;

  void insert(const Chord& c) { insert_id(c.id()); }
  void erase(const Chord& c) { erase_id(c.id()); }
  bool contains(const Chord& c) const { return contains_id(c.id()); }

  void insert_id(int id) { words_[id >> 6] |= (uint64_t{1} << (id & 63)); }
  void erase_id(int id) { words_[id >> 6] &= ~(uint64_t{1} << (id & 63)); }
  bool contains_id(int id) const { return (words_[id >> 6] >> (id & 63)) & 1; }

  int size() const {
    int s = 0;
    for (auto w : words_) s += std::popcount(w);
    return s;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  /// |this ∩ other| without materializing the intersection.
  int count_common(const ChordSet& o) const {
    int s = 0;
    for (int i = 0; i < kWords; ++i) s += std::popcount(words_[i] & o.words_[i]);
    return s;
  }

  ChordSet operator&(const ChordSet& o) const {
    ChordSet r;
    for (int i = 0; i < kWords; ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }
  ChordSet operator|(const ChordSet& o) const {
    ChordSet r;
    for (int i = 0; i < kWords; ++i) r.words_[i] = words_[i] | o.words_[i];
    return r;
  }
  /// Set difference.
  ChordSet operator-(const ChordSet& o) const {
    ChordSet r;
    for (int i = 0; i < kWords; ++i) r.words_[i] = words_[i] & ~o.words_[i];
    return r;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (int i = 0; i < kWords; ++i) {
      uint64_t w = words_[i];
      while (w) {
        int bit = std::countr_zero(w);
        f(Chord::from_id(i * 64 + bit));
        w &= w - 1;
      }
    }
  }

  /// Chords in ascending (a, b) order.
  std::vector<Chord> sorted() const;

  std::size_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const ChordSet&, const ChordSet&) = default;
  friend auto operator<=>(const ChordSet&, const ChordSet&) = default;

 private:
  std::array<uint64_t, kWords> words_{};
};

/// Chords strictly crossing c, independent of n.
const ChordSet& crossing_mask(const Chord& c);

struct ChordSetHash {
  std::size_t operator()(const ChordSet& s) const { return s.hash(); }
};

}  // namespace treeflip

template <>
struct std::hash<treeflip::ChordSet> {
  std::size_t operator()(const treeflip::ChordSet& s) const { return s.hash(); }
};
