#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"

namespace rpzf {

// A blue/white coloring of n vertices, packed into 64-bit words so membership
// and popcount are O(1) for n <= 64 (and O(n/64) beyond).
class ColoringState {
 public:
  explicit ColoringState(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64, 0) {
    if (n < 1) throw DomainError("coloring: vertex count must be positive");
  }

  static ColoringState from_mask(int n, std::uint64_t mask) {
    if (n > 64) throw DomainError("coloring: from_mask requires n <= 64");
    ColoringState c(n);
    if (n < 64 && (mask >> n) != 0) throw DomainError("coloring: mask has bits beyond vertex count");
    c.words_[0] = mask;
    return c;
  }

  static ColoringState from_vertices(int n, const std::vector<int>& blue) {
    ColoringState c(n);
    for (int v : blue) c.add(v);
    return c;
  }

  int vertex_count() const { return n_; }

  bool contains(int v) const {
    check(v);
    return (words_[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1ULL;
  }

  void add(int v) {
    check(v);
    words_[static_cast<std::size_t>(v) / 64] |= 1ULL << (v % 64);
  }

  void remove(int v) {
    check(v);
    words_[static_cast<std::size_t>(v) / 64] &= ~(1ULL << (v % 64));
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  // Count of blue vertices with index in [0, k).
  int count_below(int k) const {
    int c = 0;
    int full = k / 64;
    for (int i = 0; i < full; ++i) c += std::popcount(words_[static_cast<std::size_t>(i)]);
    if (k % 64) c += std::popcount(words_[static_cast<std::size_t>(full)] & ((1ULL << (k % 64)) - 1));
    return c;
  }

  std::uint64_t low_word() const { return words_[0]; }

  bool operator==(const ColoringState& o) const { return n_ == o.n_ && words_ == o.words_; }

 private:
  void check(int v) const {
    if (v < 0 || v >= n_) throw DomainError("coloring: vertex " + std::to_string(v) + " out of range");
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

enum class SpaceKind { full, collapsed_complete, collapsed_star, collapsed_bipartite };

// Kind-specific payload of one state.
//   full:                mask = the blue set (n <= 64)
//   collapsed_complete:  a = number of blue vertices
//   collapsed_star:      a = 1 if the universal vertex is blue, b = blue leaf count
//   collapsed_bipartite: a = blue count in part U, b = blue count in part V
struct StateDescriptor {
  std::uint64_t mask = 0;
  int a = 0;
  int b = 0;
};

inline constexpr int kFullEnumerationDefaultCap = 14;

// Properly ordered state space: the all-white state is S_0, blue counts are
// nondecreasing, and the all-blue state is S_s.  Ties within a blue count are
// broken deterministically (full: ascending mask; star: white-center state
// first; bipartite: ascending (b_U, b_V) lexicographically).
class StateSpace {
 public:
  SpaceKind kind() const { return kind_; }
  int vertex_count() const { return n_; }
  int size() const { return static_cast<int>(states_.size()); }
  int last() const { return size() - 1; }
  const StateDescriptor& state(int i) const { return states_[static_cast<std::size_t>(i)]; }
  int blue_count(int i) const { return blue_count_[static_cast<std::size_t>(i)]; }
  int part_u() const { return part_u_; }
  int part_v() const { return part_v_; }

  // Total map from colorings to state indices.
  int classify(const ColoringState& c) const {
    if (c.vertex_count() != n_) throw DomainError("state space: coloring size mismatch");
    switch (kind_) {
      case SpaceKind::full: {
        std::uint64_t m = c.low_word();
        int pc = c.count();
        auto lo = states_.begin() + offsets_[static_cast<std::size_t>(pc)];
        auto hi = states_.begin() + offsets_[static_cast<std::size_t>(pc) + 1];
        auto it = std::lower_bound(lo, hi, m, [](const StateDescriptor& s, std::uint64_t v) { return s.mask < v; });
        return static_cast<int>(it - states_.begin());
      }
      case SpaceKind::collapsed_complete:
        return c.count();
      case SpaceKind::collapsed_star: {
        int cu = c.contains(0) ? 1 : 0;
        int leaves = c.count() - cu;
        return index_table_[static_cast<std::size_t>(cu) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(leaves)];
      }
      case SpaceKind::collapsed_bipartite: {
        int bu = c.count_below(part_u_);
        int bv = c.count() - bu;
        return index_table_[static_cast<std::size_t>(bu) * (static_cast<std::size_t>(part_v_) + 1) + static_cast<std::size_t>(bv)];
      }
    }
    throw DomainError("state space: unknown kind");
  }

  // A coloring whose classify image is state i (canonical choice: lowest indices blue).
  ColoringState representative(int i) const {
    if (i < 0 || i >= size()) throw DomainError("state space: state index out of range");
    const StateDescriptor& sd = states_[static_cast<std::size_t>(i)];
    ColoringState c(n_);
    switch (kind_) {
      case SpaceKind::full:
        for (int v = 0; v < n_; ++v)
          if ((sd.mask >> v) & 1ULL) c.add(v);
        return c;
      case SpaceKind::collapsed_complete:
        for (int v = 0; v < sd.a; ++v) c.add(v);
        return c;
      case SpaceKind::collapsed_star:
        if (sd.a) c.add(0);
        for (int v = 1; v <= sd.b; ++v) c.add(v);
        return c;
      case SpaceKind::collapsed_bipartite:
        for (int v = 0; v < sd.a; ++v) c.add(v);
        for (int v = 0; v < sd.b; ++v) c.add(part_u_ + v);
        return c;
    }
    throw DomainError("state space: unknown kind");
  }

  friend StateSpace enumerate_full(const Graph& g, int cap);
  friend StateSpace collapsed_complete(int n);
  friend StateSpace collapsed_star(int n);
  friend StateSpace collapsed_bipartite(int m, int n);

 private:
  StateSpace() = default;

  SpaceKind kind_ = SpaceKind::full;
  int n_ = 0;
  int part_u_ = 0, part_v_ = 0;  // bipartite part sizes m, n
  std::vector<StateDescriptor> states_;
  std::vector<int> blue_count_;
  std::vector<int> offsets_;      // full: first state index per blue count
  std::vector<int> index_table_;  // collapsed star/bipartite: payload -> index
};

// All 2^n colorings, sorted by (blue count, mask).  The cap guards the
// exponential blowup; 14 (16384 states) is the practical dense-matrix ceiling.
inline StateSpace enumerate_full(const Graph& g, int cap = kFullEnumerationDefaultCap) {
  int n = g.vertex_count();
  if (cap > 64) throw SizeError("full enumeration: cap cannot exceed 64");
  if (n > cap)
    throw SizeError("full enumeration: graph has " + std::to_string(n) + " vertices, cap is " + std::to_string(cap));
  StateSpace ss;
  ss.kind_ = SpaceKind::full;
  ss.n_ = n;
  std::size_t total = std::size_t{1} << n;
  ss.states_.resize(total);
  ss.blue_count_.resize(total);
  ss.offsets_.assign(static_cast<std::size_t>(n) + 2, 0);
  for (std::uint64_t m = 0; m < total; ++m) ++ss.offsets_[static_cast<std::size_t>(std::popcount(m)) + 1];
  for (std::size_t k = 1; k < ss.offsets_.size(); ++k) ss.offsets_[k] += ss.offsets_[k - 1];
  std::vector<int> cursor(ss.offsets_.begin(), ss.offsets_.end() - 1);
  for (std::uint64_t m = 0; m < total; ++m) {
    int pc = std::popcount(m);
    int idx = cursor[static_cast<std::size_t>(pc)]++;
    ss.states_[static_cast<std::size_t>(idx)] = StateDescriptor{m, pc, 0};
    ss.blue_count_[static_cast<std::size_t>(idx)] = pc;
  }
  return ss;
}

// n+1 states indexed by blue count (valid for complete graphs).
inline StateSpace collapsed_complete(int n) {
  if (n < 2) throw DomainError("collapsed complete space: n must be at least 2");
  StateSpace ss;
  ss.kind_ = SpaceKind::collapsed_complete;
  ss.n_ = n;
  for (int b = 0; b <= n; ++b) {
    ss.states_.push_back(StateDescriptor{0, b, 0});
    ss.blue_count_.push_back(b);
  }
  return ss;
}

// 2n states indexed by (universal vertex blue?, blue leaf count).  Within a
// blue count, the white-center state precedes the blue-center state.
inline StateSpace collapsed_star(int n) {
  if (n < 3) throw DomainError("collapsed star space: n must be at least 3");
  StateSpace ss;
  ss.kind_ = SpaceKind::collapsed_star;
  ss.n_ = n;
  ss.index_table_.assign(2 * static_cast<std::size_t>(n), -1);
  for (int cnt = 0; cnt <= n; ++cnt) {
    for (int cu = 0; cu <= 1; ++cu) {
      int leaves = cnt - cu;
      if (leaves < 0 || leaves > n - 1) continue;
      ss.index_table_[static_cast<std::size_t>(cu) * static_cast<std::size_t>(n) + static_cast<std::size_t>(leaves)] =
          static_cast<int>(ss.states_.size());
      ss.states_.push_back(StateDescriptor{0, cu, leaves});
      ss.blue_count_.push_back(cnt);
    }
  }
  return ss;
}

// (m+1)(n+1) states indexed by per-part blue counts (valid for complete
// bipartite graphs with parts [0,m) and [m,m+n)).
inline StateSpace collapsed_bipartite(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("collapsed bipartite space: part sizes must be at least 1");
  StateSpace ss;
  ss.kind_ = SpaceKind::collapsed_bipartite;
  ss.n_ = m + n;
  ss.part_u_ = m;
  ss.part_v_ = n;
  ss.index_table_.assign((static_cast<std::size_t>(m) + 1) * (static_cast<std::size_t>(n) + 1), -1);
  for (int cnt = 0; cnt <= m + n; ++cnt) {
    for (int bu = 0; bu <= std::min(m, cnt); ++bu) {
      int bv = cnt - bu;
      if (bv < 0 || bv > n) continue;
      ss.index_table_[static_cast<std::size_t>(bu) * (static_cast<std::size_t>(n) + 1) + static_cast<std::size_t>(bv)] =
          static_cast<int>(ss.states_.size());
      ss.states_.push_back(StateDescriptor{0, bu, bv});
      ss.blue_count_.push_back(cnt);
    }
  }
  return ss;
}

}  // namespace rpzf
