#pragma once

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/linalg.hpp"
#include "rpzf/numeric.hpp"
#include "rpzf/state_space.hpp"

namespace rpzf {

enum class Variant { sarpzf, darpzf };

inline std::string variant_name(Variant v) { return v == Variant::sarpzf ? "sarpzf" : "darpzf"; }

// Probability that the blue set forces white vertex w this round:
// 1 - prod over blue neighbors x of w of (1 - |N[x] cap blue| / deg x),
// where N[x] is the closed neighborhood.  Each factor lies in [0,1] because
// w itself is a white neighbor of x, so |N[x] cap blue| <= deg x.
inline double force_probability(const Graph& g, const ColoringState& blue, int w) {
  if (blue.vertex_count() != g.vertex_count()) throw DomainError("force probability: coloring size mismatch");
  if (w < 0 || w >= g.vertex_count()) throw DomainError("force probability: vertex out of range");
  if (blue.contains(w)) throw DomainError("force probability: target vertex is already blue");
  double avoid = 1.0;
  for (int x : g.neighbors(w)) {
    if (!blue.contains(x)) continue;
    int closed = 1;  // x itself
    for (int y : g.neighbors(x))
      if (blue.contains(y)) ++closed;
    double factor = 1.0 - static_cast<double>(closed) / static_cast<double>(g.degree(x));
    assert(factor >= 0.0 && factor <= 1.0);
    avoid *= factor;
  }
  return 1.0 - avoid;
}

namespace detail {

inline void check_space_matches_graph(const Graph& g, const StateSpace& ss) {
  if (ss.vertex_count() != g.vertex_count())
    throw DomainError("chain: state space and graph disagree on vertex count");
  switch (ss.kind()) {
    case SpaceKind::full:
      break;
    case SpaceKind::collapsed_complete:
      if (!is_complete(g)) throw DomainError("chain: collapsed complete space requires a complete graph");
      break;
    case SpaceKind::collapsed_star:
      if (!is_star_centered_at_zero(g))
        throw DomainError("chain: collapsed star space requires a star with universal vertex 0");
      break;
    case SpaceKind::collapsed_bipartite:
      if (!is_complete_bipartite(g, ss.part_u(), ss.part_v()))
        throw DomainError("chain: collapsed bipartite space requires complete bipartite parts [0,m) and [m,m+n)");
      break;
  }
}

// Forcing rows for the full space: white vertices are forced independently,
// so the row is the product measure over the per-vertex force probabilities.
inline Matrix build_forcing_full(const Graph& g, const StateSpace& ss) {
  int n = g.vertex_count();
  int s1 = ss.size();
  Matrix f(s1, s1);
  std::vector<int> whites;
  std::vector<double> pi;
  std::vector<double> prob_stack;
  for (int i = 0; i < s1; ++i) {
    std::uint64_t mask = ss.state(i).mask;
    ColoringState blue = ss.representative(i);
    whites.clear();
    pi.clear();
    for (int w = 0; w < n; ++w)
      if (!((mask >> w) & 1ULL)) {
        whites.push_back(w);
        pi.push_back(force_probability(g, blue, w));
      }
    int nw = static_cast<int>(whites.size());
    // Walk all 2^nw forced subsets with an incremental product.
    std::uint64_t sub = 0;
    std::uint64_t limit = 1ULL << nw;
    for (sub = 0; sub < limit; ++sub) {
      double pr = 1.0;
      std::uint64_t outcome = mask;
      for (int k = 0; k < nw; ++k) {
        if ((sub >> k) & 1ULL) {
          pr *= pi[static_cast<std::size_t>(k)];
          outcome |= 1ULL << whites[static_cast<std::size_t>(k)];
        } else {
          pr *= 1.0 - pi[static_cast<std::size_t>(k)];
        }
        if (pr == 0.0) break;
      }
      if (pr == 0.0) continue;
      f(i, ss.classify(ColoringState::from_mask(n, outcome))) += pr;
    }
  }
  (void)prob_stack;
  return f;
}

// Forcing rows for collapsed spaces: per-vertex force probabilities are
// constant within each orbit (whites of a complete graph, star leaves, or one
// bipartite part), so forced counts are binomial and aggregate exactly.
inline Matrix build_forcing_collapsed(const Graph& g, const StateSpace& ss) {
  int s1 = ss.size();
  Matrix f(s1, s1);
  for (int i = 0; i < s1; ++i) {
    ColoringState rep = ss.representative(i);
    const StateDescriptor& sd = ss.state(i);
    switch (ss.kind()) {
      case SpaceKind::collapsed_complete: {
        int n = ss.vertex_count();
        int b = sd.a;
        if (b == n) {
          f(i, i) = 1.0;
          break;
        }
        if (b == 0) {
          f(i, i) = 1.0;
          break;
        }
        double pi = force_probability(g, rep, b);  // vertex b is white in the representative
        for (int k = 0; k <= n - b; ++k) f(i, i + k) += binomial_pmf(n - b, k, pi);
        break;
      }
      case SpaceKind::collapsed_star: {
        int n = ss.vertex_count();
        int cu = sd.a, leaves = sd.b;
        if (cu == 0) {
          if (leaves == 0) {
            f(i, i) = 1.0;
          } else {
            // Every blue leaf forces the universal vertex with probability 1;
            // white leaves have no blue neighbor.
            double pic = force_probability(g, rep, 0);
            ColoringState with_center = rep;
            with_center.add(0);
            f(i, ss.classify(with_center)) += pic;
            f(i, i) += 1.0 - pic;
          }
        } else {
          int nw = n - 1 - leaves;
          if (nw == 0) {
            f(i, i) = 1.0;
            break;
          }
          double pi = force_probability(g, rep, leaves + 1);  // first white leaf
          for (int k = 0; k <= nw; ++k) {
            ColoringState out(n);
            out.add(0);
            for (int v = 1; v <= leaves + k; ++v) out.add(v);
            f(i, ss.classify(out)) += binomial_pmf(nw, k, pi);
          }
        }
        break;
      }
      case SpaceKind::collapsed_bipartite: {
        int m = ss.part_u(), nv = ss.part_v();
        int bu = sd.a, bv = sd.b;
        double pi_u = bu < m ? force_probability(g, rep, bu) : 0.0;
        double pi_v = bv < nv ? force_probability(g, rep, m + bv) : 0.0;
        for (int ku = 0; ku <= m - bu; ++ku) {
          double pu = binomial_pmf(m - bu, ku, pi_u);
          if (pu == 0.0) continue;
          for (int kv = 0; kv <= nv - bv; ++kv) {
            double pv = binomial_pmf(nv - bv, kv, pi_v);
            if (pv == 0.0) continue;
            ColoringState out(m + nv);
            for (int v = 0; v < bu + ku; ++v) out.add(v);
            for (int v = 0; v < bv + kv; ++v) out.add(m + v);
            f(i, ss.classify(out)) += pu * pv;
          }
        }
        break;
      }
      case SpaceKind::full:
        throw DomainError("chain: internal dispatch error");
    }
  }
  return f;
}

}  // namespace detail

// Phase-1 (forcing) transition matrix over the state space.  Row i is the
// distribution of the post-forcing state from S_i; blue vertices never turn
// white in this phase, and the all-white row is a unit row.
inline Matrix build_forcing(const Graph& g, const StateSpace& ss) {
  detail::check_space_matches_graph(g, ss);
  if (ss.kind() == SpaceKind::full) return detail::build_forcing_full(g, ss);
  return detail::build_forcing_collapsed(g, ss);
}

// Phase-2 (reversion) transition matrix: every blue vertex independently
// turns white with probability p.  Under darpzf the all-blue state skips
// reversion and is absorbing.
inline Matrix build_reversion(const StateSpace& ss, double p, Variant variant) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chain: reversion probability must lie strictly inside (0,1)");
  int s1 = ss.size();
  int s = ss.last();
  Matrix r(s1, s1);
  switch (ss.kind()) {
    case SpaceKind::full: {
      int n = ss.vertex_count();
      for (int i = 0; i < s1; ++i) {
        std::uint64_t mask = ss.state(i).mask;
        int bi = ss.blue_count(i);
        if (variant == Variant::darpzf && i == s) {
          r(i, i) = 1.0;
          continue;
        }
        // every subset of the blue set survives
        std::uint64_t sub = mask;
        while (true) {
          int bj = std::popcount(sub);
          r(i, ss.classify(ColoringState::from_mask(n, sub))) =
              pow0(p, bi - bj) * pow0(1.0 - p, bj);
          if (sub == 0) break;
          sub = (sub - 1) & mask;
        }
      }
      break;
    }
    case SpaceKind::collapsed_complete: {
      for (int i = 0; i < s1; ++i) {
        if (variant == Variant::darpzf && i == s) {
          r(i, i) = 1.0;
          continue;
        }
        for (int j = 0; j <= i; ++j) r(i, j) = binomial_pmf(i, j, 1.0 - p);
      }
      break;
    }
    case SpaceKind::collapsed_star: {
      int n = ss.vertex_count();
      for (int i = 0; i < s1; ++i) {
        int cu = ss.state(i).a, leaves = ss.state(i).b;
        if (variant == Variant::darpzf && i == s) {
          r(i, i) = 1.0;
          continue;
        }
        for (int cu2 = 0; cu2 <= cu; ++cu2) {
          double fc = cu == 0 ? 1.0 : (cu2 == 1 ? 1.0 - p : p);
          for (int l2 = 0; l2 <= leaves; ++l2) {
            ColoringState out(n);
            if (cu2) out.add(0);
            for (int v = 1; v <= l2; ++v) out.add(v);
            r(i, ss.classify(out)) += fc * binomial_pmf(leaves, l2, 1.0 - p);
          }
        }
      }
      break;
    }
    case SpaceKind::collapsed_bipartite: {
      int m = ss.part_u(), nv = ss.part_v();
      for (int i = 0; i < s1; ++i) {
        int bu = ss.state(i).a, bv = ss.state(i).b;
        if (variant == Variant::darpzf && i == s) {
          r(i, i) = 1.0;
          continue;
        }
        for (int u2 = 0; u2 <= bu; ++u2) {
          double fu = binomial_pmf(bu, u2, 1.0 - p);
          if (fu == 0.0) continue;
          for (int v2 = 0; v2 <= bv; ++v2) {
            ColoringState out(m + nv);
            for (int v = 0; v < u2; ++v) out.add(v);
            for (int v = 0; v < v2; ++v) out.add(m + v);
            r(i, ss.classify(out)) += fu * binomial_pmf(bv, v2, 1.0 - p);
          }
        }
      }
      break;
    }
  }
  return r;
}

// One full round M = F R together with its absorbing/transient partition.
// sarpzf: S_0 is the unique absorbing state; Q ranges over states 1..s and
//         `die` holds the one-step absorption probabilities into S_0.
// darpzf: S_0 and S_s are absorbing; Q ranges over 1..s-1, `die` feeds S_0
//         and `force` feeds S_s.
struct TransitionBundle {
  Variant variant = Variant::sarpzf;
  double p = 0.0;
  Matrix forcing;    // F
  Matrix reversion;  // R
  Matrix step;       // M = F R
  Matrix q;          // transient block of M
  std::vector<double> die;
  std::vector<double> force;  // empty under sarpzf

  int transient_count() const { return q.rows(); }
};

namespace detail {

inline constexpr double kRowSumTolerance = 1e-10;
inline constexpr double kEntrySlack = 1e-12;

inline void validate_bundle(const StateSpace& ss, const TransitionBundle& b) {
  int s1 = ss.size();
  int s = ss.last();
  for (int i = 0; i < s1; ++i) {
    double sum = b.step.row_sum(i);
    if (std::fabs(sum - 1.0) > kRowSumTolerance)
      throw NumericalError("chain: step matrix row " + std::to_string(i) + " sums to " + format_double(sum));
    for (int j = 0; j < s1; ++j) {
      double v = b.step(i, j);
      if (v < -kEntrySlack || v > 1.0 + kEntrySlack)
        throw NumericalError("chain: step matrix entry out of [0,1] at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
    }
  }
  auto expect_unit_row = [&](int i) {
    for (int j = 0; j < s1; ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::fabs(b.step(i, j) - want) > kEntrySlack)
        throw NumericalError("chain: absorbing row " + std::to_string(i) + " is not a unit row");
    }
  };
  expect_unit_row(0);
  if (b.variant == Variant::darpzf) expect_unit_row(s);
  // Strictly substochastic transient block; allow rounding slack since the
  // true absorbing mass can sit far below double resolution on large chains.
  for (int i = 0; i < b.q.rows(); ++i) {
    double sum = b.q.row_sum(i);
    if (sum >= 1.0 + kEntrySlack)
      throw NumericalError("chain: transient block row " + std::to_string(i) + " has row sum " + format_double(sum));
  }
}

}  // namespace detail

inline TransitionBundle build_bundle(const Graph& g, const StateSpace& ss, double p, Variant variant) {
  TransitionBundle b;
  b.variant = variant;
  b.p = p;
  b.forcing = build_forcing(g, ss);
  b.reversion = build_reversion(ss, p, variant);
  b.step = b.forcing * b.reversion;
  int s1 = ss.size();
  int s = ss.last();
  if (s1 < 2) throw DomainError("chain: state space too small");
  if (variant == Variant::sarpzf) {
    b.q = b.step.block(1, 1, s1, s1);
    b.die.resize(static_cast<std::size_t>(s));
    for (int i = 1; i <= s; ++i) b.die[static_cast<std::size_t>(i - 1)] = b.step(i, 0);
  } else {
    b.q = b.step.block(1, 1, s, s);
    b.die.resize(static_cast<std::size_t>(s - 1));
    b.force.resize(static_cast<std::size_t>(s - 1));
    for (int i = 1; i < s; ++i) {
      b.die[static_cast<std::size_t>(i - 1)] = b.step(i, 0);
      b.force[static_cast<std::size_t>(i - 1)] = b.step(i, s);
    }
  }
  detail::validate_bundle(ss, b);
  return b;
}

// One-round pushforward of a distribution over states: returns dist * M.
inline std::vector<double> step_distribution(const std::vector<double>& dist, const TransitionBundle& b) {
  int s1 = b.step.rows();
  if (static_cast<int>(dist.size()) != s1) throw DomainError("step distribution: size mismatch");
  std::vector<double> out(static_cast<std::size_t>(s1), 0.0);
  for (int i = 0; i < s1; ++i) {
    double d = dist[static_cast<std::size_t>(i)];
    if (d == 0.0) continue;
    for (int j = 0; j < s1; ++j) out[static_cast<std::size_t>(j)] += d * b.step(i, j);
  }
  return out;
}

}  // namespace rpzf
