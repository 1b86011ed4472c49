#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rpzf/chain.hpp"
#include "rpzf/errors.hpp"
#include "rpzf/linalg.hpp"
#include "rpzf/numeric.hpp"

namespace rpzf {

// Probability that one round of forcing in K_n turns a fixed white vertex
// blue when b vertices are blue: q(n,b) = 1 - (1 - b/(n-1))^b.
// Evaluated in log space so it stays accurate for n up to ~1e6; the b = n
// input is accepted (the value is then only ever used with exponent zero).
inline double kn_force_probability(std::int64_t n, std::int64_t b) {
  require(n >= 2, "kn force probability: need n >= 2");
  require(b >= 0 && b <= n, "kn force probability: need 0 <= b <= n");
  if (b == 0) return 0.0;
  double x = static_cast<double>(b) / static_cast<double>(n - 1);
  if (x > 1.0) return 1.0 - std::pow(1.0 - x, static_cast<double>(b));
  return -std::expm1(static_cast<double>(b) * std::log1p(-x));
}

// One-round forcing kernel of K_n over blue counts 1..n (no reversion):
// entry (i,j) is P[count i -> count j] = C(n-i, j-i) q(n,i)^{j-i} (1-q(n,i))^{n-j}.
inline Matrix kn_forcing_matrix(int n) {
  require(n >= 2, "kn forcing matrix: need n >= 2");
  Matrix k(n, n);
  for (int i = 1; i <= n; ++i) {
    double q = kn_force_probability(n, i);
    for (int j = i; j <= n; ++j) k(i - 1, j - 1) = binomial_pmf(n - i, j - i, q);
  }
  return k;
}

// One-round pmf for the blue count in K_n, reversion included, via the
// "survivors plus converts" decomposition:
//   P_b[X_1 = k] = sum_i C(b,i)(1-p)^i p^{b-i} *
//                  C(n-b, k-i) ((1-p)q)^{k-i} (1 - (1-p)q)^{n-b-k+i}.
// The darpzf variant removes the reversion mass from rounds that forced
// everything and returns it to k = n.
inline double kn_one_step_pmf(std::int64_t n, std::int64_t b, double p, Variant variant, std::int64_t k) {
  require(n >= 2, "kn one-step pmf: need n >= 2");
  require(b >= 1 && b <= n, "kn one-step pmf: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "kn one-step pmf: need p in [0,1]");
  if (k < 0 || k > n) return 0.0;
  double q = kn_force_probability(n, b);
  double conv = (1.0 - p) * q;
  double total = 0.0;
  std::int64_t lo = std::max<std::int64_t>(0, k - (n - b));
  std::int64_t hi = std::min(b, k);
  for (std::int64_t i = lo; i <= hi; ++i) {
    double term = binomial_coefficient(b, i) * pow0(1.0 - p, i) * pow0(p, b - i);
    term *= binomial_coefficient(n - b, k - i) * pow0(conv, k - i) * pow0(1.0 - conv, n - b - (k - i));
    total += term;
  }
  if (variant == Variant::darpzf) {
    double qfull = pow0(q, n - b);  // probability phase 1 forces every white vertex
    total -= binomial_coefficient(n, k) * pow0(1.0 - p, k) * pow0(p, n - k) * qfull;
    if (k == n) total += qfull;
  }
  return total;
}

// Same pmf by conditioning on the post-forcing count instead:
//   P_b[X_1 = k] = sum_i C(n-b, i-b) q^{i-b} (1-q)^{n-i} C(i,k)(1-p)^k p^{i-k}.
// Kept as an algebraically independent route for cross-checks.
inline double kn_one_step_pmf_by_forced_count(std::int64_t n, std::int64_t b, double p, Variant variant,
                                              std::int64_t k) {
  require(n >= 2, "kn one-step pmf: need n >= 2");
  require(b >= 1 && b <= n, "kn one-step pmf: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "kn one-step pmf: need p in [0,1]");
  if (k < 0 || k > n) return 0.0;
  double q = kn_force_probability(n, b);
  double total = 0.0;
  for (std::int64_t i = std::max(b, k); i <= n; ++i) {
    double reach = binomial_coefficient(n - b, i - b) * pow0(q, i - b) * pow0(1.0 - q, n - i);
    double revert = (variant == Variant::darpzf && i == n)
                        ? (k == n ? 1.0 : 0.0)
                        : binomial_coefficient(i, k) * pow0(1.0 - p, k) * pow0(p, i - k);
    total += reach * revert;
  }
  return total;
}

struct OneStepDieOut {
  double exact;  // P_b[X_1 = 0] at the given n
  double limit;  // n -> infinity limit p^b e^{b^2 (p-1)} with b fixed
};

// One-round die-out probability in K_n (all b blues revert and nothing that
// was forced survives), evaluated in log space.
inline OneStepDieOut kn_one_step_dieout(std::int64_t n, std::int64_t b, double p, Variant variant) {
  require(n >= 2, "kn one-step die-out: need n >= 2");
  require(b >= 1 && b <= n, "kn one-step die-out: need 1 <= b <= n");
  require(p > 0.0 && p < 1.0, "kn one-step die-out: need p in (0,1)");
  double q = kn_force_probability(n, b);
  double bd = static_cast<double>(b);
  double surv = p + (1.0 - p) * (1.0 - q);  // a given white vertex ends the round white
  double exact = std::exp(bd * std::log(p) + static_cast<double>(n - b) * std::log(surv));
  if (variant == Variant::darpzf && q > 0.0) {
    exact -= std::exp(static_cast<double>(n) * std::log(p) + static_cast<double>(n - b) * std::log(q));
  }
  double limit = std::exp(bd * std::log(p) + bd * bd * (p - 1.0));
  return OneStepDieOut{exact, limit};
}

// Expected blue count after one round in K_n:
//   sarpzf: (1-p)(b + (n-b) q(n,b));  darpzf adds n p q^{n-b} for the
//   fully-forced rounds that skip reversion.
inline double kn_one_step_expectation(std::int64_t n, std::int64_t b, double p, Variant variant) {
  require(n >= 2, "kn one-step expectation: need n >= 2");
  require(b >= 1 && b <= n, "kn one-step expectation: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "kn one-step expectation: need p in [0,1]");
  double q = kn_force_probability(n, b);
  double e = (1.0 - p) * (static_cast<double>(b) + static_cast<double>(n - b) * q);
  if (variant == Variant::darpzf) e += static_cast<double>(n) * p * pow0(q, n - b);
  return e;
}

// Expected blue count after one round in the star K_{1,n-1} when the center
// plus b-1 leaves are blue: each white leaf is forced with probability
// b/(n-1), and every vertex then survives reversion with probability 1-p.
inline double star_one_step_expectation(std::int64_t n, std::int64_t b, double p, Variant variant) {
  require(n >= 3, "star one-step expectation: need n >= 3");
  require(b >= 1 && b <= n, "star one-step expectation: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "star one-step expectation: need p in [0,1]");
  double leaf = static_cast<double>(b) / static_cast<double>(n - 1);
  double e = (1.0 - p) * (static_cast<double>(b) + static_cast<double>(n - b) * leaf);
  if (variant == Variant::darpzf) e += static_cast<double>(n) * p * pow0(leaf, n - b);
  return e;
}

// Probability that one forcing round in K_{m,m} (per side size part_size)
// turns every white vertex of the far side blue, given b_u blue forcers on
// the near side and b_v blue already on the far side:
//   (1 - (1 - (b_v+1)/part)^{b_u})^{part - b_v}.
inline double bipartite_force_across(std::int64_t part_size, std::int64_t b_u, std::int64_t b_v) {
  require(part_size >= 1, "bipartite force across: need part size >= 1");
  require(b_u >= 0 && b_u <= part_size, "bipartite force across: forcer count out of range");
  require(b_v >= 0 && b_v <= part_size, "bipartite force across: target count out of range");
  if (b_v == part_size) return 1.0;  // nothing left to force
  if (b_u == 0) return 0.0;
  double ratio = static_cast<double>(b_v + 1) / static_cast<double>(part_size);
  double miss_log = static_cast<double>(b_u) * std::log1p(-ratio);  // log (1-ratio)^{b_u}
  if (miss_log == -std::numeric_limits<double>::infinity()) return 1.0;
  return std::exp(static_cast<double>(part_size - b_v) * log1mexp(miss_log));
}

// Probability that one forcing round in K_n turns every white vertex blue:
// q(n,b)^{n-b}, in log space.
inline double kn_full_force_probability(std::int64_t n, std::int64_t b) {
  require(n >= 2, "kn full force: need n >= 2");
  require(b >= 1 && b <= n, "kn full force: need 1 <= b <= n");
  if (b == n) return 1.0;
  double g_log = static_cast<double>(b) * std::log1p(-static_cast<double>(b) / static_cast<double>(n - 1));
  if (g_log == -std::numeric_limits<double>::infinity()) return 1.0;  // b = n-1: q = 1 exactly
  return std::exp(static_cast<double>(n - b) * log1mexp(g_log));
}

// Same quantity for the star with a blue center: each white leaf is forced
// independently with probability b/(n-1), so (b/(n-1))^{n-b}.
inline double star_full_force_probability(std::int64_t n, std::int64_t b) {
  require(n >= 3, "star full force: need n >= 3");
  require(b >= 1 && b <= n, "star full force: need 1 <= b <= n");
  if (b == n) return 1.0;
  return std::exp(static_cast<double>(n - b) *
                  (std::log(static_cast<double>(b)) - std::log(static_cast<double>(n - 1))));
}

// Shortfall of the expected one-round darpzf count below n in K_n:
//   n - E_b[X_1] = (1-p)(n-b) g + n p (1 - (1-g)^{n-b}),  g = (1-b/(n-1))^b.
// The stable route never forms n - E directly (that cancels catastrophically
// once the gap is below ~1e-10 n); the naive route is kept for cross-checks.
inline double kn_expectation_gap(std::int64_t n, std::int64_t b, double p, bool stable = true) {
  require(n >= 2, "kn expectation gap: need n >= 2");
  require(b >= 1 && b <= n, "kn expectation gap: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "kn expectation gap: need p in [0,1]");
  if (!stable) return static_cast<double>(n) - kn_one_step_expectation(n, b, p, Variant::darpzf);
  if (b == n) return 0.0;
  double g_log = static_cast<double>(b) * std::log1p(-static_cast<double>(b) / static_cast<double>(n - 1));
  double g = std::exp(g_log);
  double miss = -std::expm1(static_cast<double>(n - b) * std::log1p(-g));  // 1 - (1-g)^{n-b}
  return (1.0 - p) * static_cast<double>(n - b) * g + static_cast<double>(n) * p * miss;
}

// Star analogue: n - E_b[X_1] = (1-p)(n-b)(1 - b/(n-1)) + n p (1 - (b/(n-1))^{n-b}).
inline double star_expectation_gap(std::int64_t n, std::int64_t b, double p, bool stable = true) {
  require(n >= 3, "star expectation gap: need n >= 3");
  require(b >= 1 && b <= n, "star expectation gap: need 1 <= b <= n");
  require(p >= 0.0 && p <= 1.0, "star expectation gap: need p in [0,1]");
  if (!stable) return static_cast<double>(n) - star_one_step_expectation(n, b, p, Variant::darpzf);
  if (b == n) return 0.0;
  double leaf = static_cast<double>(b) / static_cast<double>(n - 1);
  double miss = -std::expm1(static_cast<double>(n - b) *
                            (std::log(static_cast<double>(b)) - std::log(static_cast<double>(n - 1))));
  return (1.0 - p) * static_cast<double>(n - b) * (1.0 - leaf) + static_cast<double>(n) * p * miss;
}

enum class SweepFamily { complete, bipartite, star };
enum class SweepMetric { expectation_gap, full_force_probability };
enum class StarOffset { constant, log_growth, sqrt_growth };
enum class BipartiteRule { balanced, full_side };

inline const char* sweep_family_name(SweepFamily f) {
  switch (f) {
    case SweepFamily::complete: return "complete";
    case SweepFamily::bipartite: return "bipartite";
    case SweepFamily::star: return "star";
  }
  throw DomainError("unknown sweep family");
}

inline const char* sweep_metric_name(SweepMetric m) {
  switch (m) {
    case SweepMetric::expectation_gap: return "expectation_gap";
    case SweepMetric::full_force_probability: return "full_force_probability";
  }
  throw DomainError("unknown sweep metric");
}

// A sweep evaluates one closed-form metric along a family-specific blue-count
// rule b_n over a grid of sizes, to expose how sharply the rule sits at the
// family's threshold.
struct ThresholdRequest {
  SweepFamily family = SweepFamily::complete;
  SweepMetric metric = SweepMetric::expectation_gap;
  std::vector<std::int64_t> n_grid;
  double p = 0.5;            // reversion probability in the expectation gap
  double exponent = 3.0;     // c in b_n = ceil(sqrt(c n ln n)); bipartite full_side uses it as the log factor
  StarOffset star_offset = StarOffset::constant;
  std::int64_t star_c = 2;   // white-leaf count for the constant star rule
  BipartiteRule bipartite_rule = BipartiteRule::balanced;
};

struct SweepPoint {
  std::int64_t n;
  std::int64_t b;
  double value;
};

struct ThresholdSweep {
  ThresholdRequest request;
  std::string b_rule;  // rendered description of the b_n rule used
  std::vector<SweepPoint> points;
};

namespace detail {

inline std::int64_t sqrt_nlogn_count(std::int64_t n, double c) {
  double b = std::ceil(std::sqrt(c * static_cast<double>(n) * std::log(static_cast<double>(n))));
  auto bi = static_cast<std::int64_t>(b);
  if (bi < 1) bi = 1;
  if (bi > n) bi = n;
  return bi;
}

}  // namespace detail

inline ThresholdSweep threshold_sweep(const ThresholdRequest& req) {
  require(!req.n_grid.empty(), "threshold sweep: empty size grid");
  require(req.p >= 0.0 && req.p <= 1.0, "threshold sweep: need p in [0,1]");
  require(req.exponent > 0.0, "threshold sweep: need a positive exponent");
  ThresholdSweep sweep;
  sweep.request = req;
  switch (req.family) {
    case SweepFamily::complete:
      sweep.b_rule = "b = ceil(sqrt(" + format_double(req.exponent) + " n ln n))";
      break;
    case SweepFamily::star:
      switch (req.star_offset) {
        case StarOffset::constant: sweep.b_rule = "b = n - 1 - " + std::to_string(req.star_c); break;
        case StarOffset::log_growth: sweep.b_rule = "b = n - 1 - ceil(ln n)"; break;
        case StarOffset::sqrt_growth: sweep.b_rule = "b = n - 1 - ceil(sqrt(n))"; break;
      }
      break;
    case SweepFamily::bipartite:
      if (req.metric == SweepMetric::expectation_gap)
        throw DomainError("threshold sweep: no closed-form expectation for bipartite graphs; use full_force_probability");
      sweep.b_rule = req.bipartite_rule == BipartiteRule::balanced
                         ? "b_u = b_v = ceil(sqrt(" + format_double(req.exponent) + " m ln m)) per side of K_{m,m}"
                         : "b_u = m, b_v = ceil(" + format_double(req.exponent) + " ln m) in K_{m,m}";
      break;
  }
  for (std::int64_t n : req.n_grid) {
    SweepPoint pt{n, 0, 0.0};
    switch (req.family) {
      case SweepFamily::complete: {
        require(n >= 2, "threshold sweep: complete family needs n >= 2");
        pt.b = detail::sqrt_nlogn_count(n, req.exponent);
        pt.value = req.metric == SweepMetric::expectation_gap ? kn_expectation_gap(n, pt.b, req.p)
                                                              : kn_full_force_probability(n, pt.b);
        break;
      }
      case SweepFamily::star: {
        std::int64_t white = 0;
        switch (req.star_offset) {
          case StarOffset::constant: white = req.star_c; break;
          case StarOffset::log_growth: white = static_cast<std::int64_t>(std::ceil(std::log(static_cast<double>(n)))); break;
          case StarOffset::sqrt_growth: white = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n)))); break;
        }
        pt.b = n - 1 - white;
        require(pt.b >= 1, "threshold sweep: star rule leaves no blue vertices at this n");
        pt.value = req.metric == SweepMetric::expectation_gap ? star_expectation_gap(n, pt.b, req.p)
                                                              : star_full_force_probability(n, pt.b);
        break;
      }
      case SweepFamily::bipartite: {
        require(n >= 2, "threshold sweep: bipartite family needs part size >= 2");
        if (req.bipartite_rule == BipartiteRule::balanced) {
          pt.b = detail::sqrt_nlogn_count(n, req.exponent);
          double across = bipartite_force_across(n, pt.b, pt.b);
          pt.value = across * across;  // both sides must fill, and the two rounds are independent
        } else {
          auto bv = static_cast<std::int64_t>(std::ceil(req.exponent * std::log(static_cast<double>(n))));
          if (bv > n) bv = n;
          pt.b = bv;
          pt.value = bipartite_force_across(n, n, bv);
        }
        break;
      }
    }
    if (!std::isfinite(pt.value) || pt.value < 0.0)
      throw NumericalError("threshold sweep: metric evaluated to a non-finite or negative value");
    sweep.points.push_back(pt);
  }
  return sweep;
}

inline std::string sweep_to_csv(const ThresholdSweep& sweep) {
  std::string out = "n,b_n,metric_value\n";
  for (const SweepPoint& pt : sweep.points) {
    out += std::to_string(pt.n);
    out += ',';
    out += std::to_string(pt.b);
    out += ',';
    out += format_double(pt.value);
    out += '\n';
  }
  return out;
}

}  // namespace rpzf
