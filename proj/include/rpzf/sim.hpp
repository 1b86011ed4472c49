#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "rpzf/chain.hpp"
#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/linalg.hpp"

namespace rpzf {

struct SimConfig {
  std::vector<int> initial_blue;
  double p = 0.5;
  Variant variant = Variant::darpzf;
  std::int64_t trials = 10000;
  std::int64_t max_rounds = 1000000;
  std::uint64_t seed = 0;
};

enum class TrialOutcome { died_out, fully_forced, censored };

struct TrialResult {
  std::int64_t rounds = 0;
  TrialOutcome outcome = TrialOutcome::censored;
};

struct SimResult {
  SimConfig config;
  std::int64_t died_out = 0;
  std::int64_t fully_forced = 0;
  std::int64_t censored = 0;
  double die_out_fraction = 0.0;
  double se_die_out = 0.0;
  double fully_forced_fraction = 0.0;
  // Mean and standard error of rounds-to-absorption over uncensored trials.
  double mean_absorption_rounds = std::numeric_limits<double>::quiet_NaN();
  double se_absorption_rounds = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// splitmix64 finalizer; bijective, so distinct trial indices give distinct
// seeds and well-separated streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 53-bit uniform in [0,1); fixed construction so results are reproducible
// across standard libraries (std::uniform_real_distribution is not).
inline double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void validate_config(const Graph& g, const SimConfig& cfg) {
  if (cfg.initial_blue.empty()) throw DomainError("simulation: initial blue set is empty");
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw DomainError("simulation: need p strictly inside (0,1)");
  if (cfg.trials < 1) throw DomainError("simulation: need at least one trial");
  if (cfg.max_rounds < 1) throw DomainError("simulation: need at least one round");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : cfg.initial_blue) {
    if (v < 0 || v >= g.vertex_count()) throw DomainError("simulation: initial blue vertex out of range");
    if (seen[static_cast<std::size_t>(v)]) throw DomainError("simulation: duplicate initial blue vertex");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

// One full round (forcing, then reversion unless darpzf just went all-blue),
// in place.  `open_blue` and `forced` are caller-owned scratch.  Forcing
// draws happen for whites with a blue neighbor in ascending vertex order,
// then reversion draws for blues in ascending order, so a fixed RNG stream
// replays the round exactly.
inline int do_round(const Graph& g, std::vector<std::uint8_t>& blue, int blue_count, double p,
                    Variant variant, std::mt19937_64& rng, std::vector<int>& open_blue,
                    std::vector<int>& forced) {
  int n = g.vertex_count();
  open_blue.assign(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    if (!blue[static_cast<std::size_t>(u)]) continue;
    for (int y : g.neighbors(u)) ++open_blue[static_cast<std::size_t>(y)];
  }
  forced.clear();
  for (int w = 0; w < n; ++w) {
    if (blue[static_cast<std::size_t>(w)] || open_blue[static_cast<std::size_t>(w)] == 0) continue;
    double avoid = 1.0;
    for (int x : g.neighbors(w)) {
      if (!blue[static_cast<std::size_t>(x)]) continue;
      double closed = static_cast<double>(open_blue[static_cast<std::size_t>(x)] + 1);
      avoid *= 1.0 - closed / static_cast<double>(g.degree(x));
    }
    if (next_uniform(rng) < 1.0 - avoid) forced.push_back(w);
  }
  for (int w : forced) blue[static_cast<std::size_t>(w)] = 1;
  blue_count += static_cast<int>(forced.size());
  if (variant == Variant::darpzf && blue_count == n) return blue_count;
  for (int v = 0; v < n; ++v) {
    if (!blue[static_cast<std::size_t>(v)]) continue;
    if (next_uniform(rng) < p) {
      blue[static_cast<std::size_t>(v)] = 0;
      --blue_count;
    }
  }
  return blue_count;
}

}  // namespace detail

// Per-trial generator: stream i is seeded with mix64 of (seed, i), so trials
// are independent of execution order and thread count.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::int64_t trial_index) {
  std::uint64_t s = detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(trial_index) + 1));
  return std::mt19937_64(s);
}

// One round applied to an explicit blue set; returns the new blue set in
// ascending order.  Mainly for distribution-level checks against the chain.
// The empty set is absorbing: nothing can force, so it maps to itself.
inline std::vector<int> run_round(const Graph& g, const std::vector<int>& blue, double p, Variant variant,
                                  std::mt19937_64& rng) {
  if (blue.empty()) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("simulation: need p strictly inside (0,1)");
    return {};
  }
  SimConfig probe;
  probe.initial_blue = blue;
  probe.p = p;
  detail::validate_config(g, probe);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : blue) flags[static_cast<std::size_t>(v)] = 1;
  std::vector<int> open_blue, forced;
  detail::do_round(g, flags, static_cast<int>(blue.size()), p, variant, rng, open_blue, forced);
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (flags[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

inline TrialResult run_trial(const Graph& g, const SimConfig& cfg, std::int64_t trial_index) {
  detail::validate_config(g, cfg);
  int n = g.vertex_count();
  std::mt19937_64 rng = trial_rng(cfg.seed, trial_index);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(n), 0);
  for (int v : cfg.initial_blue) flags[static_cast<std::size_t>(v)] = 1;
  int count = static_cast<int>(cfg.initial_blue.size());
  if (cfg.variant == Variant::darpzf && count == n) return TrialResult{0, TrialOutcome::fully_forced};
  std::vector<int> open_blue, forced;
  for (std::int64_t round = 1; round <= cfg.max_rounds; ++round) {
    count = detail::do_round(g, flags, count, cfg.p, cfg.variant, rng, open_blue, forced);
    if (count == 0) return TrialResult{round, TrialOutcome::died_out};
    if (cfg.variant == Variant::darpzf && count == n) return TrialResult{round, TrialOutcome::fully_forced};
  }
  return TrialResult{cfg.max_rounds, TrialOutcome::censored};
}

// Monte Carlo estimate over cfg.trials independent trials.  Trials are
// processed in fixed-size chunks handed to worker threads; per-chunk sums are
// reduced in chunk order afterwards, so every thread count produces exactly
// the same result as a single-threaded run.
inline SimResult estimate(const Graph& g, const SimConfig& cfg, int threads = 1) {
  detail::validate_config(g, cfg);
  if (threads < 1) throw DomainError("simulation: thread count must be positive");
  constexpr std::int64_t kChunk = 1024;
  std::int64_t chunks = (cfg.trials + kChunk - 1) / kChunk;
  struct ChunkAgg {
    std::int64_t died = 0, forced = 0, censored = 0;
    double sum_rounds = 0.0, sumsq_rounds = 0.0;  // over uncensored trials
  };
  std::vector<ChunkAgg> agg(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t c = cursor.fetch_add(1);
      if (c >= chunks) break;
      ChunkAgg& a = agg[static_cast<std::size_t>(c)];
      std::int64_t lo = c * kChunk;
      std::int64_t hi = std::min(cfg.trials, lo + kChunk);
      for (std::int64_t t = lo; t < hi; ++t) {
        TrialResult r = run_trial(g, cfg, t);
        auto rounds = static_cast<double>(r.rounds);
        switch (r.outcome) {
          case TrialOutcome::died_out:
            ++a.died;
            a.sum_rounds += rounds;
            a.sumsq_rounds += rounds * rounds;
            break;
          case TrialOutcome::fully_forced:
            ++a.forced;
            a.sum_rounds += rounds;
            a.sumsq_rounds += rounds * rounds;
            break;
          case TrialOutcome::censored: ++a.censored; break;
        }
      }
    }
  };
  int nthreads = static_cast<int>(std::min<std::int64_t>(threads, chunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  SimResult res;
  res.config = cfg;
  double sum = 0.0, sumsq = 0.0;
  for (const ChunkAgg& a : agg) {
    res.died_out += a.died;
    res.fully_forced += a.forced;
    res.censored += a.censored;
    sum += a.sum_rounds;
    sumsq += a.sumsq_rounds;
  }
  auto trials = static_cast<double>(cfg.trials);
  res.die_out_fraction = static_cast<double>(res.died_out) / trials;
  res.fully_forced_fraction = static_cast<double>(res.fully_forced) / trials;
  if (cfg.trials > 1) {
    double f = res.die_out_fraction;
    res.se_die_out = std::sqrt(f * (1.0 - f) / (trials - 1.0));
  }
  std::int64_t uncensored = res.died_out + res.fully_forced;
  if (uncensored > 0) {
    auto m = static_cast<double>(uncensored);
    res.mean_absorption_rounds = sum / m;
    if (uncensored > 1) {
      double var = (sumsq - m * res.mean_absorption_rounds * res.mean_absorption_rounds) / (m - 1.0);
      res.se_absorption_rounds = std::sqrt(std::max(0.0, var) / m);
    }
  }
  return res;
}

inline std::string sim_results_to_csv(const std::vector<SimResult>& results) {
  std::string out =
      "p,die_out_fraction,se_die_out,mean_absorption_rounds,se_absorption_rounds,"
      "censored,trials,seed,variant,fully_forced_fraction\n";
  for (const SimResult& r : results) {
    out += format_double(r.config.p);
    out += ',';
    out += format_double(r.die_out_fraction);
    out += ',';
    out += format_double(r.se_die_out);
    out += ',';
    out += format_double(r.mean_absorption_rounds);
    out += ',';
    out += format_double(r.se_absorption_rounds);
    out += ',';
    out += std::to_string(r.censored);
    out += ',';
    out += std::to_string(r.config.trials);
    out += ',';
    out += std::to_string(r.config.seed);
    out += ',';
    out += variant_name(r.config.variant);
    out += ',';
    out += format_double(r.fully_forced_fraction);
    out += '\n';
  }
  return out;
}

}  // namespace rpzf
