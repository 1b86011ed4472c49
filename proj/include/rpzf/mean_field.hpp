#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/linalg.hpp"

namespace rpzf {

// Discrete-time infection-density recursions.  wang, gomez, ahn, and pare are
// SIS-style mean-field maps driven by a per-neighbor infection probability
// beta and recovery probability p; sarpzf replaces the infection term with
// the exact forcing probabilities of the reversion process, evaluated over
// all 2^n colorings (so it is capped at small n).
enum class MfModel { wang, gomez, ahn, pare, sarpzf };

inline constexpr int kMfExactCapDefault = 12;

inline const char* mf_model_name(MfModel m) {
  switch (m) {
    case MfModel::wang: return "wang";
    case MfModel::gomez: return "gomez";
    case MfModel::ahn: return "ahn";
    case MfModel::pare: return "pare";
    case MfModel::sarpzf: return "sarpzf";
  }
  throw DomainError("unknown mean-field model");
}

inline MfModel mf_model_from_name(const std::string& name) {
  if (name == "wang") return MfModel::wang;
  if (name == "gomez") return MfModel::gomez;
  if (name == "ahn") return MfModel::ahn;
  if (name == "pare") return MfModel::pare;
  if (name == "sarpzf") return MfModel::sarpzf;
  throw DomainError("unknown mean-field model '" + name + "'");
}

struct MeanFieldState {
  MfModel model = MfModel::ahn;
  double beta = 0.0;  // per-neighbor infection probability (ignored by sarpzf)
  double p = 0.0;     // recovery / reversion probability
  std::vector<double> probs;
  std::int64_t step_index = 0;
  double clamp_drift = 0.0;  // largest excursion outside [0,1] clamped so far
};

namespace detail {

inline void validate_mf(const MeanFieldState& st, const Graph& g) {
  if (static_cast<int>(st.probs.size()) != g.vertex_count())
    throw DomainError("mean field: state size does not match the graph");
  // sarpzf is a reversion process and needs p strictly inside (0,1); the SIS
  // maps accept the boundary.  beta > 1 is allowed (the linearized map can
  // overshoot); clamp_drift records the resulting excursions.
  if (st.model == MfModel::sarpzf) {
    if (!(st.p > 0.0 && st.p < 1.0)) throw DomainError("mean field: need p strictly inside (0,1)");
  } else {
    if (!(st.p >= 0.0 && st.p <= 1.0)) throw DomainError("mean field: need p in [0,1]");
    if (!(st.beta >= 0.0)) throw DomainError("mean field: need beta >= 0");
  }
  for (double x : st.probs)
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("mean field: probabilities must lie in [0,1]");
}

// Exact per-vertex probability of (white and not forced) after one forcing
// phase, when vertex colors are independent with the given marginals:
//   a_v = sum over colorings with v white of P[coloring] * prod_{blue
//   neighbors x of v} (1 - |N[x] cap B| / deg x).
inline std::vector<double> sarpzf_white_unforced(const Graph& g, const std::vector<double>& probs,
                                                 int exact_cap) {
  int n = g.vertex_count();
  if (n > exact_cap || exact_cap > 63)
    throw SizeError("mean field: exact forcing term needs vertex count <= " + std::to_string(std::min(exact_cap, 63)));
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    for (int y : g.neighbors(v)) adj[static_cast<std::size_t>(v)] |= std::uint64_t{1} << y;
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  std::vector<double> factor(static_cast<std::size_t>(n), 1.0);
  std::uint64_t top = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < top; ++mask) {
    double w = 1.0;
    for (int v = 0; v < n; ++v) {
      double pv = probs[static_cast<std::size_t>(v)];
      w *= (mask >> v) & 1 ? pv : 1.0 - pv;
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    for (int x = 0; x < n; ++x) {
      if (!((mask >> x) & 1)) continue;
      auto closed = static_cast<double>(std::popcount(adj[static_cast<std::size_t>(x)] & mask) + 1);
      factor[static_cast<std::size_t>(x)] = 1.0 - closed / static_cast<double>(g.degree(x));
    }
    for (int v = 0; v < n; ++v) {
      if ((mask >> v) & 1) continue;
      double avoid = 1.0;
      std::uint64_t blues = adj[static_cast<std::size_t>(v)] & mask;
      while (blues != 0) {
        int x = std::countr_zero(blues);
        blues &= blues - 1;
        avoid *= factor[static_cast<std::size_t>(x)];
      }
      a[static_cast<std::size_t>(v)] += w * avoid;
    }
  }
  return a;
}

}  // namespace detail

// Advance the recursion one step in place.  Values are clamped back into
// [0,1] after the update; the size of the largest clamp is accumulated in
// clamp_drift so silent distortion is visible to the caller.
inline void mf_step(MeanFieldState& st, const Graph& g, int exact_cap = kMfExactCapDefault) {
  detail::validate_mf(st, g);
  int n = g.vertex_count();
  std::vector<double> next(static_cast<std::size_t>(n), 0.0);
  if (st.model == MfModel::sarpzf) {
    std::vector<double> a = detail::sarpzf_white_unforced(g, st.probs, exact_cap);
    for (int v = 0; v < n; ++v)
      next[static_cast<std::size_t>(v)] = (1.0 - st.p) * (1.0 - a[static_cast<std::size_t>(v)]);
  } else {
    for (int v = 0; v < n; ++v) {
      double pv = st.probs[static_cast<std::size_t>(v)];
      double value = 0.0;
      if (st.model == MfModel::pare) {
        double pressure = 0.0;
        for (int x : g.neighbors(v)) pressure += st.probs[static_cast<std::size_t>(x)];
        value = (1.0 - st.p) * pv + (1.0 - pv) * st.beta * pressure;
      } else {
        double qv = 1.0;  // probability that no neighbor infects v this step
        for (int x : g.neighbors(v)) qv *= 1.0 - st.beta * st.probs[static_cast<std::size_t>(x)];
        switch (st.model) {
          case MfModel::wang:
            value = 1.0 - ((1.0 - pv) * qv + st.p * pv * qv + 0.5 * st.p * pv * (1.0 - qv));
            break;
          case MfModel::gomez:
            value = (1.0 - st.p) * pv + (1.0 - qv) * (1.0 - pv) + st.p * (1.0 - qv) * pv;
            break;
          case MfModel::ahn:
            value = (1.0 - st.p) * pv + (1.0 - pv) * (1.0 - qv);
            break;
          default: throw DomainError("unknown mean-field model");
        }
      }
      next[static_cast<std::size_t>(v)] = value;
    }
  }
  for (double& x : next) {
    if (x < 0.0) {
      st.clamp_drift = std::max(st.clamp_drift, -x);
      x = 0.0;
    } else if (x > 1.0) {
      st.clamp_drift = std::max(st.clamp_drift, x - 1.0);
      x = 1.0;
    }
  }
  st.probs = std::move(next);
  ++st.step_index;
}

inline MeanFieldState make_mf_state(MfModel model, std::vector<double> initial, double beta, double p) {
  MeanFieldState st;
  st.model = model;
  st.beta = beta;
  st.p = p;
  st.probs = std::move(initial);
  return st;
}

inline double infection_density(const MeanFieldState& st) {
  if (st.probs.empty()) throw DomainError("mean field: empty state");
  double sum = 0.0;
  for (double x : st.probs) sum += x;
  return sum / static_cast<double>(st.probs.size());
}

// Snapshots at steps 0..horizon inclusive.
inline std::vector<MeanFieldState> mf_trajectory(MfModel model, const Graph& g, std::vector<double> initial,
                                                 double beta, double p, std::int64_t horizon,
                                                 int exact_cap = kMfExactCapDefault) {
  if (horizon < 0) throw DomainError("mean field: horizon must be nonnegative");
  MeanFieldState st = make_mf_state(model, std::move(initial), beta, p);
  detail::validate_mf(st, g);
  std::vector<MeanFieldState> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);
  out.push_back(st);
  for (std::int64_t k = 0; k < horizon; ++k) {
    mf_step(st, g, exact_cap);
    out.push_back(st);
  }
  return out;
}

inline std::string trajectory_to_csv(const std::vector<MeanFieldState>& traj, bool per_vertex = false) {
  std::string out = "step,density";
  if (per_vertex && !traj.empty())
    for (std::size_t v = 0; v < traj.front().probs.size(); ++v) out += ",p_" + std::to_string(v);
  out += '\n';
  for (const MeanFieldState& st : traj) {
    out += std::to_string(st.step_index);
    out += ',';
    out += format_double(infection_density(st));
    if (per_vertex)
      for (double x : st.probs) {
        out += ',';
        out += format_double(x);
      }
    out += '\n';
  }
  return out;
}

}  // namespace rpzf
