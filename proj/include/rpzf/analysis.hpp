#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rpzf/chain.hpp"
#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/linalg.hpp"
#include "rpzf/state_space.hpp"

namespace rpzf {

struct FundamentalMatrix {
  Matrix n;         // (I - Q)^{-1}
  double residual;  // max |((I-Q) N - I)_{ij}|
};

// Fundamental matrix of the transient block, via pivoted LU (never adjugate).
inline FundamentalMatrix fundamental_matrix(const Matrix& q) {
  if (q.rows() != q.cols()) throw DomainError("fundamental matrix: transient block must be square");
  int s = q.rows();
  Matrix a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - q(i, j);
  LuDecomposition lu(a);
  Matrix n = lu.solve(Matrix::identity(s));
  double residual = (a * n - Matrix::identity(s)).max_abs();
  return FundamentalMatrix{std::move(n), residual};
}

// Expected rounds to absorption from each transient state: t = N 1.
inline std::vector<double> expected_absorption_times(const FundamentalMatrix& f) {
  int s = f.n.rows();
  std::vector<double> t(static_cast<std::size_t>(s), 0.0);
  for (int i = 0; i < s; ++i) t[static_cast<std::size_t>(i)] = f.n.row_sum(i);
  return t;
}

// Absorption probabilities for a darpzf chain: column 0 is die-out (into the
// all-white state), column 1 is full forcing (into the all-blue state).
// Solved directly as (I - Q) C = [a1 a2].
inline Matrix absorption_probabilities(const TransitionBundle& b) {
  if (b.variant != Variant::darpzf)
    throw DomainError("absorption probabilities: defined for darpzf chains (sarpzf dies out almost surely)");
  int s = b.q.rows();
  Matrix a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - b.q(i, j);
  Matrix rhs(s, 2);
  for (int i = 0; i < s; ++i) {
    rhs(i, 0) = b.die[static_cast<std::size_t>(i)];
    rhs(i, 1) = b.force[static_cast<std::size_t>(i)];
  }
  return LuDecomposition(a).solve(rhs);
}

// Absorption summary for every transient state of a chain.  Under sarpzf the
// chain is absorbed at the all-white state almost surely, so c_die = 1.
struct AbsorptionReport {
  Variant variant = Variant::sarpzf;
  double p = 0.0;
  std::vector<int> state_index;  // indices into the state space (transient states)
  std::vector<int> blue_count;
  std::vector<double> t;       // expected rounds to absorption
  std::vector<double> c_die;   // absorption probability into all-white
  std::vector<double> c_force; // absorption probability into all-blue
  double residual = 0.0;       // max linear-solve residual
};

inline AbsorptionReport analyze_chain(const StateSpace& ss, const TransitionBundle& b) {
  if (ss.size() != b.step.rows()) throw DomainError("analyze: state space and bundle disagree");
  AbsorptionReport rep;
  rep.variant = b.variant;
  rep.p = b.p;
  FundamentalMatrix f = fundamental_matrix(b.q);
  rep.t = expected_absorption_times(f);
  rep.residual = f.residual;
  int s = b.q.rows();
  rep.state_index.resize(static_cast<std::size_t>(s));
  rep.blue_count.resize(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    rep.state_index[static_cast<std::size_t>(i)] = i + 1;
    rep.blue_count[static_cast<std::size_t>(i)] = ss.blue_count(i + 1);
  }
  if (b.variant == Variant::darpzf) {
    Matrix c = absorption_probabilities(b);
    rep.c_die.resize(static_cast<std::size_t>(s));
    rep.c_force.resize(static_cast<std::size_t>(s));
    double worst = 0.0;
    for (int i = 0; i < s; ++i) {
      rep.c_die[static_cast<std::size_t>(i)] = c(i, 0);
      rep.c_force[static_cast<std::size_t>(i)] = c(i, 1);
      worst = std::max(worst, std::fabs(c(i, 0) + c(i, 1) - 1.0));
    }
    if (worst > 1e-10)
      throw NumericalError("analyze: absorption probability rows deviate from 1 by " + format_double(worst));
  } else {
    rep.c_die.assign(static_cast<std::size_t>(s), 1.0);
    rep.c_force.assign(static_cast<std::size_t>(s), 0.0);
  }
  for (double ti : rep.t)
    if (!(ti > 0.0)) throw NumericalError("analyze: nonpositive expected absorption time");
  return rep;
}

inline std::string report_to_csv(const AbsorptionReport& rep) {
  std::string out = "state_index,blue_count,t,c_die,c_force\n";
  for (std::size_t i = 0; i < rep.state_index.size(); ++i) {
    out += std::to_string(rep.state_index[i]);
    out += ',';
    out += std::to_string(rep.blue_count[i]);
    out += ',';
    out += format_double(rep.t[i]);
    out += ',';
    out += format_double(rep.c_die[i]);
    out += ',';
    out += format_double(rep.c_force[i]);
    out += '\n';
  }
  return out;
}

struct CriticalPResult {
  double p = 0.0;              // reversion probability with die-out probability 1/2
  double die_probability = 0.0;  // achieved value at the returned p
  int iterations = 0;
  int sign_changes = -1;  // populated only when the optional scan runs
};

// Bisection for the reversion probability p at which the darpzf die-out
// probability from the given state equals 1/2.  Monotone existence holds on
// (0,1); the optional scan flags any unexpected extra sign changes at 0.01
// resolution.
inline CriticalPResult critical_reversion_probability(const Graph& g, const StateSpace& ss, int state_index,
                                                      double tol = 1e-7, bool scan = false) {
  if (state_index < 1 || state_index > ss.last() - 1)
    throw DomainError("critical p: state index must name a darpzf transient state");
  if (!(tol > 0.0 && tol < 0.5)) throw DomainError("critical p: tolerance out of range");
  auto die = [&](double p) {
    TransitionBundle b = build_bundle(g, ss, p, Variant::darpzf);
    Matrix c = absorption_probabilities(b);
    return c(state_index - 1, 0);
  };
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double flo = die(lo) - 0.5;
  double fhi = die(hi) - 0.5;
  if (!(flo < 0.0 && fhi > 0.0))
    throw NumericalError("critical p: die-out probability does not bracket 1/2 on (0,1)");
  CriticalPResult res;
  double mid = 0.5 * (lo + hi);
  double fmid = die(mid) - 0.5;
  res.iterations = 3;
  while (std::fabs(fmid) > 0.5 * tol && hi - lo > 1e-15) {
    if (fmid < 0.0)
      lo = mid;
    else
      hi = mid;
    mid = 0.5 * (lo + hi);
    fmid = die(mid) - 0.5;
    ++res.iterations;
    if (res.iterations > 200) throw NumericalError("critical p: bisection failed to converge");
  }
  res.p = mid;
  res.die_probability = fmid + 0.5;
  if (scan) {
    res.sign_changes = 0;
    double prev = flo;
    for (int k = 1; k <= 99; ++k) {
      double f = die(0.01 * k) - 0.5;
      if ((prev < 0.0 && f >= 0.0) || (prev >= 0.0 && f < 0.0)) ++res.sign_changes;
      prev = f;
    }
  }
  return res;
}

// Expected number of forcing rounds to turn the whole graph blue when no
// reversion happens (phase 1 alone, M = F).  Evaluated over the chain
// restricted to nonempty states via one linear solve:
//   ept(start) = ((M - 1 e_s^T - I)^{-1})_{start,s} + 1.
inline double pzf_expected_propagation_time(const Graph& g, const StateSpace& ss, int start_state) {
  if (start_state < 1 || start_state > ss.last())
    throw DomainError("propagation time: start state must be a nonempty coloring");
  Matrix f = build_forcing(g, ss);
  int s = ss.last();  // states 1..s once the all-white row is dropped
  Matrix a(s, s);
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j <= s; ++j)
      a(i - 1, j - 1) = f(i, j) - (j == s ? 1.0 : 0.0) - (i == j ? 1.0 : 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(s), 0.0);
  rhs[static_cast<std::size_t>(s - 1)] = 1.0;
  std::vector<double> x = LuDecomposition(a).solve(rhs);
  return x[static_cast<std::size_t>(start_state - 1)] + 1.0;
}

}  // namespace rpzf
