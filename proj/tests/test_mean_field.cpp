#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rpzf/chain.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/mean_field.hpp"
#include "rpzf/state_space.hpp"

using namespace rpzf;

TEST_CASE("model names round-trip") {
  for (MfModel m : {MfModel::wang, MfModel::gomez, MfModel::ahn, MfModel::pare, MfModel::sarpzf})
    CHECK(mf_model_from_name(mf_model_name(m)) == m);
  CHECK_THROWS_AS(mf_model_from_name("unknown"), DomainError);
}

TEST_CASE("the all-healthy state is a fixed point of every model") {
  Graph g = complete_graph(5);
  for (MfModel m : {MfModel::wang, MfModel::gomez, MfModel::ahn, MfModel::pare, MfModel::sarpzf}) {
    MeanFieldState st = make_mf_state(m, std::vector<double>(5, 0.0), 0.3, 0.4);
    mf_step(st, g);
    CHECK(infection_density(st) == 0.0);
    CHECK(st.step_index == 1);
    CHECK(st.clamp_drift == 0.0);
  }
}

TEST_CASE("hand-evaluated one-step updates on a single edge") {
  Graph g = path_graph(2);
  std::vector<double> init{0.5, 0.25};
  double beta = 0.4, p = 0.3;
  // vertex 0 sees q = 1 - 0.4 * 0.25 = 0.9
  auto after = [&](MfModel m) {
    MeanFieldState st = make_mf_state(m, init, beta, p);
    mf_step(st, g);
    return st.probs[0];
  };
  CHECK_THAT(after(MfModel::wang), Catch::Matchers::WithinAbs(0.4075, 1e-15));
  CHECK_THAT(after(MfModel::gomez), Catch::Matchers::WithinAbs(0.415, 1e-15));
  CHECK_THAT(after(MfModel::ahn), Catch::Matchers::WithinAbs(0.4, 1e-15));
  CHECK_THAT(after(MfModel::pare), Catch::Matchers::WithinAbs(0.4, 1e-15));
}

TEST_CASE("without recovery the contact models never lose mass") {
  Graph g = cycle_graph(5);
  MeanFieldState st = make_mf_state(MfModel::ahn, std::vector<double>(5, 0.2), 0.3, 0.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> before = st.probs;
    mf_step(st, g);
    for (std::size_t v = 0; v < before.size(); ++v) CHECK(st.probs[v] >= before[v]);
  }
}

TEST_CASE("per-vertex model identities") {
  Graph g = complete_graph(5);
  std::vector<double> init{0.1, 0.6, 0.3, 0.9, 0.45};
  double beta = 0.25, p = 0.35;
  MeanFieldState ahn = make_mf_state(MfModel::ahn, init, beta, p);
  MeanFieldState gomez = make_mf_state(MfModel::gomez, init, beta, p);
  MeanFieldState pare = make_mf_state(MfModel::pare, init, beta, p);
  mf_step(ahn, g);
  mf_step(gomez, g);
  mf_step(pare, g);
  for (int v = 0; v < 5; ++v) {
    double qv = 1.0, pressure = 0.0;
    for (int x : g.neighbors(v)) {
      qv *= 1.0 - beta * init[static_cast<std::size_t>(x)];
      pressure += init[static_cast<std::size_t>(x)];
    }
    double pv = init[static_cast<std::size_t>(v)];
    // gomez keeps the reinfection-of-recovering term that ahn drops
    CHECK_THAT(gomez.probs[static_cast<std::size_t>(v)] - ahn.probs[static_cast<std::size_t>(v)],
               Catch::Matchers::WithinAbs(p * (1.0 - qv) * pv, 1e-15));
    // the linearized infection pressure dominates the product form by at
    // most (beta * pressure)^2 / 2
    double diff = pare.probs[static_cast<std::size_t>(v)] - ahn.probs[static_cast<std::size_t>(v)];
    CHECK(diff >= -1e-15);
    CHECK(diff <= 0.5 * beta * beta * pressure * pressure + 1e-15);
  }
}

TEST_CASE("exact forcing recursion reproduces one-round chain marginals") {
  Graph g = path_graph(4);
  StateSpace ss = enumerate_full(g);
  double p = 0.3;
  TransitionBundle bundle = build_bundle(g, ss, p, Variant::sarpzf);
  auto chain_marginals = [&](const std::vector<double>& probs) {
    std::vector<double> dist(static_cast<std::size_t>(ss.size()), 0.0);
    for (int i = 0; i < ss.size(); ++i) {
      std::uint64_t mask = ss.state(i).mask;
      double w = 1.0;
      for (int v = 0; v < 4; ++v)
        w *= (mask >> v) & 1 ? probs[static_cast<std::size_t>(v)] : 1.0 - probs[static_cast<std::size_t>(v)];
      dist[static_cast<std::size_t>(i)] = w;
    }
    std::vector<double> next = step_distribution(dist, bundle);
    std::vector<double> marg(4, 0.0);
    for (int i = 0; i < ss.size(); ++i)
      for (int v = 0; v < 4; ++v)
        if ((ss.state(i).mask >> v) & 1) marg[static_cast<std::size_t>(v)] += next[static_cast<std::size_t>(i)];
    return marg;
  };
  for (std::vector<double> init : {std::vector<double>{1, 0, 0, 0}, std::vector<double>{0.3, 0.7, 0.2, 0.5}}) {
    MeanFieldState st = make_mf_state(MfModel::sarpzf, init, 0.0, p);
    mf_step(st, g);
    std::vector<double> want = chain_marginals(init);
    for (int v = 0; v < 4; ++v)
      CHECK_THAT(st.probs[static_cast<std::size_t>(v)], Catch::Matchers::WithinAbs(want[static_cast<std::size_t>(v)], 1e-10));
  }
}

TEST_CASE("product-form models stay inside the simplex without clamping") {
  Graph g = cycle_graph(6);
  std::mt19937_64 rng(12345);
  auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int sample = 0; sample < 100; ++sample) {
    std::vector<double> init(6);
    for (double& x : init) x = uniform();
    double beta = uniform(), p = uniform();
    for (MfModel m : {MfModel::wang, MfModel::gomez, MfModel::ahn}) {
      MeanFieldState st = make_mf_state(m, init, beta, p);
      for (int k = 0; k < 3; ++k) mf_step(st, g);
      CHECK(st.clamp_drift <= 1e-12);
      for (double x : st.probs) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
    }
  }
}

TEST_CASE("an overshooting linearized map is clamped and reported") {
  Graph g = complete_graph(5);
  MeanFieldState st = make_mf_state(MfModel::pare, std::vector<double>(5, 0.9), 5.0, 0.1);
  mf_step(st, g);  // beta * pressure = 5 * 3.6 far above 1
  CHECK(st.clamp_drift > 1.0);
  for (double x : st.probs) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("exact recursion size cap") {
  Graph g = complete_graph(13);
  MeanFieldState st = make_mf_state(MfModel::sarpzf, std::vector<double>(13, 0.5), 0.0, 0.5);
  CHECK_THROWS_AS(mf_step(st, g), SizeError);
  mf_step(st, g, 13);  // raising the cap admits the graph
  CHECK(st.step_index == 1);
  CHECK_THROWS_AS(detail::sarpzf_white_unforced(g, st.probs, 64), SizeError);
}

TEST_CASE("parameter validation") {
  Graph g = complete_graph(4);
  auto bad = [&](MfModel m, std::vector<double> probs, double beta, double p) {
    MeanFieldState st = make_mf_state(m, std::move(probs), beta, p);
    CHECK_THROWS_AS(mf_step(st, g), DomainError);
  };
  bad(MfModel::ahn, std::vector<double>(4, 0.5), -0.1, 0.5);
  bad(MfModel::ahn, std::vector<double>(4, 0.5), 0.3, -0.1);
  bad(MfModel::ahn, std::vector<double>(4, 0.5), 0.3, 1.1);
  bad(MfModel::ahn, std::vector<double>(4, 1.5), 0.3, 0.5);
  bad(MfModel::ahn, std::vector<double>(3, 0.5), 0.3, 0.5);
  bad(MfModel::sarpzf, std::vector<double>(4, 0.5), 0.0, 0.0);
  bad(MfModel::sarpzf, std::vector<double>(4, 0.5), 0.0, 1.0);
  // boundary recovery probabilities are fine for the contact models, and
  // beta may exceed 1
  MeanFieldState ok = make_mf_state(MfModel::ahn, std::vector<double>(4, 0.5), 2.0, 0.0);
  mf_step(ok, g);
  ok = make_mf_state(MfModel::pare, std::vector<double>(4, 0.5), 2.0, 1.0);
  mf_step(ok, g);
}

TEST_CASE("trajectories and export") {
  Graph g = complete_graph(4);
  std::vector<MeanFieldState> traj =
      mf_trajectory(MfModel::gomez, g, std::vector<double>{1, 0, 0, 0}, 0.3, 0.2, 5);
  REQUIRE(traj.size() == 6);
  for (std::size_t k = 0; k < traj.size(); ++k)
    CHECK(traj[k].step_index == static_cast<std::int64_t>(k));
  CHECK_THAT(infection_density(traj[0]), Catch::Matchers::WithinAbs(0.25, 1e-15));

  CHECK(mf_trajectory(MfModel::gomez, g, std::vector<double>(4, 0.1), 0.3, 0.2, 0).size() == 1);
  CHECK_THROWS_AS(mf_trajectory(MfModel::gomez, g, std::vector<double>(4, 0.1), 0.3, 0.2, -1), DomainError);

  std::string csv = trajectory_to_csv(traj);
  CHECK(csv.rfind("step,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  std::string wide = trajectory_to_csv(traj, true);
  CHECK(wide.rfind("step,density,p_0,p_1,p_2,p_3\n", 0) == 0);

  CHECK_THROWS_AS(infection_density(MeanFieldState{}), DomainError);
}
