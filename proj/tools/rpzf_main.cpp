// Command-line front end: builds reversion-forcing chains, solves for
// absorption statistics and critical reversion probabilities, runs seeded
// Monte Carlo, evaluates closed-form threshold sweeps and mean-field
// trajectories, and emits plot-ready CSV or JSON plus a run manifest.

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rpzf/rpzf.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using nlohmann::json;

// ---------------------------------------------------------------------------
// Output plumbing

// Tabular payload rendered as CSV or mirrored into JSON untouched.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add_row(std::initializer_list<json> cells) { rows.emplace_back(cells); }

  std::string to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        const json& cell = row[c];
        if (cell.is_number_float())
          out += rpzf::format_double(cell.get<double>());
        else if (cell.is_string())
          out += cell.get<std::string>();
        else
          out += cell.dump();
      }
      out += '\n';
    }
    return out;
  }
};

// UTC timestamp; honors SOURCE_DATE_EPOCH so archived runs can be
// reproduced byte-for-byte, manifest included.
std::string manifest_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json make_manifest(const std::string& command, const json& parameters, const std::string& out_path) {
  json m;
  m["command"] = command;
  m["tool"] = "rpzf";
  m["version"] = kToolVersion;
  m["timestamp"] = manifest_timestamp();
  m["parameters"] = parameters;
  m["outputs"] = json::array({out_path.empty() ? "-" : out_path});
  return m;
}

// CSV goes to --out (or stdout) and the manifest beside it as
// <out>.manifest.json; JSON embeds the manifest in the single payload.
void emit(const Table& table, const json& manifest, const std::string& out_path, const std::string& format) {
  std::string body;
  if (format == "json") {
    json payload;
    payload["manifest"] = manifest;
    payload["columns"] = table.columns;
    payload["rows"] = table.rows;
    body = payload.dump(2);
    body += '\n';
  } else {
    body = table.to_csv();
  }
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw rpzf::DomainError("cannot open output file '" + out_path + "'");
  f << body;
  if (!f) throw rpzf::DomainError("failed writing output file '" + out_path + "'");
  std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
  if (!mf) throw rpzf::DomainError("cannot open manifest file beside '" + out_path + "'");
  mf << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Flag parsing helpers

struct GraphSource {
  std::string family;  // "complete:8", "bipartite:4:4", ... (empty if from file)
  std::string edge_list;
};

struct ParsedFamily {
  std::string name;
  std::vector<int> sizes;
};

ParsedFamily parse_family(const std::string& spec) {
  ParsedFamily out;
  std::size_t pos = 0;
  std::size_t colon = spec.find(':');
  out.name = spec.substr(0, colon);
  pos = colon;
  while (pos != std::string::npos) {
    std::size_t next = spec.find(':', pos + 1);
    std::string tok = spec.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.sizes.push_back(v);
    } catch (const std::exception&) {
      throw rpzf::ParseError("bad size '" + tok + "' in --family " + spec);
    }
    pos = next;
  }
  std::size_t want = out.name == "bipartite" ? 2 : 1;
  if (out.name != "complete" && out.name != "path" && out.name != "cycle" && out.name != "star" &&
      out.name != "bipartite")
    throw rpzf::ParseError("unknown family '" + out.name + "' (want complete|path|cycle|star|bipartite)");
  if (out.sizes.size() != want)
    throw rpzf::ParseError("--family " + out.name + " needs " + std::to_string(want) + " size parameter(s)");
  return out;
}

rpzf::Graph load_graph(const GraphSource& src, std::optional<ParsedFamily>& family_out) {
  if (src.family.empty() == src.edge_list.empty())
    throw rpzf::ParseError("exactly one of --family and --edge-list is required");
  if (!src.edge_list.empty()) {
    family_out.reset();
    return rpzf::graph_from_edge_list_file(src.edge_list);
  }
  ParsedFamily fam = parse_family(src.family);
  family_out = fam;
  if (fam.name == "complete") return rpzf::complete_graph(fam.sizes[0]);
  if (fam.name == "path") return rpzf::path_graph(fam.sizes[0]);
  if (fam.name == "cycle") return rpzf::cycle_graph(fam.sizes[0]);
  if (fam.name == "star") return rpzf::star_graph(fam.sizes[0]);
  return rpzf::complete_bipartite_graph(fam.sizes[0], fam.sizes[1]);
}

// auto picks the collapsed count space whenever the family symmetry allows
// one; full enumeration is the fallback (and is capped at 14 vertices).
rpzf::StateSpace resolve_space(const rpzf::Graph& g, const std::optional<ParsedFamily>& family,
                               const std::string& mode) {
  bool can_collapse = family.has_value() &&
                      (family->name == "complete" || family->name == "bipartite" ||
                       (family->name == "star" && g.vertex_count() >= 3));
  if (mode == "full" || (mode == "auto" && !can_collapse)) return rpzf::enumerate_full(g);
  if (mode == "collapsed" && !can_collapse)
    throw rpzf::DomainError("collapsed spaces exist only for --family complete, star (n >= 3), and bipartite");
  if (family->name == "complete") return rpzf::collapsed_complete(g.vertex_count());
  if (family->name == "star") return rpzf::collapsed_star(g.vertex_count());
  return rpzf::collapsed_bipartite(family->sizes[0], family->sizes[1]);
}

rpzf::Variant parse_variant(const std::string& name) {
  return name == "sarpzf" ? rpzf::Variant::sarpzf : rpzf::Variant::darpzf;
}

// "a:b:s" -> a, a+s, ..., b, both ends inclusive within 1e-12.
std::vector<double> parse_p_grid(const std::string& spec) {
  double a = 0, b = 0, s = 0;
  std::size_t c1 = spec.find(':');
  std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) throw rpzf::ParseError("--p-grid wants start:stop:step");
  try {
    std::size_t used = 0;
    std::string sa = spec.substr(0, c1), sb = spec.substr(c1 + 1, c2 - c1 - 1), ss = spec.substr(c2 + 1);
    a = std::stod(sa, &used);
    if (used != sa.size()) throw std::invalid_argument(sa);
    b = std::stod(sb, &used);
    if (used != sb.size()) throw std::invalid_argument(sb);
    s = std::stod(ss, &used);
    if (used != ss.size()) throw std::invalid_argument(ss);
  } catch (const std::exception&) {
    throw rpzf::ParseError("--p-grid wants numeric start:stop:step, got '" + spec + "'");
  }
  if (!(s > 0.0)) throw rpzf::ParseError("--p-grid step must be positive");
  if (b < a - 1e-12) throw rpzf::ParseError("--p-grid stop is below start");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    double x = a + k * s;
    if (x > b + 1e-12) break;
    grid.push_back(x);
    if (grid.size() > 1000000) throw rpzf::ParseError("--p-grid has more than 1e6 points");
  }
  return grid;
}

std::vector<double> resolve_p_values(const std::optional<double>& p, const std::string& grid_spec) {
  if (p.has_value() == !grid_spec.empty())
    throw rpzf::ParseError("exactly one of --p and --p-grid is required");
  if (p.has_value()) return {*p};
  return parse_p_grid(grid_spec);
}

json graph_parameters(const GraphSource& src) {
  json out;
  if (!src.family.empty()) out["family"] = src.family;
  if (!src.edge_list.empty()) out["edge_list"] = src.edge_list;
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand payloads

struct CommonOut {
  std::string out_path;
  std::string format = "csv";
};

void add_common_out(CLI::App* cmd, CommonOut& c) {
  cmd->add_option("--out", c.out_path, "Output file (stdout if omitted; manifest written beside files)");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_graph_source(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--family", src.family,
                  "Graph family and sizes: complete:N | path:N | cycle:N | star:N | bipartite:M:N");
  cmd->add_option("--edge-list", src.edge_list, "Edge-list file: first line N, then one 'u v' pair per line");
}

int run_analyze(const GraphSource& src, const std::optional<double>& p, const std::string& p_grid,
                const std::string& variant_name_in, const std::string& space_mode, const CommonOut& out) {
  std::optional<ParsedFamily> family;
  rpzf::Graph g = load_graph(src, family);
  rpzf::StateSpace ss = resolve_space(g, family, space_mode);
  rpzf::Variant variant = parse_variant(variant_name_in);
  std::vector<double> ps = resolve_p_values(p, p_grid);
  Table table;
  table.columns = {"p", "state_index", "blue_count", "t", "c_die", "c_force", "residual"};
  for (double pv : ps) {
    rpzf::TransitionBundle bundle = rpzf::build_bundle(g, ss, pv, variant);
    rpzf::AbsorptionReport rep = rpzf::analyze_chain(ss, bundle);
    for (std::size_t i = 0; i < rep.state_index.size(); ++i)
      table.add_row({pv, rep.state_index[i], rep.blue_count[i], rep.t[i], rep.c_die[i], rep.c_force[i],
                     rep.residual});
  }
  json params = graph_parameters(src);
  params["variant"] = variant_name_in;
  params["space"] = space_mode;
  params["p_values"] = ps;
  emit(table, make_manifest("analyze", params, out.out_path), out.out_path, out.format);
  return 0;
}

int run_critical_p(const GraphSource& src, int state, double tol, bool scan, const std::string& space_mode,
                   const CommonOut& out) {
  std::optional<ParsedFamily> family;
  rpzf::Graph g = load_graph(src, family);
  rpzf::StateSpace ss = resolve_space(g, family, space_mode);
  rpzf::CriticalPResult res = rpzf::critical_reversion_probability(g, ss, state, tol, scan);
  Table table;
  table.columns = {"state_index", "p_critical", "die_probability", "iterations", "sign_changes"};
  table.add_row({state, res.p, res.die_probability, res.iterations, res.sign_changes});
  json params = graph_parameters(src);
  params["state"] = state;
  params["tol"] = tol;
  params["scan"] = scan;
  params["space"] = space_mode;
  emit(table, make_manifest("critical-p", params, out.out_path), out.out_path, out.format);
  return 0;
}

int run_simulate(const GraphSource& src, std::vector<int> start, const std::optional<double>& p,
                 const std::string& p_grid, const std::string& variant_name_in, std::int64_t trials,
                 std::int64_t max_rounds, std::uint64_t seed, int threads, const CommonOut& out) {
  std::optional<ParsedFamily> family;
  rpzf::Graph g = load_graph(src, family);
  std::vector<double> ps = resolve_p_values(p, p_grid);
  Table table;
  table.columns = {"p",
                   "die_out_fraction",
                   "se_die_out",
                   "mean_absorption_rounds",
                   "se_absorption_rounds",
                   "censored",
                   "trials",
                   "seed",
                   "variant",
                   "fully_forced_fraction"};
  for (double pv : ps) {
    rpzf::SimConfig cfg;
    cfg.initial_blue = start;
    cfg.p = pv;
    cfg.variant = parse_variant(variant_name_in);
    cfg.trials = trials;
    cfg.max_rounds = max_rounds;
    cfg.seed = seed;
    rpzf::SimResult r = rpzf::estimate(g, cfg, threads);
    table.add_row({pv, r.die_out_fraction, r.se_die_out, r.mean_absorption_rounds,
                   r.se_absorption_rounds, r.censored, trials, seed, variant_name_in,
                   r.fully_forced_fraction});
  }
  json params = graph_parameters(src);
  params["start"] = start;
  params["variant"] = variant_name_in;
  params["p_values"] = ps;
  params["trials"] = trials;
  params["max_rounds"] = max_rounds;
  params["seed"] = seed;
  params["threads"] = threads;
  emit(table, make_manifest("simulate", params, out.out_path), out.out_path, out.format);
  return 0;
}

int run_threshold(const std::string& family, const std::string& metric, std::vector<std::int64_t> n_grid,
                  double p, double exponent, const std::string& star_offset, std::int64_t star_c,
                  const std::string& bipartite_rule, const CommonOut& out) {
  rpzf::ThresholdRequest req;
  if (family == "complete")
    req.family = rpzf::SweepFamily::complete;
  else if (family == "star")
    req.family = rpzf::SweepFamily::star;
  else
    req.family = rpzf::SweepFamily::bipartite;
  req.metric = metric == "expectation-gap" ? rpzf::SweepMetric::expectation_gap
                                           : rpzf::SweepMetric::full_force_probability;
  req.n_grid = std::move(n_grid);
  req.p = p;
  req.exponent = exponent;
  if (star_offset == "constant")
    req.star_offset = rpzf::StarOffset::constant;
  else if (star_offset == "log")
    req.star_offset = rpzf::StarOffset::log_growth;
  else
    req.star_offset = rpzf::StarOffset::sqrt_growth;
  req.star_c = star_c;
  req.bipartite_rule =
      bipartite_rule == "balanced" ? rpzf::BipartiteRule::balanced : rpzf::BipartiteRule::full_side;
  rpzf::ThresholdSweep sweep = rpzf::threshold_sweep(req);
  Table table;
  table.columns = {"n", "b_n", "metric_value"};
  for (const rpzf::SweepPoint& pt : sweep.points) table.add_row({pt.n, pt.b, pt.value});
  json params;
  params["family"] = family;
  params["metric"] = metric;
  params["n_grid"] = req.n_grid;
  params["p"] = p;
  params["exponent"] = exponent;
  params["star_offset"] = star_offset;
  params["star_c"] = star_c;
  params["bipartite_rule"] = bipartite_rule;
  params["b_rule"] = sweep.b_rule;
  emit(table, make_manifest("threshold", params, out.out_path), out.out_path, out.format);
  return 0;
}

int run_meanfield(const GraphSource& src, const std::string& model_name, double beta, double p,
                  std::int64_t horizon, std::vector<int> init_blue, const std::optional<double>& init_density,
                  bool per_vertex, int exact_cap, const CommonOut& out) {
  std::optional<ParsedFamily> family;
  rpzf::Graph g = load_graph(src, family);
  rpzf::MfModel model = rpzf::mf_model_from_name(model_name);
  std::vector<double> initial(static_cast<std::size_t>(g.vertex_count()), 0.0);
  if (init_density.has_value()) {
    if (!init_blue.empty())
      throw rpzf::ParseError("--init-density and --init-blue are mutually exclusive");
    initial.assign(initial.size(), *init_density);
  } else {
    if (init_blue.empty()) init_blue = {0};
    for (int v : init_blue) {
      if (v < 0 || v >= g.vertex_count()) throw rpzf::DomainError("mean field: --init-blue vertex out of range");
      initial[static_cast<std::size_t>(v)] = 1.0;
    }
  }
  std::vector<rpzf::MeanFieldState> traj = rpzf::mf_trajectory(model, g, initial, beta, p, horizon, exact_cap);
  Table table;
  table.columns = {"step", "density"};
  if (per_vertex)
    for (int v = 0; v < g.vertex_count(); ++v) table.columns.push_back("p_" + std::to_string(v));
  for (const rpzf::MeanFieldState& st : traj) {
    std::vector<json> row{st.step_index, rpzf::infection_density(st)};
    if (per_vertex)
      for (double x : st.probs) row.emplace_back(x);
    table.rows.push_back(std::move(row));
  }
  json params = graph_parameters(src);
  params["model"] = model_name;
  params["beta"] = beta;
  params["p"] = p;
  params["horizon"] = horizon;
  if (init_density.has_value())
    params["init_density"] = *init_density;
  else
    params["init_blue"] = init_blue;
  params["per_vertex"] = per_vertex;
  params["exact_cap"] = exact_cap;
  params["clamp_drift"] = traj.back().clamp_drift;
  emit(table, make_manifest("meanfield", params, out.out_path), out.out_path, out.format);
  return 0;
}

int run_pmf(std::int64_t n, std::int64_t b, double p, const std::string& variant_name_in, const CommonOut& out) {
  rpzf::Variant variant = parse_variant(variant_name_in);
  Table table;
  table.columns = {"k", "probability"};
  for (std::int64_t k = 0; k <= n; ++k) table.add_row({k, rpzf::kn_one_step_pmf(n, b, p, variant, k)});
  json params;
  params["n"] = n;
  params["b"] = b;
  params["p"] = p;
  params["variant"] = variant_name_in;
  emit(table, make_manifest("pmf", params, out.out_path), out.out_path, out.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis, simulation, and mean-field models for probabilistic zero forcing with reversion"};
  app.set_version_flag("--version", std::string("rpzf ") + kToolVersion);
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Absorption times and probabilities for every transient state");
  GraphSource an_src;
  std::optional<double> an_p;
  std::string an_grid, an_variant = "darpzf", an_space = "auto";
  CommonOut an_out;
  add_graph_source(analyze, an_src);
  analyze->add_option("--p", an_p, "Reversion probability in (0,1)");
  analyze->add_option("--p-grid", an_grid, "Reversion probability grid start:stop:step (ends inclusive)");
  analyze->add_option("--variant", an_variant, "Process variant")
      ->check(CLI::IsMember({"sarpzf", "darpzf"}))
      ->capture_default_str();
  analyze->add_option("--space", an_space, "State space: full enumeration or family-collapsed counts")
      ->check(CLI::IsMember({"auto", "full", "collapsed"}))
      ->capture_default_str();
  add_common_out(analyze, an_out);

  // critical-p
  auto* critical = app.add_subcommand("critical-p", "Reversion probability where die-out probability is 1/2");
  GraphSource cr_src;
  int cr_state = 1;
  double cr_tol = 1e-7;
  bool cr_scan = false;
  std::string cr_space = "auto";
  CommonOut cr_out;
  add_graph_source(critical, cr_src);
  critical->add_option("--state", cr_state, "Start state index in the properly ordered space")
      ->capture_default_str();
  critical->add_option("--tol", cr_tol, "Bisection tolerance on |die-out - 1/2|")->capture_default_str();
  critical->add_flag("--scan", cr_scan, "Also scan p = 0.01..0.99 and report sign changes");
  critical->add_option("--space", cr_space, "State space: full enumeration or family-collapsed counts")
      ->check(CLI::IsMember({"auto", "full", "collapsed"}))
      ->capture_default_str();
  add_common_out(critical, cr_out);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo estimates of die-out and absorption time");
  GraphSource si_src;
  std::vector<int> si_start{0};
  std::optional<double> si_p;
  std::string si_grid, si_variant = "darpzf";
  std::int64_t si_trials = 10000, si_max_rounds = 1000000;
  std::uint64_t si_seed = 0;
  int si_threads = 1;
  CommonOut si_out;
  add_graph_source(simulate, si_src);
  simulate->add_option("--start", si_start, "Initially blue vertices (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--p", si_p, "Reversion probability in (0,1)");
  simulate->add_option("--p-grid", si_grid, "Reversion probability grid start:stop:step (ends inclusive)");
  simulate->add_option("--variant", si_variant, "Process variant")
      ->check(CLI::IsMember({"sarpzf", "darpzf"}))
      ->capture_default_str();
  simulate->add_option("--trials", si_trials, "Trials per grid point")->capture_default_str();
  simulate->add_option("--max-rounds", si_max_rounds, "Round cap; trials hitting it are censored")
      ->capture_default_str();
  simulate->add_option("--seed", si_seed, "Base RNG seed; results are a pure function of flags + seed")
      ->capture_default_str();
  simulate->add_option("--threads", si_threads, "Worker threads (thread count never changes results)")
      ->capture_default_str();
  add_common_out(simulate, si_out);

  // threshold
  auto* threshold = app.add_subcommand("threshold", "Closed-form threshold sweeps over family size grids");
  std::string th_family = "complete", th_metric = "expectation-gap", th_star_offset = "constant",
              th_bip_rule = "balanced";
  std::vector<std::int64_t> th_grid;
  double th_p = 0.5, th_exponent = 3.0;
  std::int64_t th_star_c = 2;
  CommonOut th_out;
  threshold->add_option("--family", th_family, "Graph family of the sweep")
      ->check(CLI::IsMember({"complete", "star", "bipartite"}))
      ->capture_default_str();
  threshold->add_option("--metric", th_metric, "Sweep metric")
      ->check(CLI::IsMember({"expectation-gap", "force-prob"}))
      ->capture_default_str();
  threshold->add_option("--n-grid", th_grid, "Sizes to sweep (comma separated)")->delimiter(',')->required();
  threshold->add_option("--p", th_p, "Reversion probability in the expectation gap")->capture_default_str();
  threshold->add_option("--exponent", th_exponent,
                        "c in b = ceil(sqrt(c n ln n)); log factor for --bipartite-rule full-side")
      ->capture_default_str();
  threshold->add_option("--star-offset", th_star_offset, "White-leaf rule for the star family")
      ->check(CLI::IsMember({"constant", "log", "sqrt"}))
      ->capture_default_str();
  threshold->add_option("--star-c", th_star_c, "White-leaf count for --star-offset constant")
      ->capture_default_str();
  threshold->add_option("--bipartite-rule", th_bip_rule, "Blue-count rule for the bipartite family")
      ->check(CLI::IsMember({"balanced", "full-side"}))
      ->capture_default_str();
  add_common_out(threshold, th_out);

  // meanfield
  auto* meanfield = app.add_subcommand("meanfield", "Discrete-time infection-density trajectories");
  GraphSource mf_src;
  std::string mf_model = "ahn";
  double mf_beta = 0.0, mf_p = 0.0;
  std::int64_t mf_horizon = 50;
  std::vector<int> mf_init_blue;
  std::optional<double> mf_init_density;
  bool mf_per_vertex = false;
  int mf_exact_cap = rpzf::kMfExactCapDefault;
  CommonOut mf_out;
  add_graph_source(meanfield, mf_src);
  meanfield->add_option("--model", mf_model, "Recursion: wang | gomez | ahn | pare | sarpzf")
      ->check(CLI::IsMember({"wang", "gomez", "ahn", "pare", "sarpzf"}))
      ->capture_default_str();
  meanfield->add_option("--beta", mf_beta, "Per-neighbor infection probability (ignored by sarpzf)")
      ->capture_default_str();
  meanfield->add_option("--p", mf_p, "Recovery / reversion probability")->capture_default_str();
  meanfield->add_option("--horizon", mf_horizon, "Number of steps")->capture_default_str();
  meanfield->add_option("--init-blue", mf_init_blue, "Vertices starting at probability 1 (default: 0)")
      ->delimiter(',');
  meanfield->add_option("--init-density", mf_init_density, "Uniform initial probability for every vertex");
  meanfield->add_flag("--per-vertex", mf_per_vertex, "Also emit per-vertex probabilities");
  meanfield->add_option("--exact-cap", mf_exact_cap, "Vertex cap for the exact sarpzf forcing term")
      ->capture_default_str();
  add_common_out(meanfield, mf_out);

  // pmf
  auto* pmf = app.add_subcommand("pmf", "Closed-form one-round blue-count pmf for the complete graph");
  std::int64_t pm_n = 0, pm_b = 0;
  double pm_p = 0.5;
  std::string pm_variant = "darpzf";
  CommonOut pm_out;
  pmf->add_option("--n", pm_n, "Vertex count")->required();
  pmf->add_option("--b", pm_b, "Current blue count")->required();
  pmf->add_option("--p", pm_p, "Reversion probability")->capture_default_str();
  pmf->add_option("--variant", pm_variant, "Process variant")
      ->check(CLI::IsMember({"sarpzf", "darpzf"}))
      ->capture_default_str();
  add_common_out(pmf, pm_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return run_analyze(an_src, an_p, an_grid, an_variant, an_space, an_out);
    if (critical->parsed()) return run_critical_p(cr_src, cr_state, cr_tol, cr_scan, cr_space, cr_out);
    if (simulate->parsed())
      return run_simulate(si_src, si_start, si_p, si_grid, si_variant, si_trials, si_max_rounds, si_seed,
                          si_threads, si_out);
    if (threshold->parsed())
      return run_threshold(th_family, th_metric, th_grid, th_p, th_exponent, th_star_offset, th_star_c,
                           th_bip_rule, th_out);
    if (meanfield->parsed())
      return run_meanfield(mf_src, mf_model, mf_beta, mf_p, mf_horizon, mf_init_blue, mf_init_density,
                           mf_per_vertex, mf_exact_cap, mf_out);
    if (pmf->parsed()) return run_pmf(pm_n, pm_b, pm_p, pm_variant, pm_out);
  } catch (const rpzf::ParseError& e) {
    std::cerr << "error (parse): " << e.what() << '\n';
    return 2;
  } catch (const rpzf::DomainError& e) {
    std::cerr << "error (domain): " << e.what() << '\n';
    return 3;
  } catch (const rpzf::SizeError& e) {
    std::cerr << "error (size): " << e.what() << '\n';
    return 4;
  } catch (const rpzf::NumericalError& e) {
    std::cerr << "error (numerical): " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
