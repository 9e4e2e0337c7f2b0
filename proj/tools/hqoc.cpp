#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance_suite.hpp"
#include "hqoc/circuit.hpp"
#include "hqoc/energy_bounds.hpp"
#include "hqoc/error.hpp"
#include "hqoc/gkp.hpp"
#include "hqoc/moments.hpp"
#include "hqoc/pipeline.hpp"
#include "hqoc/report.hpp"
#include "hqoc/simulator.hpp"
#include "hqoc/tradeoff.hpp"

using nlohmann::json;
using namespace hqoc;

namespace {

struct Config {
  std::string input;
  std::string out;
  std::string emit;
  std::string samples;
  std::string report;
  std::string circuit;
  std::string format = "json";
  std::string only;
  std::uint64_t seed = 1;
  std::uint64_t shots = 0;
  double delta = 0.0;
  unsigned ell = 0;
  unsigned m = 0;
  unsigned n = 0;
  unsigned grid_points = 0;
  unsigned mem_cap_mb = 0;
  double s = 0.0;
  double epsilon = 0.0;
  double log2_energy = 0.0;
  bool has_log2_energy = false;
  double d = 4.0;
  unsigned r = 0;
  double radius_delta = 1.0 / 36.0;
  double R = 0.0;
  unsigned n_quad = 1024;
  bool aux = false;
  bool run_simulation = false;
  std::vector<unsigned> x_qubits;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file: " + path);
  out << text;
}

void emit_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<GridSpec> grids_for(const Circuit& c, const Config& cfg) {
  auto grids = auto_grid(c);
  if (cfg.grid_points) {
    if (cfg.grid_points & (cfg.grid_points - 1)) throw ValidationError("--grid-points must be a power of two");
    for (auto& g : grids) g = GridSpec::centered(cfg.grid_points, g.dx);
  }
  return grids;
}

json grids_json(const std::vector<GridSpec>& grids) {
  json out = json::array();
  for (const auto& g : grids) out.push_back({{"n_points", g.n_points}, {"dx", g.dx}, {"x0", g.x0}});
  return out;
}

json window_json(const Window& w) { return {{"r1", w.r1}, {"r2", w.r2}, {"rh1", w.rh1}, {"rh2", w.rh2}}; }

bool has_blackbox(const Circuit& c) {
  for (const auto& g : c.gates)
    if (g.kind == GateKind::Blackbox) return true;
  return false;
}

json circuit_summary(const Circuit& c) {
  const auto params = circuit_params(c);
  json j = analysis_report(params, energy_upper_bound(params));
  j["gate_count"] = c.size();
  j["m"] = c.m;
  j["r"] = c.r;
  return j;
}

int cmd_analyze(const Config& cfg, const json& config) {
  const Circuit c = parse_circuit(read_file(cfg.input));
  json report = report_envelope("analyze", config);
  report["analysis"] = circuit_summary(c);
  if (!has_blackbox(c)) {
    const double r0 = vacuum_radius();
    json windows = json::array();
    for (int a = 0; a < c.m; ++a) windows.push_back(window_json(circuit_mlf(c, a)(Window{-r0, r0, -r0, r0})));
    report["analysis"]["vacuum_windows"] = windows;
  }
  emit_json(cfg.out, report);
  return 0;
}

int cmd_substitute(const Config& cfg, const json&) {
  const Circuit c = parse_circuit(read_file(cfg.input));
  write_text(cfg.out, serialize_circuit(substitute_bounded_strength(c)) + "\n");
  return 0;
}

int cmd_simulate(const Config& cfg, const json& config) {
  const Circuit c = parse_circuit(read_file(cfg.input));
  auto state = vacuum_state(c.m, c.r, grids_for(c, cfg));
  simulate(state, c);
  const auto e = energy_expectation(state);
  json report = report_envelope("simulate", config);
  json windows = json::array();
  for (int a = 0; a < c.m; ++a) windows.push_back(window_json(measured_window(state, a)));
  report["result"] = {{"grids", grids_json(state.grids())},
                      {"norm", state.norm()},
                      {"qubit_probabilities", state.qubit_probabilities()},
                      {"q2", e.q2},
                      {"p2", e.p2},
                      {"energy", e.energy},
                      {"energy_max", e.max},
                      {"mean_position", mean_position(state)},
                      {"measured_windows", windows},
                      {"analysis", circuit_summary(c)}};
  if (cfg.shots) {
    if (cfg.samples.empty()) throw ValidationError("--shots requires --samples <path>");
    std::ofstream csv(cfg.samples);
    if (!csv) throw ValidationError("cannot write output file: " + cfg.samples);
    write_samples_csv(csv, homodyne_sample(state, cfg.shots, cfg.seed));
  }
  emit_json(cfg.out, report);
  return 0;
}

int cmd_prep(const Config& cfg, const json& config) {
  if (!(cfg.delta > 0.0)) throw ValidationError("--delta is required");
  Circuit c;
  json info;
  const double ln_inv = -std::log(cfg.delta);
  if (cfg.n) {
    c = build_prep_circuit(static_cast<int>(cfg.n), cfg.delta);
    info = {{"circuit", "comb_prep"}, {"closed_form_size", prep_circuit_size(static_cast<int>(cfg.n), cfg.delta)}};
  } else {
    if (!cfg.ell) throw ValidationError("--ell or --n is required");
    const int ell = static_cast<int>(cfg.ell);
    if (cfg.m) {
      c = build_wprep(static_cast<int>(cfg.m), ell, cfg.delta);
      const auto b = error_budget(static_cast<int>(cfg.m), ell, cfg.delta, 0);
      info = {{"circuit", "w_prep"}, {"closed_form_size", b.T_prep}, {"size_bound", b.T_prep_bound},
              {"eps_prep", b.eps_prep}};
    } else {
      const auto p = cfg.aux ? aux_prep_info(ell, cfg.delta) : code_prep_info(ell, cfg.delta);
      c = cfg.aux ? build_aux_prep(ell, cfg.delta) : build_code_prep(ell, cfg.delta);
      info = {{"circuit", cfg.aux ? "aux_prep" : "code_prep"},
              {"comb_exponent", p.n},
              {"extra_squeezes", p.extra_reps},
              {"closed_form_size", prep_circuit_size(p.n, cfg.delta) + p.extra_reps},
              {"size_bound", 21.0 * ln_inv},
              {"distance_bound", 25.0 * (std::sqrt(cfg.delta) + std::exp2(2.0 * ell) * cfg.delta * cfg.delta)}};
    }
  }
  info["gate_count"] = c.size();
  info["analysis"] = circuit_summary(c);
  if (cfg.run_simulation) {
    if (cfg.m) {
      const auto v = verify_wprep_factorized(static_cast<int>(cfg.m), static_cast<int>(cfg.ell), cfg.delta);
      info["simulation"] = {{"per_mode_distance", v.per_mode_distance}, {"total_distance", v.total_distance}};
    } else {
      const auto r = cfg.n ? simulate_prep(static_cast<int>(cfg.n), cfg.delta)
                           : simulate_code_prep(static_cast<int>(cfg.ell), cfg.delta, cfg.aux);
      info["simulation"] = {{"trace_distance", r.trace_distance},
                            {"qubit_leakage", r.qubit_leakage},
                            {"grid", grids_json(r.state.grids())}};
      if (cfg.n) info["simulation"]["distance_bound"] = 17.0 * std::sqrt(cfg.delta);
    }
  }
  if (!cfg.emit.empty()) write_text(cfg.emit, serialize_circuit(c) + "\n");
  json report = report_envelope("prep", config);
  report["result"] = info;
  emit_json(cfg.out, report);
  return 0;
}

int cmd_sample(const Config& cfg, const json& config) {
  if (!cfg.n || !cfg.m || !(cfg.delta > 0.0)) throw ValidationError("--n, --m and --delta are required");
  Circuit logical{0, static_cast<int>(cfg.n), {}};
  if (!cfg.circuit.empty()) logical = parse_circuit(read_file(cfg.circuit));
  for (unsigned q : cfg.x_qubits) logical.gates.push_back(Gate::qubit("X", {static_cast<int>(q)}));
  const auto res = run_sampling_scheme(logical, static_cast<int>(cfg.n), static_cast<int>(cfg.m), cfg.delta,
                                       cfg.shots, cfg.seed);
  std::ostringstream csv;
  write_samples_csv(csv, res.shots);
  write_text(cfg.out, csv.str());

  std::map<std::string, std::uint64_t> counts;
  for (const auto& b : res.bits) {
    std::string key;
    for (int v : b) key += static_cast<char>('0' + v);
    ++counts[key];
  }
  json report = report_envelope("sample", config);
  report["result"] = {{"layout", {{"n", res.layout.n}, {"m", res.layout.m}, {"K", res.layout.K},
                                  {"n_prime", res.layout.n_prime}, {"ell", res.layout.ell}}},
                      {"counts", counts},
                      {"qubit_leakage", res.qubit_leakage},
                      {"budget", budget_json(res.budget)},
                      {"analysis", analysis_report(res.params, res.energy)}};
  const std::string text = report.dump(2) + "\n";
  if (!cfg.report.empty())
    write_text(cfg.report, text);
  else if (!cfg.out.empty())
    write_text(cfg.out + ".budget.json", text);
  else
    std::cerr << text;
  return 0;
}

int cmd_tradeoff(const Config& cfg, const json& config) {
  std::vector<double> ns;
  for (double n = 16; n <= 1024; n *= 2) ns.push_back(n);
  const auto table = regime_table(ns, [](double n) { return n * n; }, [](double n) { return 1.0 / n; });
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "regime,n,m,log2_energy\n";
    for (const auto& r : table)
      for (const auto& row : r.rows)
        os << r.name << ',' << format_real(row.n) << ',' << format_real(row.m) << ',' << format_real(row.log2_energy)
           << '\n';
    write_text(cfg.out, os.str());
    return 0;
  }
  if (cfg.format != "json") throw ValidationError("--format must be json or csv");
  json report = report_envelope("tradeoff", config);
  report["regimes"] = regime_json(table);
  const auto k = required_energy_constants();
  report["derived_constants"] = {{"log2_C", k.log2_C}, {"delta", k.delta}, {"mu", k.mu}};
  if (cfg.n && cfg.m && cfg.s > 0) {
    json point;
    if (cfg.has_log2_energy) {
      point["sampling_error_bound"] = sampling_error_bound(cfg.n, cfg.m, cfg.s, cfg.log2_energy);
      point["log2_sampling_error_bound"] = log2_sampling_error_bound(cfg.n, cfg.m, cfg.s, cfg.log2_energy);
    }
    if (cfg.epsilon > 0) point["log2_required_energy"] = log2_required_energy(cfg.n, cfg.m, cfg.s, cfg.epsilon);
    report["point"] = point;
  }
  if (cfg.ell && cfg.delta > 0 && cfg.s > 0) {
    const auto b = implementation_energy_bound(cfg.s, static_cast<int>(cfg.ell), cfg.delta);
    report["implementation"] = {{"log2_energy", b.log2_energy},
                                {"log2_xi_bar_bound", b.log2_xi_bar_bound},
                                {"log2_g_bar_bound", b.log2_g_bar_bound}};
    if (cfg.delta < 0.25)
      report["implementation"]["analyzer_log2_energy"] =
          analyzer_wtot_log2_energy(static_cast<long>(cfg.s), std::max(1, static_cast<int>(cfg.m)),
                                    static_cast<int>(cfg.ell), cfg.delta);
  }
  if (cfg.ell && cfg.s > 0 && cfg.has_log2_energy)
    report["log2_delta_max"] = log2_delta_max(cfg.s, static_cast<int>(cfg.ell), cfg.log2_energy);
  emit_json(cfg.out, report);
  return 0;
}

int cmd_lowerbound(const Config& cfg, const json& config) {
  const int m = cfg.m ? static_cast<int>(cfg.m) : 1;
  json report = report_envelope("lowerbound", config);
  report["radius_dimension_bound"] = radius_dimension_bound(cfg.d, m, static_cast<int>(cfg.r), cfg.radius_delta);
  const auto sc = mode_scalings(std::log2(cfg.d), m);
  report["mode_scalings"] = {{"log2_symradius_scaling", sc.log2_symradius}, {"log2_energy_scaling", sc.log2_energy}};
  if (cfg.R > 0) {
    const auto ds = donoho_stark_trace(cfg.R, static_cast<int>(cfg.n_quad));
    report["donoho_stark"] = {{"R", cfg.R},
                              {"n_quad", cfg.n_quad},
                              {"trace", ds.trace},
                              {"exact_trace", ds.exact_trace},
                              {"max_eigenvalue", ds.max_eigenvalue},
                              {"min_eigenvalue", ds.min_eigenvalue}};
  }
  if (!cfg.circuit.empty()) {
    const Circuit c = parse_circuit(read_file(cfg.circuit));
    auto state = vacuum_state(c.m, c.r, grids_for(c, cfg));
    simulate(state, c);
    const double radius = state_symradius(state, cfg.radius_delta);
    const auto lb = energy_lower_bound_from_radius(radius, cfg.radius_delta, c.m);
    const auto e = energy_expectation(state);
    double total = 0.0;
    for (double v : e.energy) total += v;
    report["state"] = {{"symradius", radius},
                       {"energy_lower_bound", lb.per_mode},
                       {"total_energy_lower_bound", lb.total},
                       {"measured_energy", e.max},
                       {"measured_total_energy", total}};
  }
  emit_json(cfg.out, report);
  return 0;
}

int cmd_verify(const Config& cfg) {
  std::vector<int> ids;
  std::stringstream ss(cfg.only);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) {
      const int id = std::stoi(tok);
      if (id < 1 || id > acceptance::kCriterionCount) throw ValidationError("unknown criterion " + tok);
      ids.push_back(id);
    }
  std::ostringstream log;
  const auto results = acceptance::run(ids, log);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  write_text(cfg.out, log.str());
  return failed ? 1 : 0;
}

void fail(const char* kind, const std::string& msg) {
  std::cerr << json{{"error", msg}, {"kind", kind}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid qubit-oscillator circuit toolkit"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output path (stdout when omitted)");
    sub->add_option("--mem-cap-mb", cfg.mem_cap_mb, "Simulation memory cap in MiB (overrides HQOC_MEM_CAP_MB)");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--grid-points", cfg.grid_points, "Override grid points per mode (power of two)");
  };

  auto* analyze = app.add_subcommand("analyze", "Moment analysis and energy bound of a circuit");
  analyze->add_option("circuit", cfg.input, "Circuit JSON")->required();
  common(analyze);

  auto* substitute = app.add_subcommand("substitute", "Rewrite displacements of strength > 1");
  substitute->add_option("circuit", cfg.input, "Circuit JSON")->required();
  common(substitute);

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a circuit from the vacuum");
  simulate_cmd->add_option("circuit", cfg.input, "Circuit JSON")->required();
  simulate_cmd->add_option("--shots", cfg.shots, "Homodyne shots");
  simulate_cmd->add_option("--seed", cfg.seed, "Sampling seed");
  simulate_cmd->add_option("--samples", cfg.samples, "Sample CSV path");
  common(simulate_cmd);
  grid(simulate_cmd);

  auto* prep = app.add_subcommand("prep", "Build a preparation circuit");
  prep->add_option("--delta", cfg.delta, "Peak width")->required();
  prep->add_option("--ell", cfg.ell, "Bits per mode");
  prep->add_option("--n", cfg.n, "Comb exponent (builds the 2^n comb preparation)");
  prep->add_option("--m", cfg.m, "Mode count (builds the full initial-state preparation)");
  prep->add_flag("--aux", cfg.aux, "Auxiliary-state preparation");
  prep->add_flag("--simulate", cfg.run_simulation, "Simulate and compare against the target state");
  prep->add_option("--emit", cfg.emit, "Write the circuit JSON here");
  common(prep);

  auto* sample = app.add_subcommand("sample", "Run the sampling scheme");
  sample->add_option("--n", cfg.n, "Logical qubits")->required();
  sample->add_option("--m", cfg.m, "Modes")->required();
  sample->add_option("--delta", cfg.delta, "Peak width")->required();
  sample->add_option("--shots", cfg.shots, "Shots")->default_val(1000);
  sample->add_option("--seed", cfg.seed, "Sampling seed");
  sample->add_option("--circuit", cfg.circuit, "Logical circuit JSON (X gates only)");
  sample->add_option("--x", cfg.x_qubits, "Apply logical X to these qubits");
  sample->add_option("--report", cfg.report, "Budget JSON path");
  common(sample);

  auto* tradeoff = app.add_subcommand("tradeoff", "Energy/modes trade-off calculator");
  tradeoff->add_option("--n", cfg.n, "Logical qubits");
  tradeoff->add_option("--m", cfg.m, "Modes");
  tradeoff->add_option("--s", cfg.s, "Logical circuit size");
  tradeoff->add_option("--epsilon", cfg.epsilon, "Target L1 error");
  auto* le = tradeoff->add_option("--log2-energy", cfg.log2_energy, "Available energy, log2");
  tradeoff->add_option("--ell", cfg.ell, "Bits per mode");
  tradeoff->add_option("--delta", cfg.delta, "Peak width");
  tradeoff->add_option("--format", cfg.format, "json or csv");
  common(tradeoff);

  auto* lower = app.add_subcommand("lowerbound", "Energy lower bounds");
  lower->add_option("--d", cfg.d, "Code dimension");
  lower->add_option("--m", cfg.m, "Modes");
  lower->add_option("--r", cfg.r, "Qubits");
  lower->add_option("--radius-delta", cfg.radius_delta, "Tail mass delta");
  lower->add_option("--R", cfg.R, "Donoho-Stark window radius");
  lower->add_option("--n-quad", cfg.n_quad, "Quadrature nodes");
  lower->add_option("--circuit", cfg.circuit, "Circuit whose output state is measured");
  common(lower);
  grid(lower);

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", cfg.only, "Comma-separated criterion ids");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.has_log2_energy = le->count() > 0;
  if (cfg.mem_cap_mb) setenv("HQOC_MEM_CAP_MB", std::to_string(cfg.mem_cap_mb).c_str(), 1);

  CLI::App* sub = app.get_subcommands().front();
  json config = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    const auto res = opt->results();
    if (res.empty() && opt->get_default_str().empty()) continue;
    std::string key = opt->get_name();
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (res.size() > 1)
      config[key] = res;
    else
      config[key] = res.empty() ? opt->get_default_str() : res.front();
  }
  config["seed"] = cfg.seed;

  try {
    const std::string name = sub->get_name();
    if (name == "analyze") return cmd_analyze(cfg, config);
    if (name == "substitute") return cmd_substitute(cfg, config);
    if (name == "simulate") return cmd_simulate(cfg, config);
    if (name == "prep") return cmd_prep(cfg, config);
    if (name == "sample") return cmd_sample(cfg, config);
    if (name == "tradeoff") return cmd_tradeoff(cfg, config);
    if (name == "lowerbound") return cmd_lowerbound(cfg, config);
    return cmd_verify(cfg);
  } catch (const ResourceError& e) {
    fail("resource", e.what());
    return 2;
  } catch (const ValidationError& e) {
    fail("validation", e.what());
    return 1;
  } catch (const json::exception& e) {
    fail("validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    fail("error", e.what());
    return 1;
  }
}
