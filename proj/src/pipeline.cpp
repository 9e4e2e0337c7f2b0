#include "hqoc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSampledModes = 8;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.25)) throw ValidationError("delta must lie in (0, 1/4)");
}

void check_encoding_hypothesis(int ell, double delta) {
  check_delta(delta);
  if (ell < 1 || ell > 30) throw ValidationError("ell must be a positive integer");
  if (delta > std::ldexp(1.0, -(ell + 1)))
    throw ValidationError("delta exceeds 2^-(ell+1) for ell = " + std::to_string(ell));
}

Circuit on_mode(const Circuit& c, int mode, int m, int r) {
  Circuit out{m, r, {}};
  for (Gate g : c.gates) {
    if (g.is_oscillator()) g.mode = mode;
    out.gates.push_back(std::move(g));
  }
  return out;
}

double log2_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

}  // namespace

long prep_circuit_size(int n, double delta) { return 5L * n + ceil_log2_inv(delta) + 3; }

Circuit build_prep_circuit(int n, double delta) {
  if (!(delta > 0.0 && delta <= 0.25)) throw ValidationError("delta must lie in (0, 1/4]");
  if (n < 1 || n > 40) throw ValidationError("n must lie in [1, 40]");
  const int k = ceil_log2_inv(delta);
  const double z_delta = std::log2(1.0 / delta) / k;
  Circuit c{1, 1, {}};
  for (int i = 0; i < k; ++i) c.gates.push_back(Gate::squeeze(0, std::exp2(-z_delta)));
  for (int i = 0; i < n; ++i) c.gates.push_back(Gate::squeeze(0, 0.5));
  c.gates.push_back(Gate::qubit("H", {0}));
  auto push_v = [&] {
    c.gates.push_back(Gate::squeeze(0, 2.0));
    c.gates.push_back(Gate::ctrl_disp_p(0, 0, 1.0));
    c.gates.push_back(Gate::qubit("H", {0}));
    c.gates.push_back(Gate::ctrl_disp_q(0, 0, kPi));
  };
  push_v();
  c.gates.push_back(Gate::disp_p(0, -1.0));
  for (int i = 1; i < n; ++i) push_v();
  c.gates.push_back(Gate::qubit("H", {0}));
  return c;
}

GkpParams code_params(int ell, double delta) {
  check_encoding_hypothesis(ell, delta);
  return canonical_params(delta, 1L << ell);
}

CodePrepInfo code_prep_info(int ell, double delta) {
  const auto p = code_params(ell, delta);
  CodePrepInfo info;
  info.n = p.n_peaks_exp;
  info.d = p.d;
  info.eps = p.eps;
  const double target = std::log2(std::sqrt(2.0 * kPi * static_cast<double>(p.d)));
  info.extra_reps = static_cast<int>(std::ceil(target));
  info.z_d = target / info.extra_reps;
  return info;
}

CodePrepInfo aux_prep_info(int ell, double delta) {
  check_encoding_hypothesis(ell, delta);
  const auto p = aux_params(ell, delta);
  CodePrepInfo info;
  info.n = p.n_peaks_exp;
  info.d = 2;
  info.eps = p.eps;
  const double target = std::log2(std::sqrt(4.0 * kPi));
  info.extra_reps = static_cast<int>(std::ceil(target));
  info.z_d = target / info.extra_reps;
  return info;
}

namespace {
Circuit code_prep_from(const CodePrepInfo& info, double delta) {
  Circuit c = build_prep_circuit(info.n, delta);
  for (int i = 0; i < info.extra_reps; ++i) c.gates.push_back(Gate::squeeze(0, std::exp2(info.z_d)));
  return c;
}
}  // namespace

Circuit build_code_prep(int ell, double delta) { return code_prep_from(code_prep_info(ell, delta), delta); }
Circuit build_aux_prep(int ell, double delta) { return code_prep_from(aux_prep_info(ell, delta), delta); }

Circuit build_wprep(int m, int ell, double delta) {
  if (m < 1) throw ValidationError("m must be positive");
  const Circuit code = build_code_prep(ell, delta);
  const Circuit aux = build_aux_prep(ell, delta);
  Circuit w{m + 1, 1, {}};
  for (int a = 0; a < m; ++a)
    for (auto& g : on_mode(code, a, m + 1, 1).gates) w.gates.push_back(std::move(g));
  for (auto& g : on_mode(aux, m, m + 1, 1).gates) w.gates.push_back(std::move(g));
  return w;
}

Gate bit_transfer_blackbox(int ell, int mode, int aux_mode, int qubit) {
  const long lr = 36L * ell;
  const double g = 4.0 * std::exp2(37.0 * ell);
  std::vector<int> qubits;
  for (int q = 0; q <= qubit; ++q) qubits.push_back(q);
  return Gate::blackbox("bit_transfer", {mode, aux_mode}, qubits, g, static_cast<double>(lr), 1.0, lr);
}

Circuit build_wu(const Circuit& logical, int m, int ell) {
  if (ell > 6) throw ResourceError("declared bit-transfer parameters overflow for ell > 6");
  const auto layout = EncodingLayout{logical.r, m, 0, m * ell, ell};
  if (logical.r > m * ell) throw ValidationError("logical circuit has more qubits than the encoding holds");
  Circuit w{m + 1, 3, {}};
  for (std::size_t i = 0; i < logical.gates.size(); ++i) {
    const auto& g = logical.gates[i];
    if (g.kind != GateKind::QubitGate)
      throw ValidationError("logical circuit must contain qubit gates only at gate " + std::to_string(i + 1));
    const int a0 = layout.locate(g.qubits[0]).first;
    const int a1 = g.qubits.size() == 2 ? layout.locate(g.qubits[1]).first : a0;
    const Gate bt0 = bit_transfer_blackbox(ell, a0, m, 2);
    const Gate bt1 = bit_transfer_blackbox(ell, a1, m, 2);
    Gate core = g;
    core.qubits = g.qubits.size() == 2 ? std::vector<int>{1, 2} : std::vector<int>{1};
    w.gates.push_back(bt0);
    w.gates.push_back(bt1);
    w.gates.push_back(core);
    w.gates.push_back(adjoint_gate(bt1));
    w.gates.push_back(adjoint_gate(bt0));
  }
  return w;
}

CircuitMomentParams wu_params(long s, int m, int ell) {
  Circuit pair{m + 1, 3, {bit_transfer_blackbox(ell, 0, m, 2), bit_transfer_blackbox(ell, 0, m, 2)}};
  Circuit v{0, 3, {Gate::qubit("H", {1})}};
  std::vector<std::pair<Circuit, Circuit>> parts(static_cast<std::size_t>(s), {pair, v});
  return dressed_params(parts);
}

Circuit build_wtot_annotated(long s, int m, int ell, double delta) {
  Circuit prep = build_wprep(m, ell, delta);
  Circuit w{m + 1, 3, prep.gates};
  const auto wu = wu_params(s, m, ell);
  std::vector<int> modes;
  for (int a = 0; a <= m; ++a) modes.push_back(a);
  const double g = s > 0 ? wu.g_bar_max : 1.0;
  w.gates.push_back(Gate::blackbox("W_U", modes, {0, 1, 2}, g, wu.xi_bar_max, 1.0, s * (144L * ell + 1)));
  return w;
}

std::pair<int, int> EncodingLayout::locate(int qubit) const {
  if (qubit < 0 || qubit >= n_prime) throw ValidationError("logical qubit out of range");
  return {qubit / ell, ell - 1 - qubit % ell};
}

EncodingLayout make_layout(int n, int m) {
  if (n < 1 || m < 1) throw ValidationError("n and m must be positive");
  EncodingLayout l;
  l.n = n;
  l.m = m;
  l.K = ((-n) % m + m) % m;
  l.n_prime = n + l.K;
  l.ell = l.n_prime / m;
  return l;
}

long discretize(double x, int ell) {
  const long d = 1L << ell;
  const double spacing = std::sqrt(2.0 * kPi / static_cast<double>(d));
  const long v = static_cast<long>(std::nearbyint(x / spacing));
  return ((v % d) + d) % d;
}

std::vector<int> iota_inverse(long value, int ell) {
  std::vector<int> bits(static_cast<std::size_t>(ell));
  for (int j = 0; j < ell; ++j) bits[static_cast<std::size_t>(ell - 1 - j)] = static_cast<int>((value >> j) & 1);
  return bits;
}

long iota(const std::vector<int>& bits) {
  long v = 0;
  for (int b : bits) v = 2 * v + b;
  return v;
}

std::vector<int> post_process(const std::vector<double>& y, const EncodingLayout& layout) {
  if (y.size() != static_cast<std::size_t>(layout.m)) throw ValidationError("expected one outcome per mode");
  std::vector<int> bits;
  for (double v : y)
    for (int b : iota_inverse(discretize(v, layout.ell), layout.ell)) bits.push_back(b);
  bits.resize(static_cast<std::size_t>(layout.n));
  return bits;
}

std::vector<long> encode_basis(const std::vector<int>& bits, const EncodingLayout& layout) {
  std::vector<long> j(static_cast<std::size_t>(layout.m), 0);
  for (int q = 0; q < layout.n && q < static_cast<int>(bits.size()); ++q) {
    const auto [a, pos] = layout.locate(q);
    if (bits[static_cast<std::size_t>(q)]) j[static_cast<std::size_t>(a)] |= 1L << pos;
  }
  return j;
}

ErrorBudget error_budget(int m, int ell, double delta, long s) {
  if (m < 1 || ell < 1 || !(delta > 0.0) || s < 0) throw ValidationError("budget parameters must be positive");
  ErrorBudget b;
  const double q = std::exp2(2.0 * ell);
  b.eps_prep = 50.0 * m * (std::sqrt(delta) + q * delta * delta);
  b.eps_gate = 600.0 * static_cast<double>(s) * q * delta;
  b.eps_final = b.eps_prep + b.eps_gate;
  b.l1_bound = std::min(2.0, b.eps_final);
  if (delta < 0.25 && delta <= std::ldexp(1.0, -(ell + 1))) {
    const long n = 2L * (ceil_log2_inv(delta) - ell);
    const auto extra = [](double d) { return static_cast<long>(std::ceil(std::log2(std::sqrt(2.0 * kPi * d)))); };
    const long code = prep_circuit_size(static_cast<int>(n), delta) + extra(std::exp2(ell));
    const long aux = prep_circuit_size(static_cast<int>(n), delta) + extra(2.0);
    b.T_prep = m * code + aux;
  }
  b.T_logical = s * (144L * ell + 1);
  b.T_total = b.T_prep + b.T_logical;
  b.T_prep_bound = 42.0 * m * std::log(1.0 / delta);
  b.T_logical_bound = 340.0 * static_cast<double>(s) * ell * ell;
  return b;
}

LogBudget log_budget(int m, int ell, double delta, long s) {
  if (m < 1 || ell < 1 || !(delta > 0.0) || s < 0) throw ValidationError("budget parameters must be positive");
  LogBudget b;
  const double ld = std::log2(delta);
  const double ls = s > 0 ? std::log2(static_cast<double>(s)) : -INFINITY;
  const double ln_inv = -std::log(delta);
  b.log2_eps_prep = std::log2(50.0 * m) + log2_add(0.5 * ld, 2.0 * ell + 2.0 * ld);
  b.log2_eps_gate = std::log2(600.0) + ls + 2.0 * ell + ld;
  b.log2_eps_final = log2_add(b.log2_eps_prep, b.log2_eps_gate);
  b.log2_wu_xi_bar = std::log2(72.0) + ls + ell;
  b.log2_wu_g_bar = 8.0 + 148.0 * ell;
  b.log2_wtot_xi_bar = log2_add(b.log2_wu_xi_bar, std::log2(-10.0 * ld));
  b.log2_wtot_g_bar = 10.0 + 148.0 * ell - 3.0 * ld;
  b.log2_wtot_energy = 3.0 * ls + 891.0 * ell + 62.0 - 21.0 * ld;
  b.log2_wprep_energy = 12.0 - 18.0 * ld + log2_add(1.0, std::log2(1000.0) + 3.0 * std::log2(-ld));
  b.log2_size_prep_bound = std::log2(42.0 * m * ln_inv);
  b.log2_size_logical_bound = std::log2(340.0) + ls + 2.0 * std::log2(static_cast<double>(ell));
  return b;
}

nlohmann::json budget_json(const ErrorBudget& b) {
  return {{"eps_prep", b.eps_prep},
          {"eps_gate", b.eps_gate},
          {"eps_final", b.eps_final},
          {"l1_bound", b.l1_bound},
          {"sizes",
           {{"T_prep", b.T_prep},
            {"T_logical", b.T_logical},
            {"T_total", b.T_total},
            {"T_prep_bound", b.T_prep_bound},
            {"T_logical_bound", b.T_logical_bound}}}};
}

namespace {

HybridState embed_with_qubits(const HybridState& mode_state, int r) {
  HybridState out(1, r, mode_state.grids());
  std::copy(mode_state.amps().begin(), mode_state.amps().end(), out.amps().begin());
  return out;
}

PrepSimulation run_and_compare(const Circuit& c, const CombStateSpec& target, const AutoGridOptions& opt) {
  const auto grids = auto_grid(c, opt);
  PrepSimulation out;
  out.state = vacuum_state(1, 1, grids);
  simulate(out.state, c);
  const auto ref = embed_with_qubits(comb_wavefunction(target, out.state.grids()[0]), 1);
  out.trace_distance = trace_distance(out.state, ref);
  out.qubit_leakage = out.state.qubit_probabilities()[1];
  return out;
}

}  // namespace

PrepSimulation simulate_prep(int n, double delta, const AutoGridOptions& opt) {
  return run_and_compare(build_prep_circuit(n, delta), integer_comb_spec(1L << n, delta), opt);
}

PrepSimulation simulate_code_prep(int ell, double delta, bool aux, const AutoGridOptions& opt) {
  const auto params = aux ? aux_params(ell, delta) : code_params(ell, delta);
  const auto c = aux ? build_aux_prep(ell, delta) : build_code_prep(ell, delta);
  return run_and_compare(c, code_state_spec(params, 0), opt);
}

WprepVerification verify_wprep_factorized(int m, int ell, double delta, const AutoGridOptions& opt) {
  if (m < 1) throw ValidationError("m must be positive");
  WprepVerification v;
  const double code = simulate_code_prep(ell, delta, false, opt).trace_distance;
  const double aux = simulate_code_prep(ell, delta, true, opt).trace_distance;
  for (int a = 0; a < m; ++a) v.per_mode_distance.push_back(code);
  v.per_mode_distance.push_back(aux);
  v.total_distance = m * code + aux;
  v.bound = 50.0 * m * (std::sqrt(delta) + std::exp2(2.0 * ell) * delta * delta);
  return v;
}

SamplingResult run_sampling_scheme(const Circuit& logical, int n, int m, double delta, std::uint64_t shots,
                                   std::uint64_t seed, const AutoGridOptions& opt) {
  if (logical.m != 0 || logical.r != n) throw ValidationError("logical circuit must act on n qubits and no modes");
  validate_circuit(logical);
  if (m > kMaxSampledModes) throw ResourceError("scale cap exceeded: at most 8 sampled modes");
  SamplingResult res;
  res.layout = make_layout(n, m);
  const int ell = res.layout.ell;
  check_encoding_hypothesis(ell, delta);
  const double unit = std::sqrt(2.0 * kPi / std::exp2(ell));

  std::vector<Circuit> per_mode(static_cast<std::size_t>(m), build_code_prep(ell, delta));
  std::vector<int> bits(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < logical.gates.size(); ++i) {
    const auto& g = logical.gates[i];
    if (g.kind != GateKind::QubitGate || g.name != "X")
      throw ValidationError("only logical X gates can be simulated without bit-transfer internals at gate " +
                            std::to_string(i + 1));
    const int q = g.qubits[0];
    const auto [a, pos] = res.layout.locate(q);
    const double sign = bits[static_cast<std::size_t>(q)] ? -1.0 : 1.0;
    bits[static_cast<std::size_t>(q)] ^= 1;
    per_mode[static_cast<std::size_t>(a)].gates.push_back(Gate::disp_p(0, sign * unit * std::exp2(pos)));
  }

  Circuit physical{m, 1, {}};
  std::vector<std::vector<HomodyneShot>> mode_shots;
  for (int a = 0; a < m; ++a) {
    const auto& c = per_mode[static_cast<std::size_t>(a)];
    for (auto& g : on_mode(c, a, m, 1).gates) physical.gates.push_back(std::move(g));
    auto state = vacuum_state(1, 1, auto_grid(c, opt));
    simulate(state, c);
    res.qubit_leakage += state.qubit_probabilities()[1];
    mode_shots.push_back(homodyne_sample(state, shots, seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(a)));
  }

  for (std::uint64_t k = 0; k < shots; ++k) {
    HomodyneShot shot;
    int z = 0;
    for (int a = 0; a < m; ++a) {
      const auto& s = mode_shots[static_cast<std::size_t>(a)][k];
      shot.y.push_back(s.y[0]);
      z |= s.z[0];
    }
    shot.z = {z};
    res.bits.push_back(post_process(shot.y, res.layout));
    res.shots.push_back(std::move(shot));
  }

  res.budget = error_budget(m, ell, delta, static_cast<long>(logical.gates.size()));
  res.params = circuit_params(physical);
  res.energy = energy_upper_bound(res.params);
  return res;
}

}  // namespace hqoc
