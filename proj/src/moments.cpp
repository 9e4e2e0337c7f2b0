#include "hqoc/moments.hpp"

#include <algorithm>
#include <cmath>

#include "hqoc/error.hpp"

namespace hqoc {

Window MomentWindowMap::operator()(const Window& w) const {
  return {f[0](w.r1), f[1](w.r2), f[2](w.rh1), f[3](w.rh2)};
}

MomentWindowMap identity_mlf() { return {}; }

MomentWindowMap chi_mlf(double eta, double xi) {
  MomentWindowMap m;
  m.f = {Affine{eta, -xi}, Affine{eta, xi}, Affine{1.0 / eta, -xi}, Affine{1.0 / eta, xi}};
  return m;
}

MomentWindowMap generator_mlf(const Gate& g) {
  MomentWindowMap m;
  const double at = std::abs(g.t);
  switch (g.kind) {
    case GateKind::DispP: m.f[0].b = g.t; m.f[1].b = g.t; break;
    case GateKind::DispQ: m.f[2].b = g.t; m.f[3].b = g.t; break;
    case GateKind::CtrlDispP: m.f[0].b = -at; m.f[1].b = at; break;
    case GateKind::CtrlDispQ: m.f[2].b = -at; m.f[3].b = at; break;
    case GateKind::Squeeze:
      m.f = {Affine{g.alpha, 0}, Affine{g.alpha, 0}, Affine{1.0 / g.alpha, 0}, Affine{1.0 / g.alpha, 0}};
      break;
    case GateKind::QubitGate: break;
    case GateKind::Blackbox: return chi_mlf(g.eta, g.xi_bar);
  }
  return m;
}

MomentWindowMap compose_mlf(const MomentWindowMap& outer, const MomentWindowMap& inner) {
  MomentWindowMap m;
  for (std::size_t i = 0; i < 4; ++i) m.f[i] = {outer.f[i].a * inner.f[i].a, outer.f[i].a * inner.f[i].b + outer.f[i].b};
  return m;
}

bool dominates(const Window& chi, const Window& phi) {
  return phi.r1 >= chi.r1 && phi.r2 <= chi.r2 && phi.rh1 >= chi.rh1 && phi.rh2 <= chi.rh2;
}

std::vector<MomentWindowMap> prefix_mlfs(const Circuit& c, int mode) {
  std::vector<MomentWindowMap> out{identity_mlf()};
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    if (g.kind == GateKind::Blackbox)
      throw ValidationError("window query on blackbox at gate " + std::to_string(i + 1));
    if (!g.acts_on_mode(mode)) continue;
    out.push_back(compose_mlf(generator_mlf(g), out.back()));
  }
  return out;
}

MomentWindowMap circuit_mlf(const Circuit& c, int mode) { return prefix_mlfs(c, mode).back(); }

double log_g_bar_prefix(const std::vector<double>& log_eta) {
  double s = 0.0, lo = 0.0, hi = 0.0;
  for (double l : log_eta) {
    s += l;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

double log_g_bar_bruteforce(const std::vector<double>& log_eta) {
  double best = 0.0;
  for (std::size_t p = 0; p < log_eta.size(); ++p) {
    double s = 0.0;
    for (std::size_t q = p; q < log_eta.size(); ++q) {
      s += log_eta[q];
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

namespace {

struct Segment {
  double log_g = 0.0, xi_bar = 0.0, log_eta = 0.0, xi = 0.0, xi_hat = 0.0;
};

Segment exact_segment(const std::vector<const Gate*>& gates) {
  Segment s;
  std::vector<double> le;
  le.reserve(gates.size());
  for (const Gate* g : gates) {
    const auto p = gate_params(*g);
    le.push_back(std::log(p.eta));
    s.xi_bar += p.xi;
    s.xi = p.eta * s.xi + p.xi;
    s.xi_hat = s.xi_hat / p.eta + p.xi;
    s.log_eta += le.back();
  }
  s.log_g = log_g_bar_prefix(le);
  return s;
}

}  // namespace

ModeParams mode_params(const Circuit& c, int mode) {
  std::vector<Segment> segs;
  std::vector<const Gate*> run;
  bool has_blackbox = false;
  for (const auto& g : c.gates) {
    if (!g.acts_on_mode(mode)) continue;
    if (g.kind == GateKind::Blackbox) {
      has_blackbox = true;
      if (!run.empty()) segs.push_back(exact_segment(run));
      run.clear();
      Segment b;
      b.log_g = std::log(g.g_bar);
      b.xi_bar = g.xi_bar;
      b.log_eta = std::log(g.eta);
      b.xi = b.xi_hat = g.g_bar * g.xi_bar;
      segs.push_back(b);
    } else {
      run.push_back(&g);
    }
  }
  if (!run.empty() || segs.empty()) segs.push_back(exact_segment(run));

  ModeParams p;
  p.exact = !has_blackbox;
  double sum_log_g = 0.0, max_log_g = 0.0, sum_abs_log_eta = 0.0, log_eta = 0.0;
  for (const auto& s : segs) {
    p.xi_bar += s.xi_bar;
    const double e = std::exp(s.log_eta);
    p.xi = e * p.xi + s.xi;
    p.xi_hat = p.xi_hat / e + s.xi_hat;
    sum_log_g += s.log_g;
    max_log_g = std::max(max_log_g, s.log_g);
    sum_abs_log_eta += std::abs(s.log_eta);
    log_eta += s.log_eta;
  }
  p.log_g_bar = segs.size() == 1 ? segs[0].log_g : std::min(sum_log_g, 2.0 * max_log_g + sum_abs_log_eta);
  p.g_bar = std::exp(p.log_g_bar);
  p.eta = std::exp(log_eta);
  return p;
}

CircuitMomentParams combine_modes(std::vector<ModeParams> per_mode) {
  CircuitMomentParams out;
  out.per_mode = std::move(per_mode);
  for (const auto& p : out.per_mode) {
    out.log_g_bar_max = std::max(out.log_g_bar_max, p.log_g_bar);
    out.xi_bar_max = std::max(out.xi_bar_max, p.xi_bar);
  }
  out.g_bar_max = std::exp(out.log_g_bar_max);
  return out;
}

CircuitMomentParams circuit_params(const Circuit& c) {
  std::vector<ModeParams> per_mode;
  for (int a = 0; a < c.m; ++a) per_mode.push_back(mode_params(c, a));
  return combine_modes(std::move(per_mode));
}

double energy_p0(double y, double xi) {
  return 4.0 + 20.0 * xi * y + 36.0 * xi * xi * y * y + 20.0 * xi * xi * xi * y * y * y;
}
double energy_p1(double y, double xi) { return 8.0 * (xi * xi * y * y * y + xi * y * y); }
double energy_p2(double y, double xi) { return 4.0 * (xi * y * y * y + y * y); }

double coarse_energy_bound(double g_bar, double xi_bar) {
  return 168.0 * std::pow(g_bar, 6) * (2.0 + xi_bar * xi_bar * xi_bar);
}

double log2_coarse_energy_bound(double log_g_bar, double xi_bar) {
  return std::log2(168.0) + 6.0 * log_g_bar / std::log(2.0) + std::log2(2.0 + xi_bar * xi_bar * xi_bar);
}

EnergyBoundDetail energy_upper_bound(const CircuitMomentParams& p) {
  EnergyBoundDetail d;
  d.coarse = coarse_energy_bound(p.g_bar_max, p.xi_bar_max);
  d.log2_coarse = log2_coarse_energy_bound(p.log_g_bar_max, p.xi_bar_max);
  d.bound = d.coarse;
  ModeParams worst;
  double worst_tight = -1.0;
  std::vector<ModeParams> modes = p.per_mode;
  if (modes.empty()) modes.push_back(ModeParams{});
  for (const auto& m : modes) {
    const double b = std::max(m.xi, m.xi_hat);
    const double u = energy_p0(m.eta, b) + energy_p0(1.0 / m.eta, b);
    const double v = energy_p2(m.eta, b) + energy_p2(1.0 / m.eta, b);
    if (u + v > worst_tight) {
      worst_tight = u + v;
      worst = m;
      d.u = u;
      d.v = v;
    }
  }
  const double b = std::max(worst.xi, worst.xi_hat);
  d.c0 = energy_p0(1.0 / worst.eta, b);
  d.c1 = energy_p1(1.0 / worst.eta, b);
  d.c2 = energy_p2(1.0 / worst.eta, b);
  d.tight = d.u + d.v;
  return d;
}

SubstitutionPlan substitution_plan(double t) {
  SubstitutionPlan plan;
  plan.sign = t < 0 ? -1 : 1;
  const double at = std::abs(t);
  if (!(at > 1.0)) return plan;
  const double l = std::log2(at);
  plan.n_reps = static_cast<int>(std::ceil(l - 1e-12 * std::max(1.0, l)));
  plan.n_reps = std::max(plan.n_reps, 1);
  plan.beta = std::exp2(l / plan.n_reps);
  return plan;
}

std::vector<Gate> substitute_gate(const Gate& g) {
  if (!g.is_displacement() || !(std::abs(g.t) > 1.0)) return {g};
  const auto plan = substitution_plan(g.t);
  Gate unit = g;
  unit.t = plan.sign;
  const bool position_kick = g.kind == GateKind::DispQ || g.kind == GateKind::CtrlDispQ;
  const double first = position_kick ? plan.beta : 1.0 / plan.beta;
  std::vector<Gate> out;
  for (int i = 0; i < plan.n_reps; ++i) out.push_back(Gate::squeeze(g.mode, first));
  out.push_back(unit);
  for (int i = 0; i < plan.n_reps; ++i) out.push_back(Gate::squeeze(g.mode, 1.0 / first));
  return out;
}

Circuit substitute_bounded_strength(const Circuit& c) {
  Circuit out{c.m, c.r, {}};
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    if (g.kind == GateKind::Squeeze && !(g.alpha >= 0.5 && g.alpha <= 2.0))
      throw ValidationError("squeeze outside [1/2, 2] at gate " + std::to_string(i + 1));
    for (auto& h : substitute_gate(g)) out.gates.push_back(std::move(h));
  }
  return out;
}

SubstitutionBounds substitution_bounds(const Circuit& original) {
  SubstitutionBounds b;
  for (std::size_t i = 0; i < original.gates.size(); ++i) {
    const auto& g = original.gates[i];
    if (g.kind == GateKind::Blackbox)
      throw ValidationError("substitution bounds undefined for blackbox at gate " + std::to_string(i + 1));
    if (g.is_displacement()) b.zeta = std::max(b.zeta, std::abs(g.t));
  }
  const double log_zeta2 = 2.0 * std::log(b.zeta);
  for (int a = 0; a < original.m; ++a) {
    double xi = 0.0, log_g = log_zeta2;
    long rest = 0;
    for (const auto& g : original.gates) {
      if (!g.acts_on_mode(a)) continue;
      if (g.is_displacement() && std::abs(g.t) > 1.0) {
        xi += 1.0;
      } else {
        const auto p = gate_params(g);
        xi += p.xi;
        log_g += std::abs(std::log(p.eta));
        ++rest;
      }
    }
    b.xi_bar_bound.push_back(xi);
    b.log_g_bar_bound.push_back(log_g);
    b.log_g_bar_loose.push_back(log_zeta2 + static_cast<double>(rest) * std::log(2.0));
  }
  return b;
}

CircuitMomentParams dressed_params(const std::vector<std::pair<Circuit, Circuit>>& parts) {
  int m = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (const auto& g : parts[k].second.gates)
      if (g.kind != GateKind::QubitGate)
        throw ValidationError("dressing unitary is not qubit-only in part " + std::to_string(k + 1));
    m = std::max(m, parts[k].first.m);
  }
  std::vector<ModeParams> per_mode(static_cast<std::size_t>(m));
  std::vector<double> max_log_g(static_cast<std::size_t>(m), 0.0);
  for (const auto& part : parts) {
    const auto p = circuit_params(part.first);
    for (std::size_t a = 0; a < p.per_mode.size(); ++a) {
      per_mode[a].xi_bar += 2.0 * p.per_mode[a].xi_bar;
      max_log_g[a] = std::max(max_log_g[a], p.per_mode[a].log_g_bar);
    }
  }
  for (std::size_t a = 0; a < per_mode.size(); ++a) {
    auto& p = per_mode[a];
    p.exact = false;
    p.log_g_bar = 2.0 * max_log_g[a];
    p.g_bar = std::exp(p.log_g_bar);
    p.eta = 1.0;
    p.xi = p.xi_hat = p.g_bar * p.xi_bar;
  }
  return combine_modes(std::move(per_mode));
}

nlohmann::json analysis_report(const CircuitMomentParams& p, const EnergyBoundDetail& e) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : p.per_mode)
    modes.push_back({{"g_bar", m.g_bar}, {"xi_bar", m.xi_bar}, {"eta", m.eta}, {"xi", m.xi}, {"xi_hat", m.xi_hat}});
  return {{"per_mode", modes},
          {"g_bar_max", p.g_bar_max},
          {"xi_bar_max", p.xi_bar_max},
          {"energy_upper_bound", e.bound},
          {"log2_energy_upper_bound", e.log2_coarse},
          {"energy_detail", {{"c0", e.c0}, {"c1", e.c1}, {"c2", e.c2}, {"u", e.u}, {"v", e.v}, {"tight", e.tight}}}};
}

}  // namespace hqoc
