#include "acceptance_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hqoc/energy_bounds.hpp"
#include "hqoc/error.hpp"
#include "hqoc/gkp.hpp"
#include "hqoc/moments.hpp"
#include "hqoc/pipeline.hpp"
#include "hqoc/simulator.hpp"
#include "hqoc/tradeoff.hpp"

namespace hqoc::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;
using Big = boost::multiprecision::cpp_bin_float_50;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

using Body = std::function<void(Outcome&)>;

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  Body body;
};

double mass_outside(const std::vector<double>& v, const std::vector<double>& w, double lo, double hi) {
  double acc = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] < lo || v[k] > hi) acc += w[k];
  return acc;
}

double rel_err(const Big& ours, const Big& oracle) {
  if (oracle == 0) return ours == 0 ? 0.0 : INFINITY;
  return static_cast<double>(abs(ours - oracle) / abs(oracle));
}

// Relative error of 2^ours against an exact value.
double rel_err_log2(double ours_log2, const Big& oracle) {
  const Big ours = boost::multiprecision::exp2(Big(ours_log2) - boost::multiprecision::log2(oracle));
  return static_cast<double>(abs(ours - 1));
}

void gram_orthogonality(Outcome& o) {
  const auto p = canonical_params(1.0 / 32.0, 4);
  const auto grid = grid_for_comb(code_state_spec(p, 3));
  std::vector<HybridState> states;
  for (long j = 0; j < 4; ++j) states.push_back(comb_wavefunction(code_state_spec(p, j), grid));
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cplx g = inner_product(states[static_cast<std::size_t>(a)], states[static_cast<std::size_t>(b)]);
      worst = std::max(worst, std::abs(g - cplx(a == b ? 1.0 : 0.0)));
    }
  o.pass = worst <= 1e-8;
  o.detail << "max |G - I| = " << worst;
}

void truncation_overlap(Outcome& o) {
  for (auto [delta, eps] : {std::pair{0.05, 0.25}, {0.1, 0.25}, {0.02, 0.1}}) {
    const auto r = overlap_check(delta, eps, 16);
    o.pass = o.pass && r.overlap_sq >= r.lower_bound;
    o.detail << "(" << delta << "," << eps << "): " << r.overlap_sq << " >= " << r.lower_bound << "; ";
  }
}

void comb_preparation(Outcome& o) {
  double prev = INFINITY;
  for (double delta : {0.04, 0.01}) {
    const auto c = build_prep_circuit(3, delta);
    const long expected = 5 * 3 + static_cast<long>(std::ceil(std::log2(1.0 / delta))) + 3;
    const auto r = simulate_prep(3, delta);
    const double bound = 17.0 * std::sqrt(delta);
    o.pass = o.pass && c.size() == expected && r.trace_distance <= bound && r.trace_distance < prev;
    prev = r.trace_distance;
    o.detail << "Delta=" << delta << ": size " << c.size() << "/" << expected << ", distance " << r.trace_distance
             << " <= " << bound << "; ";
  }
}

void logical_measurement(Outcome& o) {
  const int ell = 2;
  const double delta = 0.02;
  const auto p = code_params(ell, delta);
  const auto layout = make_layout(2, 1);
  const auto grid = grid_for_comb(code_state_spec(p, 3));
  const std::uint64_t shots = 10000;
  for (long j = 0; j < 4; ++j) {
    const auto s = encoded_superposition(p, {{j, cplx(1.0)}}, grid);
    const auto expected = iota_inverse(j, ell);
    std::uint64_t hits = 0;
    for (const auto& shot : homodyne_sample(s, shots, 100 + static_cast<std::uint64_t>(j)))
      hits += post_process(shot.y, layout) == expected;
    o.pass = o.pass && hits == shots;
    o.detail << "j=" << j << ": " << hits << "/" << shots << "; ";
  }
  const auto sup = encoded_superposition(p, {{0, cplx(1.0)}, {3, cplx(0.0, 1.0)}}, grid);
  std::map<std::vector<int>, double> counts;
  for (const auto& shot : homodyne_sample(sup, shots, 999)) counts[post_process(shot.y, layout)] += 1.0;
  const double half = 0.5 * static_cast<double>(shots);
  const double n0 = counts[iota_inverse(0, ell)], n3 = counts[iota_inverse(3, ell)];
  const double stray = static_cast<double>(shots) - n0 - n3;
  const double chi2 = (n0 - half) * (n0 - half) / half + (n3 - half) * (n3 - half) / half;
  o.pass = o.pass && stray == 0.0 && chi2 <= 9.0;
  o.detail << "superposition chi2 = " << chi2 << " (<= 9), stray " << stray;
}

void analyzer_soundness(Outcome& o) {
  std::mt19937_64 rng(20240501);
  const double r0 = vacuum_radius();
  int energy_viol = 0, window_viol = 0;
  double worst_ratio = 0.0, worst_out = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Circuit c = random_circuit(rng, 12, 2.0);
    const double bound = energy_upper_bound(circuit_params(c)).bound;
    const auto mlfs = prefix_mlfs(c, 0);
    auto s = vacuum_state(1, 1, auto_grid(c));
    std::size_t k = 0;
    auto check = [&] {
      const Window w = mlfs[k](Window{-r0, r0, -r0, r0});
      const auto e = energy_expectation(s);
      worst_ratio = std::max(worst_ratio, e.max / bound);
      energy_viol += e.max > bound;
      const auto [x, wx] = position_marginal(s, 0);
      const auto [pv, wp] = momentum_marginal(s, 0);
      const double out = std::max(mass_outside(x, wx, w.r1, w.r2), mass_outside(pv, wp, w.rh1, w.rh2));
      worst_out = std::max(worst_out, out);
      window_viol += out > 1e-6;
    };
    check();
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      apply_gate(s, c.gates[i], i + 1);
      if (c.gates[i].acts_on_mode(0)) ++k;
      check();
    }
  }
  o.pass = energy_viol == 0 && window_viol == 0;
  o.detail << "energy violations " << energy_viol << " (max E/bound " << worst_ratio << "), window violations "
           << window_viol << " (max outside mass " << worst_out << ")";
}

void substitution_pass(Outcome& o) {
  int checked = 0;
  double worst_fid = 1.0;
  for (double theta : {3.0, 4.0, 7.5})
    for (double sign : {1.0, -1.0})
      for (GateKind kind : {GateKind::DispQ, GateKind::DispP, GateKind::CtrlDispQ, GateKind::CtrlDispP}) {
        Circuit c{1, 1, {Gate::qubit("H", {0}), Gate::squeeze(0, 1.3), Gate::disp_q(0, 0.4), Gate::ctrl_disp_p(0, 0, 0.6)}};
        const double t = sign * theta;
        switch (kind) {
          case GateKind::DispQ: c.gates.push_back(Gate::disp_q(0, t)); break;
          case GateKind::DispP: c.gates.push_back(Gate::disp_p(0, t)); break;
          case GateKind::CtrlDispQ: c.gates.push_back(Gate::ctrl_disp_q(0, 0, t)); break;
          default: c.gates.push_back(Gate::ctrl_disp_p(0, 0, t)); break;
        }
        const Circuit sub = substitute_bounded_strength(c);
        bool bounded = true;
        for (const auto& g : sub.gates) {
          if (g.is_displacement() && std::abs(g.t) > 1.0 + 1e-12) bounded = false;
          if (g.kind == GateKind::Squeeze && (g.alpha < 0.5 || g.alpha > 2.0)) bounded = false;
        }
        const auto grids = auto_grid(sub);
        auto a = vacuum_state(1, 1, grids);
        auto b = vacuum_state(1, 1, grids);
        simulate(a, c);
        simulate(b, sub);
        const double fid = std::norm(inner_product(a, b));
        worst_fid = std::min(worst_fid, fid);

        const auto lim = substitution_bounds(c);
        const auto got = circuit_params(sub).per_mode[0];
        const bool params_ok = got.xi_bar <= lim.xi_bar_bound[0] * (1 + 1e-12) &&
                               got.log_g_bar <= lim.log_g_bar_bound[0] + 1e-12 &&
                               lim.log_g_bar_bound[0] <= lim.log_g_bar_loose[0] + 1e-12;
        o.pass = o.pass && bounded && fid >= 1.0 - 1e-8 && params_ok;
        if (!bounded || !params_ok)
          o.detail << "theta=" << t << " kind " << kind_name(kind) << (bounded ? "" : " unbounded")
                   << (params_ok ? "" : " parameter bound violated") << "; ";
        ++checked;
      }
  o.detail << checked << " circuits, min fidelity " << worst_fid;
}

void g_bar_prefix(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 80);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Circuit c{1, 1, {}};
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      if (u(rng) < 0.2)
        c.gates.push_back(Gate::disp_p(0, u(rng)));
      else
        c.gates.push_back(Gate::squeeze(0, std::exp2(u(rng))));
    }
    std::vector<double> log_eta;
    for (const auto& g : c.gates) log_eta.push_back(std::log(gate_params(g).eta));
    const double fast = mode_params(c, 0).log_g_bar;
    const double brute = log_g_bar_bruteforce(log_eta);
    worst = std::max(worst, std::abs(fast - brute));
  }
  o.pass = worst <= 1e-12;
  o.detail << "max |prefix - brute force| = " << worst;
}

void donoho_stark(Outcome& o) {
  for (double R : {1.0, 2.0, 5.0}) {
    const auto r = donoho_stark_trace(R, 1024);
    const double rel = std::abs(r.trace - r.exact_trace) / r.exact_trace;
    o.pass = o.pass && rel <= 5e-3 && r.min_eigenvalue >= -1e-9 && r.max_eigenvalue <= 1.0 + 1e-6;
    o.detail << "R=" << R << ": trace rel err " << rel << ", eig [" << r.min_eigenvalue << ", " << r.max_eigenvalue
             << "]; ";
  }
}

void radius_dimension(Outcome& o) {
  const double delta = 0.01;
  const auto p = canonical_params(1.0 / 32.0, 4);
  const auto grid = grid_for_comb(code_state_spec(p, 3));
  double best = 0.0;
  for (long j = 0; j < 4; ++j) best = std::max(best, state_symradius(comb_wavefunction(code_state_spec(p, j), grid), delta));
  const double bound = radius_dimension_bound(4, 1, 0, delta);
  o.pass = best >= bound;
  o.detail << "max symradius " << best << " >= " << bound << "; ";

  std::mt19937_64 rng(99);
  int viol = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Circuit c = random_circuit(rng, 12, 2.0);
    auto s = vacuum_state(1, 1, auto_grid(c));
    simulate(s, c);
    const double lb = energy_lower_bound_from_radius(s, delta).per_mode;
    const double e = energy_expectation(s).max;
    worst = std::max(worst, lb / e);
    viol += lb > e;
  }
  o.pass = o.pass && viol == 0;
  o.detail << "random states: " << viol << " violations, max bound/energy " << worst;
}

void tradeoff_regimes(Outcome& o) {
  std::vector<double> ns;
  for (double n = 16; n <= 1024; n *= 2) ns.push_back(n);
  const auto table = regime_table(ns, [](double n) { return n * n; }, [](double n) { return 1.0 / n; });
  const auto& lin = table[0].fit;
  const auto& sq = table[1].fit;
  const auto& poly = table[2].fit;
  o.pass = lin.growth_class == "exponential" && std::abs(lin.gamma - 1.0) <= 0.05 &&
           sq.growth_class == "subexponential" && std::abs(sq.gamma - 0.5) <= 0.05 && poly.growth_class == "polynomial";
  o.detail << "m=1 gamma " << lin.gamma << " (" << lin.growth_class << "), m=ceil(sqrt n) gamma " << sq.gamma << " ("
           << sq.growth_class << "), m=n log-slope " << poly.log_slope << " (" << poly.growth_class << "); ";

  double worst = 0.0;
  bool inverse_ok = true;
  for (double n : {4.0, 64.0, 1024.0})
    for (double m : {1.0, 8.0, 64.0})
      for (double s : {1.0, 100.0, 1e6})
        for (double eps : {1e-6, 0.01, 0.5, 2.0}) {
          const double le = log2_required_energy(n, m, s, eps);
          const double lb = log2_sampling_error_bound(n, m, s, le);
          const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(le) / 42.0);
          const double diff = lb - std::log2(eps);
          worst = std::max(worst, std::abs(diff));
          inverse_ok = inverse_ok && diff <= slack && sampling_error_bound(n, m, s, le) <= eps * (1.0 + slack);
        }
  o.pass = o.pass && inverse_ok;
  o.detail << "max |log2 bound(E(eps)) - log2 eps| = " << worst;
}

void budget_formulas(Outcome& o) {
  double worst = 0.0;
  auto track = [&](double e) { worst = std::max(worst, e); };
  for (int m : {1, 2, 5, 40})
    for (int ell : {1, 2, 3, 6})
      for (double delta : {0.1, 1e-3, 1e-8, 1e-30})
        for (long s : {0L, 1L, 10L, 1000L}) {
          const Big D(delta), M(m), S(s), L(ell);
          const Big two(2);
          const Big q = boost::multiprecision::pow(two, 2 * L);
          const Big eps_prep = 50 * M * (boost::multiprecision::sqrt(D) + q * D * D);
          const Big eps_gate = 600 * S * q * D;
          const auto b = error_budget(m, ell, delta, s);
          const auto lb = log_budget(m, ell, delta, s);
          track(rel_err(Big(b.eps_prep), eps_prep));
          track(rel_err(Big(b.eps_gate), eps_gate));
          track(rel_err(Big(b.eps_final), eps_prep + eps_gate));
          track(rel_err_log2(lb.log2_eps_prep, eps_prep));
          track(rel_err_log2(lb.log2_eps_final, eps_prep + eps_gate));
          const Big ln_inv = -boost::multiprecision::log(D);
          const Big lg_inv = -boost::multiprecision::log2(D);
          track(rel_err(Big(b.T_prep_bound), 42 * M * ln_inv));
          track(rel_err_log2(lb.log2_size_prep_bound, 42 * M * ln_inv));
          track(rel_err_log2(lb.log2_wprep_energy,
                             4096 / boost::multiprecision::pow(D, 18) * (2 + 1000 * lg_inv * lg_inv * lg_inv)));
          track(rel_err_log2(lb.log2_wtot_g_bar, 1024 * boost::multiprecision::pow(two, 148 * L) / (D * D * D)));
          track(rel_err_log2(lb.log2_wu_g_bar, 256 * boost::multiprecision::pow(two, 148 * L)));
          if (s == 0) continue;
          track(rel_err_log2(lb.log2_eps_gate, eps_gate));
          track(rel_err(Big(b.T_logical_bound), 340 * S * L * L));
          track(rel_err_log2(lb.log2_size_logical_bound, 340 * S * L * L));
          const Big xi_wu = 72 * S * boost::multiprecision::pow(two, L);
          track(rel_err_log2(lb.log2_wu_xi_bar, xi_wu));
          track(rel_err_log2(lb.log2_wtot_xi_bar, xi_wu + 10 * lg_inv));
          const Big energy = S * S * S * boost::multiprecision::pow(two, 891 * L + 62) / boost::multiprecision::pow(D, 21);
          track(rel_err_log2(lb.log2_wtot_energy, energy));
          if (delta <= std::ldexp(1.0, -(ell + 1)))
            track(rel_err_log2(implementation_energy_bound(static_cast<double>(s), ell, delta).log2_energy, energy));
        }
  for (int ell : {1, 2, 4, 6}) {
    const auto p = wu_params(3, 2, ell);
    const Big S(3), L(ell);
    track(rel_err_log2(p.log_g_bar_max / std::log(2.0), 256 * boost::multiprecision::pow(Big(2), 148 * L)));
    track(rel_err(Big(p.xi_bar_max), 144 * S * L));
    o.pass = o.pass && p.xi_bar_max <= 72.0 * 3 * std::exp2(ell);
  }
  o.pass = o.pass && worst <= 1e-10;
  o.detail << "max relative error vs 50-digit oracle " << worst;
}

void concentration(Outcome& o) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> size(1, 60);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> ud(0.01, 0.5);
  int viol = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = size(rng);
    const double scale = std::exp(2.0 * gauss(rng));
    const double offset = gauss(rng) * scale;
    std::vector<double> v, w;
    for (int i = 0; i < k; ++i) {
      v.push_back(offset + scale * gauss(rng));
      w.push_back(expo(rng));
    }
    const Distribution d(v, w);
    const double delta = ud(rng);
    const auto st = concentration_stats(d, delta);
    const double slack = 1e-12 * (1.0 + st.second_moment);
    if (st.diam > 2.0 * st.sigma / std::sqrt(delta) * (1.0 + 1e-12) + 1e-300) ++viol;
    if (delta * st.symradius * st.symradius > st.second_moment + slack) ++viol;
    const auto cond = conditioned_on_minimal_interval(d, delta);
    if (2.0 * std::sqrt(cond.variance()) > st.diam * (1.0 + 1e-12) + 1e-300) ++viol;
  }
  o.pass = viol == 0;
  o.detail << viol << " violations over 500 distributions";
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "comb-state orthogonality (d=4, Delta=1/32)", 5.0, gram_orthogonality},
      {2, "truncated comb overlap", 10.0, truncation_overlap},
      {3, "comb preparation (n=3)", 300.0, comb_preparation},
      {4, "logical measurement (ell=2)", 120.0, logical_measurement},
      {5, "analyzer soundness (200 random circuits)", 600.0, analyzer_soundness},
      {6, "bounded-strength substitution", 0.0, substitution_pass},
      {7, "g_bar prefix algorithm vs brute force", 0.0, g_bar_prefix},
      {8, "Donoho-Stark kernel", 0.0, donoho_stark},
      {9, "radius-dimension bound and radius energy bound", 0.0, radius_dimension},
      {10, "trade-off regimes and inversion", 0.0, tradeoff_regimes},
      {11, "budget formulas vs high-precision oracle", 0.0, budget_formulas},
      {12, "concentration inequalities", 0.0, concentration},
  };
  return all;
}

}  // namespace

Circuit random_circuit(std::mt19937_64& rng, int max_gates, double max_strength) {
  std::uniform_int_distribution<int> count(1, max_gates);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> t(-max_strength, max_strength);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  static const char* names[] = {"H", "S", "T", "X", "Z"};
  std::uniform_int_distribution<int> name(0, 4);
  Circuit c{1, 1, {}};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: c.gates.push_back(Gate::disp_q(0, t(rng))); break;
      case 1: c.gates.push_back(Gate::disp_p(0, t(rng))); break;
      case 2: c.gates.push_back(Gate::ctrl_disp_q(0, 0, t(rng))); break;
      case 3: c.gates.push_back(Gate::ctrl_disp_p(0, 0, t(rng))); break;
      case 4: c.gates.push_back(Gate::squeeze(0, std::exp2(u(rng)))); break;
      default: c.gates.push_back(Gate::qubit(names[name(rng)], {0})); break;
    }
  }
  return c;
}

std::vector<CriterionResult> run(const std::vector<int>& ids, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      o.detail << " [runtime " << secs << " s exceeds " << c.time_limit << " s]";
    }
    CriterionResult r{c.id, c.name, o.pass, o.detail.str(), secs};
    out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " (" << secs << " s)"
        << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace hqoc::acceptance
