#pragma once

#include <array>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hqoc/circuit.hpp"

namespace hqoc {

// Position window [r1, r2] and momentum window [rh1, rh2].
struct Window {
  double r1 = 0, r2 = 0, rh1 = 0, rh2 = 0;
};

struct Affine {
  double a = 1.0;
  double b = 0.0;
  double operator()(double x) const { return a * x + b; }
};

// Entrywise affine map on (R1, R2, R^1, R^2).
struct MomentWindowMap {
  std::array<Affine, 4> f{};
  Window operator()(const Window& w) const;
};

MomentWindowMap identity_mlf();
// chi(R) = (eta R1 - xi, eta R2 + xi, R^1/eta - xi, R^2/eta + xi)
MomentWindowMap chi_mlf(double eta, double xi);
MomentWindowMap generator_mlf(const Gate& g);
MomentWindowMap compose_mlf(const MomentWindowMap& outer, const MomentWindowMap& inner);

// True when chi dominates phi: chi's windows contain phi's.
bool dominates(const Window& chi, const Window& phi);

// MLF of the first t gates acting on `mode`, for t = 0..T (entry 0 is identity).
// Throws ValidationError on blackbox gates.
std::vector<MomentWindowMap> prefix_mlfs(const Circuit& c, int mode);
MomentWindowMap circuit_mlf(const Circuit& c, int mode);

struct ModeParams {
  double g_bar = 1.0;
  double log_g_bar = 0.0;  // natural log of g_bar
  double xi_bar = 0.0;
  double eta = 1.0;
  double xi = 0.0;
  double xi_hat = 0.0;
  bool exact = true;  // false when blackboxes forced the subcircuit bounds
};

struct CircuitMomentParams {
  std::vector<ModeParams> per_mode;
  double g_bar_max = 1.0;
  double log_g_bar_max = 0.0;
  double xi_bar_max = 0.0;
};

// max over consecutive runs of |sum log eta|, in O(T) from prefix sums.
double log_g_bar_prefix(const std::vector<double>& log_eta);
// Same quantity by enumerating every run.
double log_g_bar_bruteforce(const std::vector<double>& log_eta);

ModeParams mode_params(const Circuit& c, int mode);
CircuitMomentParams circuit_params(const Circuit& c);
CircuitMomentParams combine_modes(std::vector<ModeParams> per_mode);

// p_k(y, xi) with y standing for eta^{-1} (position) or eta (momentum).
double energy_p0(double y, double xi);
double energy_p1(double y, double xi);
double energy_p2(double y, double xi);

struct EnergyBoundDetail {
  double c0 = 0, c1 = 0, c2 = 0;  // position coefficients p_k(1/eta, b)
  double u = 0, v = 0;
  double tight = 0;   // u + v at the net (eta, b = max(xi, xi_hat)) of the worst mode
  double coarse = 0;  // 168 g^6 (2 + xi^3)
  double log2_coarse = 0;
  double bound = 0;   // = coarse
};

double coarse_energy_bound(double g_bar, double xi_bar);
double log2_coarse_energy_bound(double log_g_bar, double xi_bar);
EnergyBoundDetail energy_upper_bound(const CircuitMomentParams& p);

struct SubstitutionPlan {
  double beta = 1.0;
  int n_reps = 0;
  int sign = 1;
};

SubstitutionPlan substitution_plan(double t);
std::vector<Gate> substitute_gate(const Gate& g);
Circuit substitute_bounded_strength(const Circuit& c);

struct SubstitutionBounds {
  std::vector<double> xi_bar_bound;   // |Subs| + sum of remaining xi, per mode
  std::vector<double> log_g_bar_bound;  // log(zeta^2 prod g(eta)) per mode
  std::vector<double> log_g_bar_loose;  // log(zeta^2 2^{T - |Subs|}) per mode
  double zeta = 2.0;
};
SubstitutionBounds substitution_bounds(const Circuit& original);

// Parameters of prod_a U_a^dag V_a U_a; each V_a must be qubit-only.
CircuitMomentParams dressed_params(const std::vector<std::pair<Circuit, Circuit>>& parts);

nlohmann::json analysis_report(const CircuitMomentParams& p, const EnergyBoundDetail& e);

}  // namespace hqoc
