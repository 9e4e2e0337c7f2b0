#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hqoc {

struct TradeoffInput {
  double n = 1;
  double m = 1;
  double s = 1;
  double log2_energy = 0;  // energies are carried as log2 values
  double epsilon = 1;
};

// log2 of 2^46 (s+m)^2 2^{24 n/m} E^{-1/42}, unclamped.
double log2_sampling_error_bound(double n, double m, double s, double log2_energy);
// min(2, bound).
double sampling_error_bound(double n, double m, double s, double log2_energy);
// log2 of (2^46 (s+m)^2 2^{24 n/m} / eps)^42.
double log2_required_energy(double n, double m, double s, double epsilon);

// energy <= C (2^{n/m})^delta (s/eps)^mu for m <= s and eps <= 2.
struct RequiredEnergyConstants {
  double log2_C = 0;
  double delta = 0;
  double mu = 0;
};
RequiredEnergyConstants required_energy_constants();

struct ImplementationBound {
  double log2_energy = 0;       // log2(s^3 2^{891 ell + 62} / Delta^21)
  double log2_xi_bar_bound = 0; // log2(72 s 2^ell + 10 log2 1/Delta)
  double log2_g_bar_bound = 0;  // log2(1024 2^{148 ell} / Delta^3)
};

// Requires 0 < Delta <= 2^{-(ell+1)}.
ImplementationBound implementation_energy_bound(double s, int ell, double delta);
// log2 of 168 g^6 (2 + xi^3) on the blackbox-annotated total circuit; requires Delta < 1/4.
double analyzer_wtot_log2_energy(long s, int m, int ell, double delta);
// log2 of min{2^{-(ell+1)}, s^{3/21} 2^{(891 ell + 62)/21} E^{-1/21}}.
double log2_delta_max(double s, int ell, double log2_energy);

struct RegimeRow {
  double n = 0;
  double m = 0;
  double log2_energy = 0;
};

// log2 E ~ c n^gamma + a log2 n + b, gamma from a grid search.
struct GrowthFit {
  double gamma = 0, c = 0, a = 0, b = 0;
  double max_residual = 0;
  double log_slope = 0;  // a' of the pure fit a' log2 n + b'
  double log_fit_residual = 0;
  std::string growth_class;  // "polynomial", "subexponential" or "exponential"
};

struct Regime {
  std::string name;
  std::vector<RegimeRow> rows;
  GrowthFit fit;
};

GrowthFit fit_growth(const std::vector<RegimeRow>& rows);

// Regimes m = 1, m = ceil(sqrt n) and m = n.
std::vector<Regime> regime_table(const std::vector<double>& n_values,
                                 const std::function<double(double)>& s_fn,
                                 const std::function<double(double)>& eps_fn);

nlohmann::json regime_json(const std::vector<Regime>& regimes);

}  // namespace hqoc
