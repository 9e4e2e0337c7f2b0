#pragma once

#include <vector>

#include <json.hpp>

#include "hqoc/simulator.hpp"

namespace hqoc {

// Sorted (value, mass) pairs; masses are normalised on construction.
class Distribution {
 public:
  Distribution(std::vector<double> values, std::vector<double> masses);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& masses() const { return masses_; }
  double mean() const;
  double variance() const;
  double second_moment() const;
  Distribution shifted(double c) const;

 private:
  std::vector<double> values_;
  std::vector<double> masses_;
};

// Smallest R with mass >= 1 - delta in [-R, R].
double symradius_delta(const Distribution& d, double delta);
// Width of the shortest interval with mass >= 1 - delta.
double diam_delta(const Distribution& d, double delta);

struct ConcentrationStats {
  double delta = 0;
  double diam = 0;
  double symradius = 0;
  double sigma = 0;
  double second_moment = 0;
};

ConcentrationStats concentration_stats(const Distribution& d, double delta);

// Mass of `d` restricted to its shortest (1 - delta) interval, renormalised.
Distribution conditioned_on_minimal_interval(const Distribution& d, double delta);

// Max over modes of the position and momentum radii of a state.
double state_symradius(const HybridState& s, double delta);

struct LowerBound {
  double per_mode = 0;  // delta R^2 / m
  double total = 0;     // delta R^2
};

LowerBound energy_lower_bound_from_radius(double symradius, double delta, int m);
LowerBound energy_lower_bound_from_radius(const HybridState& s, double delta);

// sqrt(pi/4) (d (1 - 3 sqrt(delta)) / 2^r)^{1/(2m)}; requires delta < 1/9.
double radius_dimension_bound(double d, int m, int r, double delta);

// Leading-order growth implied for n logical qubits on m modes, in log2 form.
struct ModeScalings {
  double log2_symradius = 0;  // n / (2m)
  double log2_energy = 0;     // n / m - log2 m
};
ModeScalings mode_scalings(double n, double m);

struct DonohoStarkResult {
  double trace = 0;
  double exact_trace = 0;  // 4 R^2 / pi
  double max_eigenvalue = 0;
  double min_eigenvalue = 0;
};

// Trapezoid discretisation of sin(2R(x-y)) / (pi (x-y)) on [-R, R] with n_quad nodes.
DonohoStarkResult donoho_stark_trace(double R, int n_quad);

}  // namespace hqoc
