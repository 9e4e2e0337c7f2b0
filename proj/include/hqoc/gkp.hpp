#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "hqoc/simulator.hpp"

namespace hqoc {

struct GkpParams {
  double delta = 0.0;
  long d = 2;
  int ell = 1;  // floor(log2 d)
  double eps = 0.25;
  long L = 2;
  int n_peaks_exp = 1;  // L = 2^n_peaks_exp
};

// Delta in (0, 1/4), d >= 2: eps = 1/(2d), L = 2^{2(ceil log2 1/Delta - floor log2 d)}.
GkpParams canonical_params(double delta, long d);
// d = 2 code with eps = 2^{-(ell+1)} and the peak count of the 2^ell code.
GkpParams aux_params(int ell, double delta);

int ceil_log2_inv(double delta);  // ceil(log2(1/delta)) with an exact-power guard

// A comb of L peaks at scale * z + shift, z in [-L/2, L/2 - 1]. Each peak is
// scale^{-1/2} Psi^eps_Delta((x - shift)/scale - z); eps <= 0 means no truncation.
struct CombStateSpec {
  GkpParams params;
  long j = 0;
  double scale = 1.0;
  double shift = 0.0;
  bool truncated = true;

  std::vector<double> peak_centers() const;
  double peak_sigma() const { return scale * params.delta; }
  double half_support() const { return scale * params.eps; }
};

// Basis state j of the code described by `p`: scale sqrt(2 pi d), shift sqrt(2 pi / d) j.
CombStateSpec code_state_spec(const GkpParams& p, long j);
// Integer-spaced comb of L untruncated Gaussians of width Delta.
CombStateSpec integer_comb_spec(long L, double delta);

double comb_amplitude(const CombStateSpec& spec, double x);

// Samples the closed form on `grid` (1 mode, 0 qubits) and normalises numerically.
HybridState comb_wavefunction(const CombStateSpec& spec, const GridSpec& grid);
// Superposition sum_j c_j |code state j> on one mode with `r` qubits held at |0...0>.
HybridState encoded_superposition(const GkpParams& p, const std::vector<std::pair<long, cplx>>& coeffs,
                                  const GridSpec& grid, int r = 0);
// Grid that resolves every peak of `spec` with `samples_per_sigma` points and covers its support.
GridSpec grid_for_comb(const CombStateSpec& spec, double samples_per_sigma = 16.0, double margin = 8.0);

struct Interval {
  double lo = 0.0, hi = 0.0;
};

std::vector<Interval> support_set(const CombStateSpec& spec);

struct OverlapResult {
  double overlap_sq = 0.0;
  double lower_bound = 0.0;
  double dx = 0.0;
};

// |<Sha_{L,Delta}, Sha^eps_{L,Delta}>|^2 by quadrature, and 1 - 16 Delta^2 - 2 exp(-(eps/Delta)^2).
OverlapResult overlap_check(double delta, double eps, long L, double samples_per_sigma = 32.0);

nlohmann::json state_dump(const HybridState& s);

}  // namespace hqoc
