#pragma once

#include <cstdint>
#include <vector>

#include "hqoc/circuit.hpp"
#include "hqoc/moments.hpp"

namespace hqoc {

// Sample points x_k = x0 + k dx, k = 0..n_points-1. Each point is the centre of a cell of width dx.
struct GridSpec {
  std::size_t n_points = 0;
  double dx = 0.0;
  double x0 = 0.0;

  double x(std::size_t k) const { return x0 + static_cast<double>(k) * dx; }
  double x_max() const { return x(n_points - 1); }
  double nyquist() const;  // largest representable |p|
  static GridSpec centered(std::size_t n_points, double dx);
  bool operator==(const GridSpec&) const = default;
};

// Amplitudes are wavefunction samples normalised so that sum |a|^2 prod(dx) = 1.
// Layout: index = z * B + flat(i_0, ..., i_{m-1}) with i_0 slowest, B = prod N_a, z the qubit
// bitstring with qubit q at bit q.
class HybridState {
 public:
  HybridState() = default;
  HybridState(int m, int r, std::vector<GridSpec> grids);

  int m() const { return m_; }
  int r() const { return r_; }
  const std::vector<GridSpec>& grids() const { return grids_; }
  std::vector<GridSpec>& grids() { return grids_; }
  std::vector<cplx>& amps() { return amps_; }
  const std::vector<cplx>& amps() const { return amps_; }

  std::size_t mode_block() const;  // prod N_a
  std::size_t stride(int mode) const;
  double cell_volume() const;
  std::size_t index_along(std::size_t flat, int mode) const;

  double norm() const;
  void normalize();
  std::vector<double> qubit_probabilities() const;  // lambda(z)
  // Mass within `cells` cells of any grid edge.
  double boundary_mass(std::size_t cells = 2) const;

 private:
  int m_ = 0;
  int r_ = 0;
  std::vector<GridSpec> grids_;
  std::vector<cplx> amps_;
};

// Radius of [-R, R] containing all but 1e-12 of the vacuum position (or momentum) mass.
double vacuum_radius();

std::size_t memory_cap_bytes();  // from HQOC_MEM_CAP_MB, default 4096 MB
void check_memory(std::size_t amplitudes, std::size_t cap_bytes);

HybridState vacuum_state(int m, int r, const std::vector<GridSpec>& grids);

// Applies one elementary gate. `position` is the 1-based gate index used in error messages.
void apply_gate(HybridState& s, const Gate& g, std::size_t position = 0);

struct SimulationOptions {
  bool check_windows = true;      // reject circuits whose predicted windows leave the grid
  bool check_boundary = true;     // reject states touching the grid edge after a gate
  double boundary_tol = 1e-8;
};

// Applies every gate in order. With check_windows, composed windows starting from the state's
// measured 1e-12 windows are checked against the grid before any gate runs.
void simulate(HybridState& s, const Circuit& c, const SimulationOptions& opt = {});

struct EnergyReport {
  std::vector<double> q2, p2, energy;
  double max = 0.0;
};

EnergyReport energy_expectation(const HybridState& s);
std::vector<double> mean_position(const HybridState& s);

// Position and momentum distributions of one mode, as (value, mass) lists on the grid.
std::pair<std::vector<double>, std::vector<double>> position_marginal(const HybridState& s, int mode);
std::pair<std::vector<double>, std::vector<double>> momentum_marginal(const HybridState& s, int mode);

// Smallest measured window with at most `tail` mass outside on each side, per mode.
Window measured_window(const HybridState& s, int mode, double tail = 1e-12);

struct HomodyneShot {
  std::vector<double> y;
  std::vector<int> z;
};

std::vector<HomodyneShot> homodyne_sample(const HybridState& s, std::uint64_t shots, std::uint64_t seed);

cplx inner_product(const HybridState& a, const HybridState& b);
double trace_distance(const HybridState& a, const HybridState& b);

struct AutoGridOptions {
  double margin = 0.2;
  double samples_per_unit = 8.0;  // grid points per vacuum standard width, carried by squeezes
  std::size_t mem_cap_bytes = 0;  // 0 means memory_cap_bytes()
  std::size_t min_points = 64;
};

// Grids sized from the composed moment windows of the vacuum through `c`.
std::vector<GridSpec> auto_grid(const Circuit& c, const AutoGridOptions& opt = {});

// In-place DFT helpers over one mode, exposed for tests.
void fft_mode(HybridState& s, int mode, bool forward);
std::vector<double> momentum_axis(const GridSpec& g);  // DFT bin order

}  // namespace hqoc
