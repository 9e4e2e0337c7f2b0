#include "hqoc/simulator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <limits>
#include <random>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

constexpr double kPi = std::numbers::pi;

// One forward/backward plan pair and scratch line per transform length.
struct FftPlan {
  std::size_t n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftPlan(std::size_t len) : n(len) {
    buf = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

FftPlan& plan_for(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<FftPlan>(n);
  return *p;
}

// Calls f(line_buffer) for every 1-D line of `mode`, after a forward DFT when `spectral`.
// The callback may modify the buffer; it is transformed back and written in place.
template <class F>
void for_each_line(std::vector<cplx>& amps, const HybridState& s, int mode, bool spectral, bool write_back,
                   F&& f) {
  const std::size_t n = s.grids()[static_cast<std::size_t>(mode)].n_points;
  const std::size_t stride = s.stride(mode);
  const std::size_t total = amps.size();
  auto& plan = plan_for(n);
  auto* line = reinterpret_cast<cplx*>(plan.buf);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % n != 0) continue;
    for (std::size_t k = 0; k < n; ++k) line[k] = amps[base + k * stride];
    if (spectral) fftw_execute(plan.fwd);
    f(line, n);
    if (!write_back) continue;
    if (spectral) {
      fftw_execute(plan.bwd);
      for (std::size_t k = 0; k < n; ++k) amps[base + k * stride] = line[k] * inv_n;
    } else {
      for (std::size_t k = 0; k < n; ++k) amps[base + k * stride] = line[k];
    }
  }
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string at_gate(const std::string& msg, std::size_t position) {
  return position ? msg + " at gate " + std::to_string(position) : msg;
}

}  // namespace

double GridSpec::nyquist() const { return kPi / dx; }

GridSpec GridSpec::centered(std::size_t n_points, double dx) {
  return {n_points, dx, -static_cast<double>(n_points / 2) * dx};
}

HybridState::HybridState(int m, int r, std::vector<GridSpec> grids) : m_(m), r_(r), grids_(std::move(grids)) {
  if (m < 0 || r < 0 || r > 20) throw ValidationError("unsupported mode/qubit count");
  if (grids_.size() != static_cast<std::size_t>(m)) throw ValidationError("one grid per mode required");
  for (const auto& g : grids_) {
    if (!is_pow2(g.n_points)) throw ValidationError("grid n_points must be a power of two");
    if (!(g.dx > 0.0)) throw ValidationError("grid dx must be positive");
  }
  const std::size_t total = mode_block() << r;
  check_memory(total, memory_cap_bytes());
  amps_.assign(total, cplx{0.0, 0.0});
}

std::size_t HybridState::mode_block() const {
  std::size_t b = 1;
  for (const auto& g : grids_) b *= g.n_points;
  return b;
}

std::size_t HybridState::stride(int mode) const {
  std::size_t s = 1;
  for (int a = m_ - 1; a > mode; --a) s *= grids_[static_cast<std::size_t>(a)].n_points;
  return s;
}

double HybridState::cell_volume() const {
  double v = 1.0;
  for (const auto& g : grids_) v *= g.dx;
  return v;
}

std::size_t HybridState::index_along(std::size_t flat, int mode) const {
  return (flat / stride(mode)) % grids_[static_cast<std::size_t>(mode)].n_points;
}

double HybridState::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc * cell_volume());
}

void HybridState::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw ValidationError("cannot normalise a zero state");
  for (auto& a : amps_) a /= n;
}

std::vector<double> HybridState::qubit_probabilities() const {
  const std::size_t b = mode_block();
  std::vector<double> lam(std::size_t{1} << r_, 0.0);
  for (std::size_t z = 0; z < lam.size(); ++z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b; ++i) acc += std::norm(amps_[z * b + i]);
    lam[z] = acc * cell_volume();
  }
  return lam;
}

double HybridState::boundary_mass(std::size_t cells) const {
  if (m_ == 0) return 0.0;
  const std::size_t b = mode_block();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const std::size_t flat = idx % b;
    bool edge = false;
    for (int a = 0; a < m_ && !edge; ++a) {
      const std::size_t k = index_along(flat, a);
      const std::size_t n = grids_[static_cast<std::size_t>(a)].n_points;
      edge = k < cells || k + cells >= n;
    }
    if (edge) acc += std::norm(amps_[idx]);
  }
  return acc * cell_volume();
}

double vacuum_radius() {
  // erfc(R) = 1e-12 for the density pi^{-1/2} e^{-x^2}
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > 1e-12 ? lo : hi) = mid;
  }
  return hi;
}

std::size_t memory_cap_bytes() {
  std::size_t mb = 4096;
  if (const char* env = std::getenv("HQOC_MEM_CAP_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) mb = static_cast<std::size_t>(v);
  }
  return mb * 1024 * 1024;
}

void check_memory(std::size_t amplitudes, std::size_t cap_bytes) {
  if (amplitudes > cap_bytes / sizeof(cplx))
    throw ResourceError("state of " + std::to_string(amplitudes) + " amplitudes exceeds memory cap of " +
                        std::to_string(cap_bytes / (1024 * 1024)) + " MB");
}

HybridState vacuum_state(int m, int r, const std::vector<GridSpec>& grids) {
  HybridState s(m, r, grids);
  for (const auto& g : grids)
    if (g.dx > 0.5) throw ValidationError("inadequate grid: dx too coarse for the vacuum");
  const std::size_t b = s.mode_block();
  const double c = std::pow(kPi, -0.25);
  for (std::size_t flat = 0; flat < b; ++flat) {
    double v = 1.0;
    for (int a = 0; a < m; ++a) {
      const double x = grids[static_cast<std::size_t>(a)].x(s.index_along(flat, a));
      v *= c * std::exp(-0.5 * x * x);
    }
    s.amps()[flat] = v;
  }
  if (s.boundary_mass(2) > 1e-8) throw ValidationError("inadequate grid: vacuum reaches the grid edge");
  return s;
}

std::vector<double> momentum_axis(const GridSpec& g) {
  const std::size_t n = g.n_points;
  std::vector<double> p(n);
  const double dp = 2.0 * kPi / (static_cast<double>(n) * g.dx);
  for (std::size_t j = 0; j < n; ++j) {
    const double jj = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    p[j] = jj * dp;
  }
  return p;
}

void fft_mode(HybridState& s, int mode, bool forward) {
  const std::size_t n = s.grids()[static_cast<std::size_t>(mode)].n_points;
  const std::size_t stride = s.stride(mode);
  auto& amps = s.amps();
  auto& plan = plan_for(n);
  auto* line = reinterpret_cast<cplx*>(plan.buf);
  const double scale = forward ? 1.0 : 1.0 / static_cast<double>(n);
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if ((base / stride) % n != 0) continue;
    for (std::size_t k = 0; k < n; ++k) line[k] = amps[base + k * stride];
    fftw_execute(forward ? plan.fwd : plan.bwd);
    for (std::size_t k = 0; k < n; ++k) amps[base + k * stride] = line[k] * scale;
  }
}

namespace {

void apply_qubit_gate(HybridState& s, const Gate& g) {
  const auto u = qubit_unitary(g);
  const std::size_t b = s.mode_block();
  auto& amps = s.amps();
  const std::size_t nz = std::size_t{1} << s.r();
  if (g.qubits.size() == 1) {
    const std::size_t bit = std::size_t{1} << g.qubits[0];
    for (std::size_t z = 0; z < nz; ++z) {
      if (z & bit) continue;
      cplx* a0 = &amps[z * b];
      cplx* a1 = &amps[(z | bit) * b];
      for (std::size_t i = 0; i < b; ++i) {
        const cplx x0 = a0[i], x1 = a1[i];
        a0[i] = u[0] * x0 + u[1] * x1;
        a1[i] = u[2] * x0 + u[3] * x1;
      }
    }
    return;
  }
  const std::size_t hi = std::size_t{1} << g.qubits[0];
  const std::size_t lo = std::size_t{1} << g.qubits[1];
  for (std::size_t z = 0; z < nz; ++z) {
    if (z & (hi | lo)) continue;
    cplx* a[4] = {&amps[z * b], &amps[(z | lo) * b], &amps[(z | hi) * b], &amps[(z | hi | lo) * b]};
    for (std::size_t i = 0; i < b; ++i) {
      const cplx x[4] = {a[0][i], a[1][i], a[2][i], a[3][i]};
      for (int row = 0; row < 4; ++row) {
        cplx acc = 0;
        for (int col = 0; col < 4; ++col) acc += u[static_cast<std::size_t>(row * 4 + col)] * x[col];
        a[row][i] = acc;
      }
    }
  }
}

// Restricts an operation to amplitudes whose qubit bitstring has the control bit set.
bool branch_active(const Gate& g, std::size_t z) {
  if (!g.is_controlled()) return true;
  return (z >> g.qubits[0]) & 1U;
}

}  // namespace

void apply_gate(HybridState& s, const Gate& g, std::size_t position) {
  validate_gate(g, s.m(), s.r(), position ? position : 1);
  auto& amps = s.amps();
  const std::size_t b = s.mode_block();
  switch (g.kind) {
    case GateKind::Blackbox:
      throw ValidationError(at_gate("blackbox gates cannot be simulated", position));
    case GateKind::QubitGate:
      apply_qubit_gate(s, g);
      return;
    case GateKind::Squeeze: {
      auto& grid = s.grids()[static_cast<std::size_t>(g.mode)];
      grid.dx *= g.alpha;
      grid.x0 *= g.alpha;
      const double f = 1.0 / std::sqrt(g.alpha);
      for (auto& a : amps) a *= f;
      return;
    }
    case GateKind::DispQ:
    case GateKind::CtrlDispQ: {
      const auto& grid = s.grids()[static_cast<std::size_t>(g.mode)];
      std::vector<cplx> phase(grid.n_points);
      for (std::size_t k = 0; k < grid.n_points; ++k) phase[k] = std::polar(1.0, g.t * grid.x(k));
      for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (!branch_active(g, idx / b)) continue;
        amps[idx] *= phase[s.index_along(idx % b, g.mode)];
      }
      return;
    }
    case GateKind::DispP:
    case GateKind::CtrlDispP: {
      const auto& grid = s.grids()[static_cast<std::size_t>(g.mode)];
      const auto p = momentum_axis(grid);
      std::vector<cplx> phase(grid.n_points);
      for (std::size_t j = 0; j < p.size(); ++j) phase[j] = std::polar(1.0, -g.t * p[j]);
      const std::size_t n = grid.n_points;
      const std::size_t stride = s.stride(g.mode);
      auto& plan = plan_for(n);
      auto* line = reinterpret_cast<cplx*>(plan.buf);
      const double inv_n = 1.0 / static_cast<double>(n);
      double edge = 0.0, total = 0.0;
      for (std::size_t base = 0; base < amps.size(); ++base) {
        if ((base / stride) % n != 0) continue;
        if (!branch_active(g, base / b)) continue;
        for (std::size_t k = 0; k < n; ++k) line[k] = amps[base + k * stride];
        fftw_execute(plan.fwd);
        for (std::size_t j = 0; j < n; ++j) {
          const double w = std::norm(line[j]);
          total += w;
          if (j + 2 >= n / 2 && j <= n / 2 + 1) edge += w;
          line[j] *= phase[j];
        }
        fftw_execute(plan.bwd);
        for (std::size_t k = 0; k < n; ++k) amps[base + k * stride] = line[k] * inv_n;
      }
      if (total > 0.0 && edge / total > 1e-8)
        throw GridOverflowError(at_gate("grid overflow (momentum band)", position));
      return;
    }
  }
}

void simulate(HybridState& s, const Circuit& c, const SimulationOptions& opt) {
  if (c.m != s.m() || c.r != s.r()) throw ValidationError("circuit shape does not match state");
  validate_circuit(c);
  if (opt.check_windows) {
    for (int a = 0; a < s.m(); ++a) {
      Window w = measured_window(s, a);
      GridSpec grid = s.grids()[static_cast<std::size_t>(a)];
      for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        if (g.kind == GateKind::Blackbox)
          throw ValidationError(at_gate("blackbox gates cannot be simulated", i + 1));
        if (!g.acts_on_mode(a)) continue;
        w = generator_mlf(g)(w);
        if (g.kind == GateKind::Squeeze) {
          grid.dx *= g.alpha;
          grid.x0 *= g.alpha;
        }
        const bool fits = w.r1 >= grid.x0 && w.r2 <= grid.x_max() && std::max(std::abs(w.rh1), std::abs(w.rh2)) <= grid.nyquist();
        if (!fits) throw GridOverflowError(at_gate("grid overflow", i + 1));
      }
    }
  }
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    apply_gate(s, c.gates[i], i + 1);
    if (opt.check_boundary && c.gates[i].kind != GateKind::QubitGate && s.boundary_mass(2) > opt.boundary_tol)
      throw GridOverflowError(at_gate("grid overflow", i + 1));
  }
}

std::pair<std::vector<double>, std::vector<double>> position_marginal(const HybridState& s, int mode) {
  const auto& grid = s.grids()[static_cast<std::size_t>(mode)];
  std::vector<double> x(grid.n_points), w(grid.n_points, 0.0);
  for (std::size_t k = 0; k < grid.n_points; ++k) x[k] = grid.x(k);
  const std::size_t b = s.mode_block();
  const double vol = s.cell_volume();
  for (std::size_t idx = 0; idx < s.amps().size(); ++idx)
    w[s.index_along(idx % b, mode)] += std::norm(s.amps()[idx]) * vol;
  return {x, w};
}

std::pair<std::vector<double>, std::vector<double>> momentum_marginal(const HybridState& s, int mode) {
  const auto& grid = s.grids()[static_cast<std::size_t>(mode)];
  const std::size_t n = grid.n_points;
  const auto p = momentum_axis(grid);
  std::vector<double> w(n, 0.0);
  auto amps = s.amps();
  for_each_line(amps, s, mode, true, false, [&](cplx* line, std::size_t len) {
    for (std::size_t j = 0; j < len; ++j) w[j] += std::norm(line[j]);
  });
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> ps(n), ws(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = (j + n / 2) % n;  // ascending momentum
    ps[j] = p[src];
    ws[j] = total > 0 ? w[src] / total : 0.0;
  }
  return {ps, ws};
}

namespace {

std::pair<double, double> tail_window(const std::vector<double>& v, const std::vector<double>& w, double tail) {
  double acc = 0.0;
  std::size_t lo = 0, hi = v.size() - 1;
  for (std::size_t k = 0; k < v.size(); ++k) {
    acc += w[k];
    if (acc > tail) {
      lo = k;
      break;
    }
  }
  acc = 0.0;
  for (std::size_t k = v.size(); k-- > 0;) {
    acc += w[k];
    if (acc > tail) {
      hi = k;
      break;
    }
  }
  return {v[lo], v[hi]};
}

}  // namespace

Window measured_window(const HybridState& s, int mode, double tail) {
  const auto [x, wx] = position_marginal(s, mode);
  const auto [p, wp] = momentum_marginal(s, mode);
  const auto [r1, r2] = tail_window(x, wx, tail);
  const auto [rh1, rh2] = tail_window(p, wp, tail);
  return {r1, r2, rh1, rh2};
}

EnergyReport energy_expectation(const HybridState& s) {
  EnergyReport e;
  for (int a = 0; a < s.m(); ++a) {
    const auto [x, wx] = position_marginal(s, a);
    const auto [p, wp] = momentum_marginal(s, a);
    double q2 = 0.0, p2 = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      q2 += wx[k] * x[k] * x[k];
      mass += wx[k];
    }
    for (std::size_t k = 0; k < p.size(); ++k) p2 += wp[k] * p[k] * p[k];
    q2 /= mass;
    e.q2.push_back(q2);
    e.p2.push_back(p2);
    e.energy.push_back(q2 + p2);
    e.max = std::max(e.max, q2 + p2);
  }
  return e;
}

std::vector<double> mean_position(const HybridState& s) {
  std::vector<double> out;
  for (int a = 0; a < s.m(); ++a) {
    const auto [x, w] = position_marginal(s, a);
    double acc = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      acc += w[k] * x[k];
      mass += w[k];
    }
    out.push_back(acc / mass);
  }
  return out;
}

std::vector<HomodyneShot> homodyne_sample(const HybridState& s, std::uint64_t shots, std::uint64_t seed) {
  const auto& amps = s.amps();
  std::vector<double> cdf(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  const std::size_t b = s.mode_block();
  std::vector<HomodyneShot> out;
  out.reserve(shots);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    std::size_t idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    idx = std::min(idx, amps.size() - 1);
    HomodyneShot shot;
    const std::size_t z = idx / b, flat = idx % b;
    for (int a = 0; a < s.m(); ++a) shot.y.push_back(s.grids()[static_cast<std::size_t>(a)].x(s.index_along(flat, a)));
    for (int q = 0; q < s.r(); ++q) shot.z.push_back(static_cast<int>((z >> q) & 1U));
    out.push_back(std::move(shot));
  }
  return out;
}

namespace {

void require_same_grids(const HybridState& a, const HybridState& b) {
  if (a.m() != b.m() || a.r() != b.r()) throw ValidationError("grid mismatch: state shapes differ");
  for (std::size_t i = 0; i < a.grids().size(); ++i) {
    const auto& ga = a.grids()[i];
    const auto& gb = b.grids()[i];
    const double tol = 1e-9 * ga.dx;
    if (ga.n_points != gb.n_points || std::abs(ga.dx - gb.dx) > tol || std::abs(ga.x0 - gb.x0) > tol)
      throw ValidationError("grid mismatch");
  }
}

}  // namespace

cplx inner_product(const HybridState& a, const HybridState& b) {
  require_same_grids(a, b);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.amps().size(); ++i) acc += std::conj(a.amps()[i]) * b.amps()[i];
  return acc * a.cell_volume();
}

double trace_distance(const HybridState& a, const HybridState& b) {
  const double ov = std::norm(inner_product(a, b));
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - ov));
}

std::vector<GridSpec> auto_grid(const Circuit& c, const AutoGridOptions& opt) {
  const double r0 = vacuum_radius();
  const double grow = 1.0 + opt.margin;
  std::vector<GridSpec> grids;
  for (int a = 0; a < c.m; ++a) {
    Window w{-r0, r0, -r0, r0};
    double sigma = 1.0;
    double max_pos = r0, max_mom = r0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      const auto& g = c.gates[i];
      if (g.kind == GateKind::Blackbox) throw ValidationError(at_gate("auto_grid cannot size blackbox", i + 1));
      if (!g.acts_on_mode(a)) continue;
      w = generator_mlf(g)(w);
      if (g.kind == GateKind::Squeeze) sigma *= g.alpha;
      max_pos = std::max(max_pos, std::max(std::abs(w.r1), std::abs(w.r2)) / sigma);
      max_mom = std::max(max_mom, std::max(std::abs(w.rh1), std::abs(w.rh2)) * sigma);
    }
    const double dx0 = std::min(1.0 / opt.samples_per_unit, kPi / (grow * max_mom));
    const double need = 2.0 * grow * max_pos / dx0;
    if (!(need < 0x1.0p40)) throw ResourceError("grid for mode " + std::to_string(a) + " is too large");
    const std::size_t n = std::max(opt.min_points, std::bit_ceil(static_cast<std::size_t>(std::ceil(need))));
    grids.push_back(GridSpec::centered(n, dx0));
  }
  std::size_t total = std::size_t{1} << c.r;
  for (const auto& g : grids) {
    if (total > (std::numeric_limits<std::size_t>::max() >> 1) / g.n_points) throw ResourceError("grid too large");
    total *= g.n_points;
  }
  check_memory(total, opt.mem_cap_bytes ? opt.mem_cap_bytes : memory_cap_bytes());
  return grids;
}

}  // namespace hqoc
