#include "hqoc/gkp.hpp"

#include <cmath>
#include <numbers>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {
constexpr double kPi = std::numbers::pi;

int floor_log2(long d) {
  int e = 0;
  while ((d >> (e + 1)) > 0) ++e;
  return e;
}
}  // namespace

int ceil_log2_inv(double delta) {
  const double l = std::log2(1.0 / delta);
  return static_cast<int>(std::ceil(l - 1e-12 * std::max(1.0, std::abs(l))));
}

GkpParams canonical_params(double delta, long d) {
  if (!(delta > 0.0 && delta < 0.25)) throw ValidationError("delta must lie in (0, 1/4)");
  if (d < 2) throw ValidationError("code dimension d must be at least 2");
  GkpParams p;
  p.delta = delta;
  p.d = d;
  p.ell = floor_log2(d);
  p.eps = 1.0 / (2.0 * static_cast<double>(d));
  p.n_peaks_exp = 2 * (ceil_log2_inv(delta) - p.ell);
  if (p.n_peaks_exp < 1) throw ValidationError("delta too large for code dimension");
  if (p.n_peaks_exp > 40) throw ResourceError("peak count too large");
  p.L = 1L << p.n_peaks_exp;
  return p;
}

GkpParams aux_params(int ell, double delta) {
  if (ell < 1 || ell > 30) throw ValidationError("ell out of range");
  GkpParams p = canonical_params(delta, 1L << ell);
  p.d = 2;
  p.ell = 1;
  p.eps = std::ldexp(1.0, -(ell + 1));
  return p;
}

std::vector<double> CombStateSpec::peak_centers() const {
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(params.L));
  for (long z = -params.L / 2; z < params.L / 2; ++z) c.push_back(scale * static_cast<double>(z) + shift);
  return c;
}

CombStateSpec code_state_spec(const GkpParams& p, long j) {
  CombStateSpec s;
  s.params = p;
  s.j = j;
  const double d = static_cast<double>(p.d);
  s.scale = std::sqrt(2.0 * kPi * d);
  s.shift = std::sqrt(2.0 * kPi / d) * static_cast<double>(j);
  s.truncated = true;
  return s;
}

CombStateSpec integer_comb_spec(long L, double delta) {
  if (L < 2 || L % 2) throw ValidationError("peak count must be even and positive");
  CombStateSpec s;
  s.params.delta = delta;
  s.params.L = L;
  s.params.eps = 0.0;
  s.params.d = 1;
  s.truncated = false;
  return s;
}

double comb_amplitude(const CombStateSpec& spec, double x) {
  const double delta = spec.params.delta;
  const double u = (x - spec.shift) / spec.scale;
  const long half = spec.params.L / 2;
  const double norm_gauss = std::pow(kPi * delta * delta, -0.25);
  const double trunc_norm = spec.truncated ? 1.0 / std::sqrt(std::erf(spec.params.eps / delta)) : 1.0;
  const double pref = norm_gauss * trunc_norm / std::sqrt(static_cast<double>(spec.params.L) * spec.scale);
  const double reach = spec.truncated ? spec.params.eps : 40.0 * delta;
  const long zlo = std::max(-half, static_cast<long>(std::floor(u - reach)));
  const long zhi = std::min(half - 1, static_cast<long>(std::ceil(u + reach)));
  double acc = 0.0;
  for (long z = zlo; z <= zhi; ++z) {
    const double v = u - static_cast<double>(z);
    if (spec.truncated && std::abs(v) > spec.params.eps) continue;
    acc += std::exp(-v * v / (2.0 * delta * delta));
  }
  return pref * acc;
}

HybridState comb_wavefunction(const CombStateSpec& spec, const GridSpec& grid) {
  if (grid.dx > spec.peak_sigma() / 8.0 * (1.0 + 1e-12))
    throw ValidationError("grid too coarse: fewer than 8 samples per peak width");
  const double lo = spec.scale * (-static_cast<double>(spec.params.L / 2)) + spec.shift;
  const double hi = spec.scale * static_cast<double>(spec.params.L / 2 - 1) + spec.shift;
  const double reach = spec.truncated ? spec.half_support() : 12.0 * spec.peak_sigma();
  if (lo - reach < grid.x0 || hi + reach > grid.x_max()) throw ValidationError("grid too small: support escapes grid");
  HybridState s(1, 0, {grid});
  for (std::size_t k = 0; k < grid.n_points; ++k) s.amps()[k] = comb_amplitude(spec, grid.x(k));
  s.normalize();
  return s;
}

HybridState encoded_superposition(const GkpParams& p, const std::vector<std::pair<long, cplx>>& coeffs,
                                  const GridSpec& grid, int r) {
  HybridState s(1, r, {grid});
  for (const auto& [j, c] : coeffs) {
    const auto basis = comb_wavefunction(code_state_spec(p, j), grid);
    for (std::size_t k = 0; k < grid.n_points; ++k) s.amps()[k] += c * basis.amps()[k];
  }
  s.normalize();
  return s;
}

GridSpec grid_for_comb(const CombStateSpec& spec, double samples_per_sigma, double margin) {
  const double dx = spec.peak_sigma() / samples_per_sigma;
  const double half = spec.scale * static_cast<double>(spec.params.L / 2) + std::abs(spec.shift) +
                      margin * std::max(spec.scale, 12.0 * spec.peak_sigma());
  std::size_t n = 64;
  while (static_cast<double>(n / 2) * dx < half) n *= 2;
  check_memory(n, memory_cap_bytes());
  return GridSpec::centered(n, dx);
}

std::vector<Interval> support_set(const CombStateSpec& spec) {
  std::vector<Interval> out;
  const double h = spec.half_support();
  for (double c : spec.peak_centers()) out.push_back({c - h, c + h});
  return out;
}

OverlapResult overlap_check(double delta, double eps, long L, double samples_per_sigma) {
  if (!(delta > 0.0 && delta < 0.25)) throw ValidationError("delta must lie in (0, 1/4)");
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
  if (samples_per_sigma < 8.0) throw ValidationError("grid resolution insufficient");
  auto full = integer_comb_spec(L, delta);
  auto cut = full;
  cut.truncated = true;
  cut.params.eps = eps;
  const GridSpec grid = grid_for_comb(full, samples_per_sigma, 1.0);
  const auto a = comb_wavefunction(full, grid);
  const auto b = comb_wavefunction(cut, grid);
  OverlapResult r;
  r.overlap_sq = std::norm(inner_product(a, b));
  r.lower_bound = 1.0 - 16.0 * delta * delta - 2.0 * std::exp(-(eps / delta) * (eps / delta));
  r.dx = grid.dx;
  return r;
}

nlohmann::json state_dump(const HybridState& s) {
  nlohmann::json grids = nlohmann::json::array();
  for (const auto& g : s.grids()) grids.push_back({{"n_points", g.n_points}, {"dx", g.dx}, {"x0", g.x0}});
  nlohmann::json samples = nlohmann::json::array();
  if (s.m() == 1) {
    const std::size_t n = s.grids()[0].n_points;
    for (std::size_t z = 0; z < (std::size_t{1} << s.r()); ++z)
      for (std::size_t k = 0; k < n; ++k) {
        const auto a = s.amps()[z * n + k];
        if (a == cplx{}) continue;
        samples.push_back({s.grids()[0].x(k), a.real(), a.imag(), z});
      }
  }
  return {{"m", s.m()}, {"r", s.r()}, {"grids", grids}, {"samples", samples}};
}

}  // namespace hqoc
