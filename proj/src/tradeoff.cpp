#include "hqoc/tradeoff.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hqoc/error.hpp"
#include "hqoc/moments.hpp"
#include "hqoc/pipeline.hpp"

namespace hqoc {

namespace {

constexpr double kLog2C = 46.0;
constexpr double kModeExp = 24.0;
constexpr double kEnergyRoot = 42.0;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive");
}

// Least squares over the given columns; returns coefficients and max abs residual.
std::pair<Eigen::VectorXd, double> lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  return {coef, (A * coef - y).cwiseAbs().maxCoeff()};
}

}  // namespace

double log2_sampling_error_bound(double n, double m, double s, double log2_energy) {
  check_positive(n, "n");
  check_positive(m, "m");
  check_positive(s, "s");
  return kLog2C + 2.0 * std::log2(s + m) + kModeExp * n / m - log2_energy / kEnergyRoot;
}

double sampling_error_bound(double n, double m, double s, double log2_energy) {
  const double l = log2_sampling_error_bound(n, m, s, log2_energy);
  return l >= 1.0 ? 2.0 : std::exp2(l);
}

double log2_required_energy(double n, double m, double s, double epsilon) {
  check_positive(n, "n");
  check_positive(m, "m");
  check_positive(s, "s");
  if (!(epsilon > 0.0 && epsilon <= 2.0)) throw ValidationError("epsilon must lie in (0, 2]");
  return kEnergyRoot * (kLog2C + 2.0 * std::log2(s + m) + kModeExp * n / m - std::log2(epsilon));
}

RequiredEnergyConstants required_energy_constants() {
  // (s+m)^2 <= 4 s^2 and eps^{-42} <= 2^42 eps^{-84} on (0, 2].
  RequiredEnergyConstants k;
  k.log2_C = kEnergyRoot * (kLog2C + 2.0) + kEnergyRoot;
  k.delta = kEnergyRoot * kModeExp;
  k.mu = 2.0 * kEnergyRoot;
  return k;
}

ImplementationBound implementation_energy_bound(double s, int ell, double delta) {
  check_positive(s, "s");
  if (ell < 1) throw ValidationError("ell must be positive");
  if (!(delta > 0.0) || delta > std::ldexp(1.0, -(ell + 1)))
    throw ValidationError("delta must lie in (0, 2^-(ell+1)]");
  ImplementationBound b;
  const double ld = std::log2(delta);
  b.log2_energy = 3.0 * std::log2(s) + 891.0 * ell + 62.0 - 21.0 * ld;
  const double lx = std::log2(72.0 * s) + ell;
  const double lo = std::log2(-10.0 * ld);
  b.log2_xi_bar_bound = std::max(lx, lo) + std::log2(1.0 + std::exp2(-std::abs(lx - lo)));
  b.log2_g_bar_bound = 10.0 + 148.0 * ell - 3.0 * ld;
  return b;
}

double analyzer_wtot_log2_energy(long s, int m, int ell, double delta) {
  const auto p = circuit_params(build_wtot_annotated(s, m, ell, delta));
  return log2_coarse_energy_bound(p.log_g_bar_max, p.xi_bar_max);
}

double log2_delta_max(double s, int ell, double log2_energy) {
  check_positive(s, "s");
  const double from_energy = (3.0 * std::log2(s) + 891.0 * ell + 62.0 - log2_energy) / 21.0;
  return std::min(-static_cast<double>(ell + 1), from_energy);
}

GrowthFit fit_growth(const std::vector<RegimeRow>& rows) {
  if (rows.size() < 4) throw ValidationError("growth fit needs at least 4 points");
  const auto k = static_cast<Eigen::Index>(rows.size());
  Eigen::VectorXd y(k), ln(k), nn(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    y(i) = rows[static_cast<std::size_t>(i)].log2_energy;
    nn(i) = rows[static_cast<std::size_t>(i)].n;
    ln(i) = std::log2(nn(i));
  }
  const double range = std::max(y.maxCoeff() - y.minCoeff(), 1.0);

  GrowthFit f;
  Eigen::MatrixXd L(k, 2);
  L.col(0) = ln;
  L.col(1).setOnes();
  const auto [lc, lres] = lsq(L, y);
  f.log_slope = lc(0);
  f.log_fit_residual = lres / range;

  double best = INFINITY;
  for (int g = 50; g <= 2000; ++g) {
    const double gamma = g * 1e-3;
    Eigen::MatrixXd A(k, 3);
    A.col(0) = nn.array().pow(gamma);
    A.col(1) = ln;
    A.col(2).setOnes();
    const auto [c, res] = lsq(A, y);
    const double sse = (A * c - y).squaredNorm();
    if (sse < best) {
      best = sse;
      f.gamma = gamma;
      f.c = c(0);
      f.a = c(1);
      f.b = c(2);
      f.max_residual = res / range;
    }
  }
  if (f.log_fit_residual < 1e-2)
    f.growth_class = "polynomial";
  else
    f.growth_class = f.gamma > 0.75 ? "exponential" : "subexponential";
  return f;
}

std::vector<Regime> regime_table(const std::vector<double>& n_values,
                                 const std::function<double(double)>& s_fn,
                                 const std::function<double(double)>& eps_fn) {
  const std::vector<std::pair<std::string, std::function<double(double)>>> modes = {
      {"m=1", [](double) { return 1.0; }},
      {"m=ceil(sqrt(n))", [](double n) { return std::ceil(std::sqrt(n)); }},
      {"m=n", [](double n) { return n; }}};
  std::vector<Regime> out;
  for (const auto& [name, m_fn] : modes) {
    Regime r;
    r.name = name;
    for (double n : n_values) {
      const double m = m_fn(n);
      r.rows.push_back({n, m, log2_required_energy(n, m, s_fn(n), eps_fn(n))});
    }
    r.fit = fit_growth(r.rows);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json regime_json(const std::vector<Regime>& regimes) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : regimes) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"m", row.m}, {"log2_energy", row.log2_energy}});
    out.push_back({{"regime", r.name},
                   {"rows", rows},
                   {"fit",
                    {{"gamma", r.fit.gamma},
                     {"c", r.fit.c},
                     {"a", r.fit.a},
                     {"b", r.fit.b},
                     {"max_residual", r.fit.max_residual},
                     {"log_slope", r.fit.log_slope},
                     {"log_fit_residual", r.fit.log_fit_residual},
                     {"class", r.fit.growth_class}}}});
  }
  return out;
}

}  // namespace hqoc
