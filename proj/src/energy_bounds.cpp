#include "hqoc/energy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMassTol = 1e-12;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
}

}  // namespace

Distribution::Distribution(std::vector<double> values, std::vector<double> masses) {
  if (values.empty() || values.size() != masses.size()) throw ValidationError("empty distribution");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  double total = 0.0;
  for (double w : masses) {
    if (!(w >= 0.0)) throw ValidationError("negative mass");
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("empty distribution");
  for (auto i : order) {
    values_.push_back(values[i]);
    masses_.push_back(masses[i] / total);
  }
}

double Distribution::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += values_[i] * masses_[i];
  return acc;
}

double Distribution::second_moment() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += values_[i] * values_[i] * masses_[i];
  return acc;
}

double Distribution::variance() const {
  const double mu = mean();
  double acc = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) acc += (values_[i] - mu) * (values_[i] - mu) * masses_[i];
  return acc;
}

Distribution Distribution::shifted(double c) const {
  auto v = values_;
  for (auto& x : v) x += c;
  return {v, masses_};
}

double symradius_delta(const Distribution& d, double delta) {
  check_delta(delta);
  std::vector<std::pair<double, double>> by_abs;
  for (std::size_t i = 0; i < d.values().size(); ++i) by_abs.emplace_back(std::abs(d.values()[i]), d.masses()[i]);
  std::sort(by_abs.begin(), by_abs.end());
  double inside = 0.0;
  for (std::size_t i = 0; i < by_abs.size(); ++i) {
    inside += by_abs[i].second;
    const bool last_of_value = i + 1 == by_abs.size() || by_abs[i + 1].first != by_abs[i].first;
    if (last_of_value && inside >= 1.0 - delta - kMassTol) return by_abs[i].first;
  }
  return by_abs.back().first;
}

double diam_delta(const Distribution& d, double delta) {
  check_delta(delta);
  const auto& x = d.values();
  const auto& w = d.masses();
  double best = INFINITY;
  double mass = 0.0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < x.size(); ++lo) {
    while (hi < x.size() && mass < 1.0 - delta - kMassTol) mass += w[hi++];
    if (mass < 1.0 - delta - kMassTol) break;
    best = std::min(best, x[hi - 1] - x[lo]);
    mass -= w[lo];
  }
  return best;
}

Distribution conditioned_on_minimal_interval(const Distribution& d, double delta) {
  const double width = diam_delta(d, delta);
  const auto& x = d.values();
  const auto& w = d.masses();
  double mass = 0.0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < x.size(); ++lo) {
    while (hi < x.size() && mass < 1.0 - delta - kMassTol) mass += w[hi++];
    if (x[hi - 1] - x[lo] == width) {
      return {std::vector<double>(x.begin() + static_cast<long>(lo), x.begin() + static_cast<long>(hi)),
              std::vector<double>(w.begin() + static_cast<long>(lo), w.begin() + static_cast<long>(hi))};
    }
    mass -= w[lo];
  }
  return d;
}

ConcentrationStats concentration_stats(const Distribution& d, double delta) {
  ConcentrationStats s;
  s.delta = delta;
  s.diam = diam_delta(d, delta);
  s.symradius = symradius_delta(d, delta);
  s.sigma = std::sqrt(d.variance());
  s.second_moment = d.second_moment();
  return s;
}

double state_symradius(const HybridState& s, double delta) {
  double r = 0.0;
  for (int a = 0; a < s.m(); ++a) {
    auto [xv, xw] = position_marginal(s, a);
    auto [pv, pw] = momentum_marginal(s, a);
    r = std::max({r, symradius_delta(Distribution(xv, xw), delta), symradius_delta(Distribution(pv, pw), delta)});
  }
  return r;
}

LowerBound energy_lower_bound_from_radius(double symradius, double delta, int m) {
  check_delta(delta);
  if (m < 1) throw ValidationError("m must be positive");
  LowerBound b;
  b.total = delta * symradius * symradius;
  b.per_mode = b.total / m;
  return b;
}

LowerBound energy_lower_bound_from_radius(const HybridState& s, double delta) {
  return energy_lower_bound_from_radius(state_symradius(s, delta), delta, s.m());
}

double radius_dimension_bound(double d, int m, int r, double delta) {
  if (!(delta > 0.0 && delta < 1.0 / 9.0)) throw ValidationError("delta must lie in (0, 1/9)");
  if (!(d >= 1.0) || m < 1 || r < 0) throw ValidationError("invalid dimension parameters");
  const double base = d * (1.0 - 3.0 * std::sqrt(delta)) / std::exp2(r);
  return std::sqrt(kPi / 4.0) * std::pow(base, 1.0 / (2.0 * m));
}

ModeScalings mode_scalings(double n, double m) {
  if (!(n > 0.0) || !(m > 0.0)) throw ValidationError("n and m must be positive");
  return {n / (2.0 * m), n / m - std::log2(m)};
}

DonohoStarkResult donoho_stark_trace(double R, int n_quad) {
  if (!(R > 0.0)) throw ValidationError("R must be positive");
  if (n_quad < 64) throw ValidationError("n_quad must be at least 64");
  const double h = 2.0 * R / (n_quad - 1);
  Eigen::VectorXd x(n_quad), w(n_quad);
  for (int i = 0; i < n_quad; ++i) {
    x(i) = -R + i * h;
    w(i) = (i == 0 || i == n_quad - 1) ? h / 2.0 : h;
  }
  Eigen::MatrixXd K(n_quad, n_quad);
  for (int i = 0; i < n_quad; ++i)
    for (int j = 0; j < n_quad; ++j) {
      const double k = i == j ? 2.0 * R / kPi : std::sin(2.0 * R * (x(i) - x(j))) / (kPi * (x(i) - x(j)));
      K(i, j) = std::sqrt(w(i)) * k * std::sqrt(w(j));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  DonohoStarkResult res;
  res.trace = K.trace();
  res.exact_trace = 4.0 * R * R / kPi;
  res.max_eigenvalue = es.eigenvalues().maxCoeff();
  res.min_eigenvalue = es.eigenvalues().minCoeff();
  return res;
}

}  // namespace hqoc
