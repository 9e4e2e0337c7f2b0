#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hqoc/energy_bounds.hpp"
#include "hqoc/error.hpp"
#include "hqoc/gkp.hpp"
#include "hqoc/simulator.hpp"

using namespace hqoc;

namespace {

Distribution gaussian_grid(double sigma, double mu = 0.0) {
  std::vector<double> x, w;
  for (int k = -20000; k <= 20000; ++k) {
    const double v = mu + k * 1e-3;
    x.push_back(v);
    w.push_back(std::exp(-0.5 * (v - mu) * (v - mu) / (sigma * sigma)));
  }
  return {x, w};
}

Distribution uniform_grid(double lo, double hi, int n) {
  std::vector<double> x, w;
  for (int k = 0; k < n; ++k) {
    x.push_back(lo + (hi - lo) * (k + 0.5) / n);
    w.push_back(1.0);
  }
  return {x, w};
}

}  // namespace

TEST_CASE("symmetric radius") {
  CHECK(symradius_delta(Distribution({3.0}, {1.0}), 0.1) == doctest::Approx(3.0));
  CHECK(symradius_delta(uniform_grid(-1.0, 1.0, 20000), 0.5) == doctest::Approx(0.5).epsilon(1e-3));
  const auto vac = gaussian_grid(std::sqrt(0.5));
  CHECK(symradius_delta(vac, 0.05) == doctest::Approx(1.386).epsilon(0.01));
  CHECK_THROWS_AS(Distribution({}, {}), ValidationError);
}

TEST_CASE("minimal diameter") {
  const auto u = uniform_grid(0.0, 1.0, 10000);
  CHECK(diam_delta(u, 0.2) == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(diam_delta(u.shifted(17.0), 0.2) == doctest::Approx(diam_delta(u, 0.2)).epsilon(1e-9));
  const auto g = gaussian_grid(1.0, 4.0);
  CHECK(diam_delta(g, 0.05) == doctest::Approx(2.0 * 1.95996).epsilon(1e-3));
  CHECK(diam_delta(g, 0.05) <= 2.0 * symradius_delta(g, 0.05));
}

TEST_CASE("concentration inequalities on random distributions") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0), w(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x, m;
    for (int k = 0; k < 40; ++k) {
      x.push_back(u(rng));
      m.push_back(w(rng));
    }
    const Distribution d(x, m);
    for (double delta : {0.05, 0.2}) {
      const auto st = concentration_stats(d, delta);
      CHECK(st.diam <= 2.0 * st.symradius + 1e-12);
      CHECK(delta * st.symradius * st.symradius <= st.second_moment + 1e-12);
      const auto c = conditioned_on_minimal_interval(d, delta);
      CHECK(c.values().back() - c.values().front() <= st.diam + 1e-12);
    }
  }
}

TEST_CASE("energy lower bound from the radius") {
  const auto vac = vacuum_state(1, 0, {GridSpec::centered(256, 0.0625)});
  const auto lb = energy_lower_bound_from_radius(vac, 0.05);
  CHECK(lb.total == doctest::Approx(0.05 * 1.386 * 1.386).epsilon(0.02));
  CHECK(lb.total <= energy_expectation(vac).max);

  const auto p = canonical_params(0.1, 2);
  const auto spec = code_state_spec(p, 1);
  const auto s = comb_wavefunction(spec, grid_for_comb(spec));
  for (double delta : {0.01, 0.05, 0.1}) CHECK(energy_lower_bound_from_radius(s, delta).total <= energy_expectation(s).max);

  const auto split = energy_lower_bound_from_radius(4.0, 0.1, 2);
  CHECK(split.total == doctest::Approx(1.6));
  CHECK(split.per_mode == doctest::Approx(0.8));
  CHECK(energy_lower_bound_from_radius(4.0, 1e-9, 1).total == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("radius dimension bound") {
  CHECK(radius_dimension_bound(2, 1, 1, 0.0 + 1e-300) == doctest::Approx(std::sqrt(std::numbers::pi / 4.0)).epsilon(1e-9));
  const double expect = std::sqrt(std::numbers::pi / 4.0) * std::pow(4.0 * (1.0 - 3.0 * std::sqrt(0.01)) / 1.0, 0.25);
  CHECK(radius_dimension_bound(4, 2, 0, 0.01) == doctest::Approx(expect));
  CHECK(radius_dimension_bound(2, 1, 0, 0.01) == doctest::Approx(std::sqrt(std::numbers::pi / 4.0) * std::sqrt(2.0 * 0.7)));
  CHECK_THROWS_AS(radius_dimension_bound(2, 1, 0, 1.0 / 9.0), ValidationError);
  CHECK_THROWS_AS(radius_dimension_bound(2, 1, 0, 0.0), ValidationError);
}

TEST_CASE("encoded families reach the radius dimension bound") {
  for (long d : {2L, 4L}) {
    const auto p = canonical_params(0.05, d);
    for (long j = 0; j < d; ++j) {
      const auto spec = code_state_spec(p, j);
      const auto s = comb_wavefunction(spec, grid_for_comb(spec));
      CHECK(state_symradius(s, 0.01) >= radius_dimension_bound(double(d), 1, 0, 0.01));
    }
  }
}

TEST_CASE("mode scalings") {
  const auto c = mode_scalings(12, 3);
  CHECK(c.log2_symradius == doctest::Approx(2.0));
  CHECK(c.log2_energy == doctest::Approx(4.0 - std::log2(3.0)));
}

TEST_CASE("Donoho-Stark operator") {
  for (double R : {0.5, 2.0, 4.0}) {
    const auto r = donoho_stark_trace(R, 256);
    CHECK(r.exact_trace == doctest::Approx(4.0 * R * R / std::numbers::pi));
    CHECK(r.trace == doctest::Approx(r.exact_trace).epsilon(1e-9));
    CHECK(r.max_eigenvalue <= 1.0 + 1e-9);
    CHECK(r.min_eigenvalue >= -1e-9);
  }
  CHECK(donoho_stark_trace(0.5, 256).max_eigenvalue < 0.95);
  CHECK_THROWS_AS(donoho_stark_trace(1.0, 8), ValidationError);
}
