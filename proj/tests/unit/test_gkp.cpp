#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hqoc/error.hpp"
#include "hqoc/gkp.hpp"
#include "hqoc/pipeline.hpp"

using namespace hqoc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("canonical parameters") {
  const auto a = canonical_params(1.0 / 16.0, 4);
  CHECK(a.eps == 0.125);
  CHECK(a.L == 16);
  const auto b = canonical_params(0.1, 2);
  CHECK(b.eps == 0.25);
  CHECK(b.L == 64);
  const auto aux = aux_params(2, 0.05);
  CHECK(aux.d == 2);
  CHECK(aux.eps == 0.125);
  CHECK(aux.L == canonical_params(0.05, 4).L);
  CHECK_THROWS_AS(canonical_params(0.3, 2), ValidationError);
  CHECK_THROWS_AS(canonical_params(0.1, 1), ValidationError);
}

TEST_CASE("comb density peaks sit on the support lattice") {
  const auto p = canonical_params(1.0 / 32.0, 4);
  const auto spec = code_state_spec(p, 0);
  const auto grid = grid_for_comb(spec);
  const auto s = comb_wavefunction(spec, grid);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(p.L == 64);
  const double scale = std::sqrt(8.0 * kPi);
  for (long z = -32; z < 32; ++z) {
    const double centre = scale * static_cast<double>(z);
    std::size_t best = 0;
    double best_mass = -1.0;
    for (std::size_t k = 0; k < grid.n_points; ++k)
      if (std::abs(grid.x(k) - centre) < scale / 2 && std::norm(s.amps()[k]) > best_mass) {
        best_mass = std::norm(s.amps()[k]);
        best = k;
      }
    CHECK(std::abs(grid.x(best) - centre) <= grid.dx);
  }
}

TEST_CASE("code states are orthonormal") {
  const auto p = canonical_params(1.0 / 32.0, 4);
  const auto grid = grid_for_comb(code_state_spec(p, 3));
  for (long i = 0; i < 4; ++i)
    for (long j = 0; j < 4; ++j) {
      const cplx g = inner_product(comb_wavefunction(code_state_spec(p, i), grid),
                                   comb_wavefunction(code_state_spec(p, j), grid));
      CHECK(std::abs(g - cplx(i == j ? 1.0 : 0.0)) <= 1e-8);
    }
}

TEST_CASE("support sets") {
  const auto p = canonical_params(0.05, 2);
  const auto iv = support_set(code_state_spec(p, 0));
  CHECK(iv.size() == static_cast<std::size_t>(p.L));
  const double half = std::sqrt(kPi / 4.0);
  for (std::size_t k = 0; k < iv.size(); ++k) {
    const double z = static_cast<double>(k) - static_cast<double>(p.L / 2);
    CHECK((iv[k].lo + iv[k].hi) / 2 == doctest::Approx(2.0 * std::sqrt(kPi) * z));
    CHECK((iv[k].hi - iv[k].lo) / 2 == doctest::Approx(half));
  }

  const auto q = canonical_params(0.02, 4);
  for (long a = 0; a < 4; ++a)
    for (long b = a + 1; b < 4; ++b)
      for (const auto& x : support_set(code_state_spec(q, a)))
        for (const auto& y : support_set(code_state_spec(q, b))) CHECK((x.hi <= y.lo + 1e-9 || y.hi <= x.lo + 1e-9));

  for (long j = 0; j < 4; ++j)
    for (const auto& x : support_set(code_state_spec(q, j))) {
      CHECK(discretize(x.lo + 1e-9, 2) == j);
      CHECK(discretize(x.hi - 1e-9, 2) == j);
      CHECK(discretize((x.lo + x.hi) / 2, 2) == j);
    }
}

TEST_CASE("truncated comb overlap") {
  const auto a = overlap_check(0.05, 0.25, 16);
  CHECK(a.lower_bound == doctest::Approx(1.0 - 0.04 - 2.0 * std::exp(-25.0)));
  CHECK(a.overlap_sq >= a.lower_bound);
  const auto b = overlap_check(0.02, 0.1, 16);
  CHECK(b.lower_bound == doctest::Approx(1.0 - 0.0064 - 2.0 * std::exp(-25.0)));
  CHECK(b.overlap_sq >= b.lower_bound);
  const auto c = overlap_check(0.01, 0.1, 8);
  CHECK(c.lower_bound == doctest::Approx(1.0 - 16.0 * 1e-4).epsilon(1e-12));
  CHECK_THROWS_AS(overlap_check(0.05, 0.25, 16, 4.0), ValidationError);
}

TEST_CASE("grid adequacy is enforced") {
  const auto spec = code_state_spec(canonical_params(0.05, 2), 0);
  CHECK_THROWS_AS(comb_wavefunction(spec, GridSpec::centered(1 << 14, spec.peak_sigma())), ValidationError);
  CHECK_THROWS_AS(comb_wavefunction(spec, GridSpec::centered(64, spec.peak_sigma() / 10)), ValidationError);
}

TEST_CASE("code-state energy grows with squeezing") {
  double prev = 0.0;
  for (double delta : {0.1, 0.05, 0.02}) {
    const auto spec = code_state_spec(canonical_params(delta, 4), 0);
    const double e = energy_expectation(comb_wavefunction(spec, grid_for_comb(spec))).max;
    CHECK(std::isfinite(e));
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("pure-state trace distance matches the overlap identity") {
  const auto p = canonical_params(0.05, 2);
  const auto grid = grid_for_comb(code_state_spec(p, 1));
  const auto a = comb_wavefunction(code_state_spec(p, 0), grid);
  const auto b = encoded_superposition(p, {{0, cplx(0.8)}, {1, cplx(0.6)}}, grid);
  CHECK(trace_distance(a, b) == doctest::Approx(2.0 * std::sqrt(1.0 - 0.64)).epsilon(1e-10));
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  CHECK(trace_distance(a, comb_wavefunction(code_state_spec(p, 1), grid)) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("state dump lists samples with a grid header") {
  const auto spec = code_state_spec(canonical_params(0.1, 2), 0);
  const auto j = state_dump(comb_wavefunction(spec, grid_for_comb(spec)));
  CHECK(j["grids"].size() == 1);
  CHECK(j["samples"].size() > 0);
  CHECK(j["samples"][0].size() == 4);
}
