#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "acceptance_suite.hpp"
#include "hqoc/error.hpp"
#include "hqoc/pipeline.hpp"
#include "hqoc/simulator.hpp"

using namespace hqoc;

namespace {

HybridState vacuum_for(const Circuit& c) { return vacuum_state(c.m, c.r, auto_grid(c)); }

double mean_q2(const HybridState& s) { return energy_expectation(s).q2[0]; }

}  // namespace

TEST_CASE("vacuum moments") {
  const auto s = vacuum_for(Circuit{1, 1, {}});
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(mean_position(s)[0]) <= 1e-9);
  const auto e = energy_expectation(s);
  CHECK(e.q2[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(e.p2[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(e.max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.qubit_probabilities()[0] == doctest::Approx(1.0));
}

TEST_CASE("inadequate vacuum grids are rejected") {
  CHECK_THROWS_AS(vacuum_state(1, 0, {GridSpec::centered(64, 0.6)}), ValidationError);
  CHECK_THROWS_AS(vacuum_state(1, 0, {GridSpec::centered(16, 0.25)}), ValidationError);
}

TEST_CASE("position displacement shifts the mean") {
  const Circuit c{1, 0, {Gate::disp_p(0, 1.3)}};
  auto s = vacuum_for(c);
  simulate(s, c);
  CHECK(mean_position(s)[0] == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("momentum kick leaves the position density alone") {
  const Circuit c{1, 0, {Gate::disp_q(0, std::numbers::pi)}};
  auto s = vacuum_for(c);
  const auto before = position_marginal(s, 0).second;
  simulate(s, c);
  const auto after = position_marginal(s, 0).second;
  for (std::size_t k = 0; k < before.size(); ++k) CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-14));
  const auto e = energy_expectation(s);
  CHECK(e.p2[0] == doctest::Approx(0.5 + std::numbers::pi * std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("squeezing rescales the vacuum") {
  const Circuit c{1, 0, {Gate::squeeze(0, 2.0)}};
  auto s = vacuum_for(c);
  simulate(s, c);
  const auto e = energy_expectation(s);
  CHECK(e.q2[0] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(e.p2[0] == doctest::Approx(0.125).epsilon(1e-5));
  CHECK(e.max == doctest::Approx(2.125).epsilon(1e-5));
}

TEST_CASE("controlled gates act on the control branch only") {
  const Circuit c{1, 1, {Gate::qubit("H", {0}), Gate::ctrl_disp_p(0, 0, 2.0)}};
  auto s = vacuum_for(c);
  simulate(s, c);
  const auto lam = s.qubit_probabilities();
  CHECK(lam[0] == doctest::Approx(0.5));
  CHECK(lam[1] == doctest::Approx(0.5));
  CHECK(mean_position(s)[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("homodyne sampling") {
  const auto s = vacuum_for(Circuit{1, 1, {}});
  const auto shots = homodyne_sample(s, 100000, 17);
  double m1 = 0.0, m2 = 0.0;
  for (const auto& sh : shots) {
    m1 += sh.y[0];
    m2 += sh.y[0] * sh.y[0];
    CHECK(sh.z[0] == 0);
  }
  m1 /= static_cast<double>(shots.size());
  const double var = m2 / static_cast<double>(shots.size()) - m1 * m1;
  CHECK(std::abs(var - 0.5) <= 0.02);
  const auto again = homodyne_sample(s, 100, 17);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].y == shots[i].y);
  CHECK(homodyne_sample(s, 10, 18)[0].y != shots[0].y);
}

TEST_CASE("samples of an encoded basis state decode to its bits") {
  const auto p = code_params(2, 0.02);
  const auto grid = grid_for_comb(code_state_spec(p, 2));
  const auto s = comb_wavefunction(code_state_spec(p, 2), grid);
  const auto layout = make_layout(2, 1);
  for (const auto& sh : homodyne_sample(s, 2000, 5)) CHECK(post_process(sh.y, layout) == std::vector<int>{1, 0});
}

TEST_CASE("trace distance needs matching grids") {
  const auto a = vacuum_state(1, 0, {GridSpec::centered(128, 0.125)});
  const auto b = vacuum_state(1, 0, {GridSpec::centered(256, 0.125)});
  CHECK_THROWS_AS(trace_distance(a, b), ValidationError);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
}

TEST_CASE("auto grid sizing") {
  const auto empty = auto_grid(Circuit{1, 0, {}})[0];
  const double r0 = vacuum_radius();
  CHECK(std::erfc(r0) <= 1.0e-12 * (1 + 1e-6));
  CHECK(empty.n_points * empty.dx >= 2.0 * r0 * 1.2);
  CHECK(empty.n_points * empty.dx <= 2.0 * 2.0 * r0 * 1.2 + 1.0);

  const Circuit squeeze{1, 0, {Gate::squeeze(0, 2.0)}};
  auto sq_state = vacuum_for(squeeze);
  simulate(sq_state, squeeze);
  const auto& sq = sq_state.grids()[0];
  CHECK(sq.dx * sq.n_points == doctest::Approx(2.0 * empty.dx * empty.n_points));
  CHECK(sq.nyquist() == doctest::Approx(empty.nyquist() / 2.0));

  const double delta = 0.04;
  const Circuit prep = build_prep_circuit(3, delta);
  auto s = vacuum_for(prep);
  simulate(s, prep);
  const auto& g = s.grids()[0];
  CHECK(g.dx <= delta / 8.0 * (1 + 1e-12));
  CHECK(g.n_points * g.dx >= 2.0 * 4.0 * 1.2);
}

TEST_CASE("memory cap is enforced") {
  AutoGridOptions opt;
  opt.mem_cap_bytes = 1 << 16;
  CHECK_THROWS_AS(auto_grid(build_prep_circuit(8, 0.001), opt), ResourceError);
}

TEST_CASE("predicted windows leaving the grid raise grid overflow") {
  const Circuit c{1, 0, {Gate::disp_p(0, 1.0), Gate::disp_p(0, 40.0)}};
  auto s = vacuum_state(1, 0, {GridSpec::centered(256, 0.125)});
  try {
    simulate(s, c);
    FAIL("expected grid overflow");
  } catch (const GridOverflowError& e) {
    CHECK(std::string(e.what()).find("grid overflow at gate 2") != std::string::npos);
  }
}

TEST_CASE("blackboxes cannot be simulated") {
  auto s = vacuum_state(1, 0, {GridSpec::centered(128, 0.125)});
  CHECK_THROWS_AS(apply_gate(s, Gate::blackbox("b", {0}, {}, 1.0, 0.0, 1.0, 1)), ValidationError);
}

TEST_CASE("gates preserve the norm") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const Circuit c = acceptance::random_circuit(rng, 12, 2.0);
    auto s = vacuum_for(c);
    for (std::size_t k = 0; k < c.gates.size(); ++k) {
      apply_gate(s, c.gates[k], k + 1);
      CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("displacements compose") {
  const Circuit two{1, 0, {Gate::disp_p(0, 0.7), Gate::disp_p(0, -1.9)}};
  const Circuit one{1, 0, {Gate::disp_p(0, -1.2)}};
  const auto grids = auto_grid(two);
  auto a = vacuum_state(1, 0, grids), b = vacuum_state(1, 0, grids);
  simulate(a, two);
  simulate(b, one);
  CHECK(std::norm(inner_product(a, b)) >= 1.0 - 1e-10);
}

TEST_CASE("Fourier round trip") {
  const Circuit c{1, 1, {Gate::qubit("H", {0}), Gate::ctrl_disp_q(0, 0, 0.8), Gate::squeeze(0, 1.5)}};
  auto s = vacuum_for(c);
  simulate(s, c);
  const auto before = s.amps();
  fft_mode(s, 0, true);
  fft_mode(s, 0, false);
  double worst = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) worst = std::max(worst, std::abs(before[k] - s.amps()[k]));
  CHECK(worst <= 1e-12);
}

TEST_CASE("multimode product states") {
  const Circuit c{2, 1, {Gate::disp_p(0, 1.0), Gate::squeeze(1, 2.0)}};
  auto s = vacuum_for(c);
  simulate(s, c);
  const auto e = energy_expectation(s);
  CHECK(e.q2[0] == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(e.q2[1] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(e.max == doctest::Approx(2.125).epsilon(1e-5));
}
