#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hqoc/error.hpp"
#include "hqoc/pipeline.hpp"
#include "hqoc/tradeoff.hpp"

using namespace hqoc;

TEST_CASE("prep circuit size closed form") {
  CHECK(prep_circuit_size(1, 0.25) == 10);
  CHECK(build_prep_circuit(1, 0.25).size() == 10);
  CHECK(prep_circuit_size(3, 0.01) == 25);
  CHECK(build_prep_circuit(3, 0.01).size() == 25);
  CHECK_THROWS_AS(build_prep_circuit(3, 0.3), ValidationError);
  CHECK_THROWS_AS(build_prep_circuit(0, 0.1), ValidationError);
}

TEST_CASE("prep circuit moment parameters") {
  for (int n : {1, 3, 5}) {
    for (double delta : {0.25, 0.04, 0.01}) {
      const auto p = circuit_params(build_prep_circuit(n, delta));
      CHECK(p.xi_bar_max == doctest::Approx(n * (std::numbers::pi + 1.0) + 1.0).epsilon(1e-9));
      CHECK(p.g_bar_max <= std::exp2(n) / delta * (1 + 1e-9));
    }
  }
}

TEST_CASE("code state preparation") {
  const double delta = 1.0 / 16.0;
  const auto info = code_prep_info(1, delta);
  CHECK(info.n == 6);
  CHECK(info.extra_reps == 2);
  const Circuit c = build_code_prep(1, delta);
  CHECK(static_cast<double>(c.size()) <= 21.0 * std::log(1.0 / delta));
  const auto p = circuit_params(c);
  CHECK(p.xi_bar_max <= 10.0 * std::log2(1.0 / delta));
  CHECK(p.g_bar_max <= 4.0 / std::pow(delta, 3) * (1 + 1e-9));
  const auto sim = simulate_code_prep(1, delta, false);
  CHECK(sim.trace_distance <= 25.0 * (std::sqrt(delta) + 4.0 * delta * delta));
  CHECK(sim.trace_distance < 1.0);
  CHECK(sim.qubit_leakage <= sim.trace_distance);
  CHECK_THROWS_AS(build_code_prep(2, 0.2), ValidationError);
}

TEST_CASE("W_prep layout and size") {
  const Circuit w = build_wprep(2, 1, 0.05);
  CHECK(w.m == 3);
  CHECK(w.r == 1);
  CHECK(static_cast<double>(w.size()) <= 42.0 * 2.0 * std::log(20.0));
  const Circuit w1 = build_wprep(1, 1, 0.05);
  CHECK(w1.size() == build_code_prep(1, 0.05).size() + build_aux_prep(1, 0.05).size());
  for (const auto& g : w1.gates)
    if (g.kind != GateKind::QubitGate) CHECK(g.mode >= 0);
}

TEST_CASE("factorized W_prep verification") {
  const auto v = verify_wprep_factorized(2, 1, 0.05);
  REQUIRE(v.per_mode_distance.size() == 3);
  double sum = 0.0;
  for (double d : v.per_mode_distance) sum += d;
  CHECK(v.total_distance == doctest::Approx(sum));
  CHECK(v.total_distance <= v.bound);
}

TEST_CASE("layout") {
  const auto l = make_layout(3, 2);
  CHECK(l.K == 1);
  CHECK(l.n_prime == 4);
  CHECK(l.ell == 2);
  CHECK(l.locate(0) == std::pair{0, 1});
  CHECK(l.locate(1) == std::pair{0, 0});
  CHECK(l.locate(2) == std::pair{1, 1});
  CHECK(make_layout(4, 4).K == 0);
  CHECK(make_layout(5, 3).K == 1);
  CHECK_THROWS_AS(make_layout(0, 1), ValidationError);
}

TEST_CASE("discretization and bit decoding") {
  const double u = std::sqrt(2.0 * std::numbers::pi / 4.0);
  CHECK(discretize(3.0 * u, 2) == 3);
  CHECK(discretize(-1.0 * u, 2) == 3);
  CHECK(discretize(4.0 * u + 0.1, 2) == 0);
  CHECK(discretize(0.4 * u, 2) == 0);
  CHECK(iota_inverse(3, 2) == std::vector<int>{1, 1});
  CHECK(iota_inverse(1, 2) == std::vector<int>{0, 1});
  CHECK(iota_inverse(2, 3) == std::vector<int>{0, 1, 0});
  for (long v = 0; v < 16; ++v) CHECK(iota(iota_inverse(v, 4)) == v);

  const auto l = make_layout(2, 1);
  CHECK(post_process({3.0 * u}, l) == std::vector<int>{1, 1});
  CHECK(post_process({1.0 * u}, l) == std::vector<int>{0, 1});
  CHECK(post_process({2.0 * u}, l) == std::vector<int>{1, 0});

  const auto l3 = make_layout(3, 2);
  const auto j = encode_basis({1, 0, 1}, l3);
  REQUIRE(j.size() == 2);
  CHECK(j[0] == 2);
  CHECK(j[1] == 2);
  CHECK(post_process({2.0 * u, 2.0 * u}, l3) == std::vector<int>{1, 0, 1});
}

TEST_CASE("sampling scheme") {
  SUBCASE("identity") {
    const auto r = run_sampling_scheme(Circuit{0, 2, {}}, 2, 1, 0.02, 200, 3);
    for (const auto& b : r.bits) CHECK(b == std::vector<int>{0, 0});
  }
  SUBCASE("X on qubit 1") {
    const auto r = run_sampling_scheme(Circuit{0, 2, {Gate::qubit("X", {1})}}, 2, 1, 0.02, 200, 3);
    for (const auto& b : r.bits) CHECK(b == std::vector<int>{0, 1});
    CHECK(r.qubit_leakage <= r.budget.eps_prep);
  }
  SUBCASE("two modes") {
    const Circuit logical{0, 3, {Gate::qubit("X", {0}), Gate::qubit("X", {2})}};
    const auto r = run_sampling_scheme(logical, 3, 2, 0.02, 100, 9);
    CHECK(r.layout.K == 1);
    for (const auto& b : r.bits) CHECK(b == std::vector<int>{1, 0, 1});
  }
  SUBCASE("X twice cancels") {
    const Circuit logical{0, 2, {Gate::qubit("X", {0}), Gate::qubit("X", {0})}};
    const auto r = run_sampling_scheme(logical, 2, 1, 0.02, 100, 1);
    for (const auto& b : r.bits) CHECK(b == std::vector<int>{0, 0});
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(run_sampling_scheme(Circuit{0, 2, {Gate::qubit("H", {0})}}, 2, 1, 0.02, 1, 1), ValidationError);
    CHECK_THROWS_AS(run_sampling_scheme(Circuit{0, 9, {}}, 9, 9, 0.02, 1, 1), ResourceError);
    CHECK_THROWS_AS(run_sampling_scheme(Circuit{0, 2, {}}, 2, 1, 0.2, 1, 1), ValidationError);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const Circuit logical{0, 2, {Gate::qubit("X", {0})}};
  const auto a = run_sampling_scheme(logical, 2, 1, 0.02, 50, 77);
  const auto b = run_sampling_scheme(logical, 2, 1, 0.02, 50, 77);
  for (std::size_t k = 0; k < a.shots.size(); ++k) CHECK(a.shots[k].y == b.shots[k].y);
}

TEST_CASE("error budget") {
  const auto b = error_budget(1, 2, 1e-3, 10);
  CHECK(b.eps_prep == doctest::Approx(50.0 * (std::sqrt(1e-3) + 16.0 * 1e-6)));
  CHECK(b.eps_gate == doctest::Approx(600.0 * 10 * 16 * 1e-3));
  CHECK(b.l1_bound == 2.0);
  CHECK(b.T_logical == 10 * 289);
  CHECK(static_cast<double>(b.T_logical) <= b.T_logical_bound);

  const auto zero = error_budget(1, 1, 1e-4, 0);
  CHECK(zero.eps_gate == 0.0);
  CHECK(zero.eps_final == doctest::Approx(zero.eps_prep));

  const auto tiny = error_budget(3, 2, 1e-8, 5);
  CHECK(tiny.eps_final < 1.0);
  CHECK(tiny.T_prep > 0);
  CHECK(static_cast<double>(tiny.T_prep) <= tiny.T_prep_bound);

  const auto m2 = error_budget(2, 1, 0.05, 1);
  CHECK(m2.T_prep == static_cast<long>(build_wprep(2, 1, 0.05).size()));

  const auto j = budget_json(b);
  CHECK(j.contains("eps_prep"));
  CHECK(j.contains("l1_bound"));
  CHECK_THROWS_AS(error_budget(0, 1, 0.1, 1), ValidationError);
}

TEST_CASE("log budget agrees with the linear budget") {
  for (double delta : {1e-2, 1e-4}) {
    const auto b = error_budget(2, 2, delta, 7);
    const auto lb = log_budget(2, 2, delta, 7);
    CHECK(lb.log2_eps_prep == doctest::Approx(std::log2(b.eps_prep)));
    CHECK(lb.log2_eps_gate == doctest::Approx(std::log2(b.eps_gate)));
    CHECK(lb.log2_eps_final == doctest::Approx(std::log2(b.eps_final)));
  }
}

TEST_CASE("logical circuit compilation size") {
  for (int ell : {1, 2, 4, 6}) {
    const Circuit logical{0, 2 * ell, {Gate::qubit("H", {0}), Gate::qubit("CNOT", {0, 2 * ell - 1}),
                                        Gate::qubit("T", {1})}};
    const Circuit w = build_wu(logical, 2, ell);
    CHECK(w.gates.size() == 15);
    CHECK(static_cast<double>(w.size()) <= 340.0 * 3 * ell * ell);
    const auto p = circuit_params(w);
    CHECK(p.xi_bar_max <= 72.0 * 3 * std::exp2(ell));
  }
  CHECK_THROWS_AS(build_wu(Circuit{0, 14, {}}, 2, 7), ResourceError);
}

TEST_CASE("analyzer energy on the total circuit stays under the closed-form bound for small Delta") {
  for (long s : {1L, 4L, 100L})
    for (int ell : {1, 2, 4, 6})
      for (double delta : {0.05, 0.03, 0.01, 1e-3, 1e-5}) {
        if (delta > std::ldexp(1.0, -(ell + 1))) continue;
        CAPTURE(s);
        CAPTURE(ell);
        CAPTURE(delta);
        CHECK(analyzer_wtot_log2_energy(s, 2, ell, delta) <= implementation_energy_bound(double(s), ell, delta).log2_energy);
      }
}

TEST_CASE("analyzer energy exceeds the closed-form bound near Delta = 1/5") {
  const double analyzer = analyzer_wtot_log2_energy(1, 1, 1, 0.2);
  const double closed = implementation_energy_bound(1.0, 1, 0.2).log2_energy;
  CHECK(analyzer > closed);
  CHECK(analyzer - closed < 2.0);
}

TEST_CASE("prep distance shrinks with Delta") {
  const auto coarse = simulate_prep(3, 0.04);
  const auto fine = simulate_prep(3, 0.01);
  CHECK(fine.trace_distance < coarse.trace_distance);
  CHECK(fine.trace_distance <= 25.0 * (std::sqrt(0.01) + 4e-4));
  CHECK(coarse.qubit_leakage <= coarse.trace_distance);
}
