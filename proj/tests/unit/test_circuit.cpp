#include <doctest.h>

#include <random>

#include "acceptance_suite.hpp"
#include "hqoc/circuit.hpp"
#include "hqoc/error.hpp"
#include "hqoc/moments.hpp"

using namespace hqoc;

TEST_CASE("single squeeze round trips through the document format") {
  const std::string doc = R"({"m":1,"r":1,"gates":[{"kind":"squeeze","mode":0,"alpha":2.0}]})";
  const Circuit c = parse_circuit(doc);
  CHECK(c == Circuit{1, 1, {Gate::squeeze(0, 2.0)}});
  CHECK(parse_circuit(serialize_circuit(c)) == c);
  CHECK(nlohmann::json::parse(serialize_circuit(c)) == nlohmann::json::parse(doc));
}

TEST_CASE("validation errors carry the gate position") {
  auto message = [](const std::string& doc) {
    try {
      parse_circuit(doc);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"m":2,"r":1,"gates":[{"kind":"squeeze","mode":3,"alpha":2.0}]})") ==
        "mode index out of range at gate 1");
  CHECK(message(R"({"m":1,"r":1,"gates":[{"kind":"disp_q","mode":0,"t":1},{"kind":"squeeze","mode":0,"alpha":-1}]})")
            .find("at gate 2") != std::string::npos);
  CHECK(message(R"({"m":1,"r":1,"gates":[{"kind":"ctrl_disp_p","mode":0,"qubit":4,"t":1}]})").find("at gate 1") !=
        std::string::npos);
  CHECK(message(R"({"m":0,"r":1,"gates":[{"kind":"qubit_gate","matrix":[[1,0],[1,0],[0,0],[1,0]],"qubits":[0]}]})")
            .find("at gate 1") != std::string::npos);
  CHECK_FALSE(message(R"({"m":1,"gates":[]})").empty());
}

TEST_CASE("blackbox parameters pass through parsing") {
  const Circuit c = parse_circuit(
      R"({"m":2,"r":1,"gates":[{"kind":"blackbox","g_bar":4.0,"xi_bar":36.0,"eta":1.0,"size":36,"qubits":[0]}]})");
  REQUIRE(c.gates.size() == 1);
  const Gate& g = c.gates[0];
  CHECK(g.kind == GateKind::Blackbox);
  CHECK(g.g_bar == 4.0);
  CHECK(g.xi_bar == 36.0);
  CHECK(g.eta == 1.0);
  CHECK(g.modes == std::vector<int>{0, 1});
  CHECK(c.size() == 36);
  CHECK(parse_circuit(serialize_circuit(c)) == c);
}

TEST_CASE("gate parameters follow the definitional table") {
  CHECK(gate_params(Gate::squeeze(0, 2.0)).eta == 2.0);
  CHECK(gate_params(Gate::squeeze(0, 2.0)).xi == 0.0);
  CHECK(gate_params(Gate::disp_q(0, 0.5)).eta == 1.0);
  CHECK(gate_params(Gate::disp_q(0, 0.5)).xi == 0.5);
  CHECK(gate_params(Gate::ctrl_disp_p(0, 0, -1.5)).xi == 1.5);
  CHECK(gate_params(Gate::qubit("H", {0})).eta == 1.0);
  CHECK(gate_params(Gate::qubit("H", {0})).xi == 0.0);
}

TEST_CASE("restriction keeps the gates on one mode") {
  const Circuit c{2, 1, {Gate::squeeze(0, 2.0), Gate::disp_q(1, 1.0), Gate::ctrl_disp_p(0, 0, 1.0)}};
  const Circuit r0 = restrict_to_mode(c, 0);
  CHECK(r0 == Circuit{1, 1, {Gate::squeeze(0, 2.0), Gate::ctrl_disp_p(0, 0, 1.0)}});
  CHECK(restrict_to_mode(Circuit{1, 2, {Gate::qubit("CZ", {0, 1})}}, 0).gates.empty());
  CHECK(restrict_to_mode(c, 0).gates.size() + restrict_to_mode(c, 1).gates.size() == 3);
  CHECK_THROWS_AS(restrict_to_mode(c, 2), ValidationError);
}

TEST_CASE("adjoint reverses and inverts") {
  const Circuit c{1, 0, {Gate::disp_q(0, 1.0), Gate::squeeze(0, 2.0)}};
  CHECK(adjoint_circuit(c) == Circuit{1, 0, {Gate::squeeze(0, 0.5), Gate::disp_q(0, -1.0)}});

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Circuit r = acceptance::random_circuit(rng, 12, 2.0);
    r.gates.push_back(Gate::qubit("T", {0}));
    r.gates.push_back(Gate::qubit("S", {0}));
    const Circuit back = adjoint_circuit(adjoint_circuit(r));
    REQUIRE(back.gates.size() == r.gates.size());
    for (std::size_t k = 0; k < r.gates.size(); ++k) {
      CHECK(back.gates[k].kind == r.gates[k].kind);
      CHECK(back.gates[k].name == r.gates[k].name);
      CHECK(back.gates[k].t == r.gates[k].t);
      CHECK(back.gates[k].alpha == doctest::Approx(r.gates[k].alpha).epsilon(1e-15));
    }
    const auto a = circuit_params(r);
    const auto b = circuit_params(adjoint_circuit(r));
    CHECK(a.xi_bar_max == doctest::Approx(b.xi_bar_max).epsilon(1e-12));
    CHECK(a.log_g_bar_max == doctest::Approx(b.log_g_bar_max).epsilon(1e-12));
  }
}

TEST_CASE("blackbox adjoint keeps declared parameters") {
  const Gate g = Gate::blackbox("bt", {0}, {0}, 4.0, 36.0, 1.0, 36);
  const Gate a = adjoint_gate(g);
  CHECK(a.g_bar == g.g_bar);
  CHECK(a.xi_bar == g.xi_bar);
  CHECK(a.label != g.label);
  CHECK(adjoint_gate(a) == g);
}

TEST_CASE("explicit matrices are checked for unitarity") {
  const double h = 1.0 / std::sqrt(2.0);
  CHECK_NOTHROW(validate_circuit(Circuit{0, 1, {Gate::qubit_matrix({h, h, h, -h}, {0})}}));
  CHECK_THROWS_AS(validate_circuit(Circuit{0, 1, {Gate::qubit_matrix({1, 0, 0, 1.001}, {0})}}), ValidationError);
  const auto u = qubit_unitary(Gate::qubit("CNOT", {0, 1}));
  CHECK(u.size() == 16);
}
