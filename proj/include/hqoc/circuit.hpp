#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hqoc {

using cplx = std::complex<double>;

enum class GateKind { DispQ, DispP, CtrlDispQ, CtrlDispP, Squeeze, QubitGate, Blackbox };

// One elementary operation. Conventions:
//   DispQ      e^{itQ} on `mode` (momentum kick by t)
//   DispP      e^{-itP} on `mode` (position shift by t)
//   CtrlDisp*  same, applied only on the branch where qubits[0] is 1
//   Squeeze    M_alpha, psi(x) -> alpha^{-1/2} psi(x/alpha)
//   QubitGate  named gate or explicit row-major 2x2 / 4x4 matrix on `qubits`
//   Blackbox   opaque subcircuit with declared (g_bar, xi_bar, eta, size) on `modes`
struct Gate {
  GateKind kind = GateKind::QubitGate;
  int mode = -1;
  std::vector<int> qubits;
  double t = 0.0;
  double alpha = 1.0;
  std::string name;
  std::vector<cplx> matrix;

  std::string label;
  std::vector<int> modes;
  double g_bar = 1.0;
  double xi_bar = 0.0;
  double eta = 1.0;
  long size = 1;

  static Gate disp_q(int mode, double t);
  static Gate disp_p(int mode, double t);
  static Gate ctrl_disp_q(int mode, int control, double t);
  static Gate ctrl_disp_p(int mode, int control, double t);
  static Gate squeeze(int mode, double alpha);
  static Gate qubit(std::string name, std::vector<int> qubits);
  static Gate qubit_matrix(std::vector<cplx> matrix, std::vector<int> qubits);
  static Gate blackbox(std::string label, std::vector<int> modes, std::vector<int> qubits,
                       double g_bar, double xi_bar, double eta, long size);

  bool is_oscillator() const;  // elementary gate acting on a single mode
  bool is_displacement() const;
  bool is_controlled() const;
  bool acts_on_mode(int m) const;

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int m = 0;
  int r = 0;
  std::vector<Gate> gates;  // gates[0] is applied first

  std::size_t size() const;  // blackboxes count at their declared size
  bool operator==(const Circuit&) const = default;
};

struct GateParams {
  double eta = 1.0;
  double xi = 0.0;
};

struct StrengthBounds {
  double alpha = 2.0;
  double zeta = 1.0;
};

std::string kind_name(GateKind k);
GateKind kind_from_name(std::string_view s);

// Resolved unitary of a qubit gate, row-major, dimension 2 or 4. For two-qubit
// gates the basis index is 2*b(qubits[0]) + b(qubits[1]).
std::vector<cplx> qubit_unitary(const Gate& g);
bool known_qubit_gate(std::string_view name);

void validate_gate(const Gate& g, int m, int r, std::size_t position);
void validate_circuit(const Circuit& c);

Circuit parse_circuit(std::string_view text);
Circuit circuit_from_json(const nlohmann::json& j);
nlohmann::json circuit_to_json(const Circuit& c);
nlohmann::json gate_to_json(const Gate& g);
std::string serialize_circuit(const Circuit& c);

GateParams gate_params(const Gate& g);
Circuit restrict_to_mode(const Circuit& c, int alpha);
Gate adjoint_gate(const Gate& g);
Circuit adjoint_circuit(const Circuit& c);
bool within_strength(const Gate& g, const StrengthBounds& b);

}  // namespace hqoc
