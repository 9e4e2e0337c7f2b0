#include "hqoc/circuit.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "hqoc/error.hpp"

namespace hqoc {

using nlohmann::json;

namespace {

std::string at_gate(const std::string& msg, std::size_t position) {
  return msg + " at gate " + std::to_string(position);
}

std::vector<cplx> named_matrix(std::string_view name) {
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  const cplx w = std::polar(1.0, std::numbers::pi / 4.0);
  if (name == "H") return {s, s, s, -s};
  if (name == "X") return {0, 1, 1, 0};
  if (name == "Z") return {1, 0, 0, -1};
  if (name == "S") return {1, 0, 0, i};
  if (name == "Sdg") return {1, 0, 0, -i};
  if (name == "T") return {1, 0, 0, w};
  if (name == "Tdg") return {1, 0, 0, std::conj(w)};
  if (name == "CZ") return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
  if (name == "CNOT") return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
  return {};
}

std::string adjoint_name(const std::string& name) {
  if (name == "S") return "Sdg";
  if (name == "Sdg") return "S";
  if (name == "T") return "Tdg";
  if (name == "Tdg") return "T";
  return name;
}

bool is_unitary(const std::vector<cplx>& u, std::size_t dim, double tol) {
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      cplx acc = 0;
      for (std::size_t k = 0; k < dim; ++k) acc += std::conj(u[k * dim + a]) * u[k * dim + b];
      if (std::abs(acc - (a == b ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

template <class T>
T require(const json& j, const char* key, std::size_t position) {
  if (!j.contains(key)) throw ValidationError(at_gate(std::string("missing field '") + key + "'", position));
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(at_gate(std::string("bad type for field '") + key + "'", position));
  }
}

}  // namespace

Gate Gate::disp_q(int mode, double t) {
  Gate g;
  g.kind = GateKind::DispQ;
  g.mode = mode;
  g.t = t;
  return g;
}

Gate Gate::disp_p(int mode, double t) {
  Gate g = disp_q(mode, t);
  g.kind = GateKind::DispP;
  return g;
}

Gate Gate::ctrl_disp_q(int mode, int control, double t) {
  Gate g = disp_q(mode, t);
  g.kind = GateKind::CtrlDispQ;
  g.qubits = {control};
  return g;
}

Gate Gate::ctrl_disp_p(int mode, int control, double t) {
  Gate g = disp_q(mode, t);
  g.kind = GateKind::CtrlDispP;
  g.qubits = {control};
  return g;
}

Gate Gate::squeeze(int mode, double alpha) {
  Gate g;
  g.kind = GateKind::Squeeze;
  g.mode = mode;
  g.alpha = alpha;
  return g;
}

Gate Gate::qubit(std::string name, std::vector<int> qubits) {
  Gate g;
  g.kind = GateKind::QubitGate;
  g.name = std::move(name);
  g.qubits = std::move(qubits);
  return g;
}

Gate Gate::qubit_matrix(std::vector<cplx> matrix, std::vector<int> qubits) {
  Gate g;
  g.kind = GateKind::QubitGate;
  g.matrix = std::move(matrix);
  g.qubits = std::move(qubits);
  return g;
}

Gate Gate::blackbox(std::string label, std::vector<int> modes, std::vector<int> qubits, double g_bar,
                    double xi_bar, double eta, long size) {
  Gate g;
  g.kind = GateKind::Blackbox;
  g.label = std::move(label);
  g.modes = std::move(modes);
  g.qubits = std::move(qubits);
  g.g_bar = g_bar;
  g.xi_bar = xi_bar;
  g.eta = eta;
  g.size = size;
  return g;
}

bool Gate::is_oscillator() const {
  return kind != GateKind::QubitGate && kind != GateKind::Blackbox;
}

bool Gate::is_displacement() const {
  return kind == GateKind::DispQ || kind == GateKind::DispP || kind == GateKind::CtrlDispQ ||
         kind == GateKind::CtrlDispP;
}

bool Gate::is_controlled() const {
  return kind == GateKind::CtrlDispQ || kind == GateKind::CtrlDispP;
}

bool Gate::acts_on_mode(int m) const {
  if (kind == GateKind::Blackbox) {
    for (int a : modes)
      if (a == m) return true;
    return false;
  }
  return is_oscillator() && mode == m;
}

std::size_t Circuit::size() const {
  std::size_t n = 0;
  for (const auto& g : gates) n += g.kind == GateKind::Blackbox ? static_cast<std::size_t>(g.size) : 1;
  return n;
}

std::string kind_name(GateKind k) {
  switch (k) {
    case GateKind::DispQ: return "disp_q";
    case GateKind::DispP: return "disp_p";
    case GateKind::CtrlDispQ: return "ctrl_disp_q";
    case GateKind::CtrlDispP: return "ctrl_disp_p";
    case GateKind::Squeeze: return "squeeze";
    case GateKind::QubitGate: return "qubit_gate";
    case GateKind::Blackbox: return "blackbox";
  }
  return "?";
}

GateKind kind_from_name(std::string_view s) {
  for (auto k : {GateKind::DispQ, GateKind::DispP, GateKind::CtrlDispQ, GateKind::CtrlDispP,
                 GateKind::Squeeze, GateKind::QubitGate, GateKind::Blackbox})
    if (kind_name(k) == s) return k;
  throw ValidationError("unknown gate kind '" + std::string(s) + "'");
}

bool known_qubit_gate(std::string_view name) { return !named_matrix(name).empty(); }

std::vector<cplx> qubit_unitary(const Gate& g) {
  if (g.kind != GateKind::QubitGate) throw ValidationError("not a qubit gate");
  if (!g.name.empty()) return named_matrix(g.name);
  return g.matrix;
}

void validate_gate(const Gate& g, int m, int r, std::size_t position) {
  auto check_mode = [&](int a) {
    if (a < 0 || a >= m) throw ValidationError(at_gate("mode index out of range", position));
  };
  auto check_qubit = [&](int q) {
    if (q < 0 || q >= r) throw ValidationError(at_gate("qubit index out of range", position));
  };
  switch (g.kind) {
    case GateKind::DispQ:
    case GateKind::DispP:
      check_mode(g.mode);
      if (!std::isfinite(g.t)) throw ValidationError(at_gate("non-finite displacement", position));
      break;
    case GateKind::CtrlDispQ:
    case GateKind::CtrlDispP:
      check_mode(g.mode);
      if (g.qubits.size() != 1) throw ValidationError(at_gate("controlled gate needs one control qubit", position));
      check_qubit(g.qubits[0]);
      if (!std::isfinite(g.t)) throw ValidationError(at_gate("non-finite displacement", position));
      break;
    case GateKind::Squeeze:
      check_mode(g.mode);
      if (!(g.alpha > 0.0) || !std::isfinite(g.alpha))
        throw ValidationError(at_gate("non-positive alpha", position));
      break;
    case GateKind::QubitGate: {
      if (g.qubits.empty() || g.qubits.size() > 2)
        throw ValidationError(at_gate("qubit gate must act on one or two qubits", position));
      for (int q : g.qubits) check_qubit(q);
      if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1])
        throw ValidationError(at_gate("repeated qubit index", position));
      const std::size_t dim = std::size_t{1} << g.qubits.size();
      if (!g.name.empty()) {
        auto u = named_matrix(g.name);
        if (u.empty()) throw ValidationError(at_gate("unknown qubit gate '" + g.name + "'", position));
        if (u.size() != dim * dim) throw ValidationError(at_gate("qubit count does not match gate '" + g.name + "'", position));
      } else {
        if (g.matrix.size() != dim * dim) throw ValidationError(at_gate("matrix dimension mismatch", position));
        if (!is_unitary(g.matrix, dim, 1e-12)) throw ValidationError(at_gate("non-unitary matrix", position));
      }
      break;
    }
    case GateKind::Blackbox:
      for (int a : g.modes) check_mode(a);
      for (int q : g.qubits) check_qubit(q);
      if (!(g.g_bar >= 1.0)) throw ValidationError(at_gate("blackbox g_bar must be >= 1", position));
      if (!(g.xi_bar >= 0.0)) throw ValidationError(at_gate("blackbox xi_bar must be >= 0", position));
      if (!(g.eta > 0.0)) throw ValidationError(at_gate("blackbox eta must be > 0", position));
      if (g.size < 0) throw ValidationError(at_gate("blackbox size must be >= 0", position));
      break;
  }
}

void validate_circuit(const Circuit& c) {
  if (c.m < 0 || c.r < 0) throw ValidationError("negative mode or qubit count");
  for (std::size_t i = 0; i < c.gates.size(); ++i) validate_gate(c.gates[i], c.m, c.r, i + 1);
}

json gate_to_json(const Gate& g) {
  json j;
  j["kind"] = kind_name(g.kind);
  switch (g.kind) {
    case GateKind::DispQ:
    case GateKind::DispP:
      j["mode"] = g.mode;
      j["t"] = g.t;
      break;
    case GateKind::CtrlDispQ:
    case GateKind::CtrlDispP:
      j["mode"] = g.mode;
      j["qubit"] = g.qubits.at(0);
      j["t"] = g.t;
      break;
    case GateKind::Squeeze:
      j["mode"] = g.mode;
      j["alpha"] = g.alpha;
      break;
    case GateKind::QubitGate:
      if (!g.name.empty()) {
        j["name"] = g.name;
      } else {
        json mat = json::array();
        for (const auto& z : g.matrix) mat.push_back({z.real(), z.imag()});
        j["matrix"] = mat;
      }
      j["qubits"] = g.qubits;
      break;
    case GateKind::Blackbox:
      if (!g.label.empty()) j["label"] = g.label;
      j["modes"] = g.modes;
      j["qubits"] = g.qubits;
      j["g_bar"] = g.g_bar;
      j["xi_bar"] = g.xi_bar;
      j["eta"] = g.eta;
      j["size"] = g.size;
      break;
  }
  return j;
}

json circuit_to_json(const Circuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates) gates.push_back(gate_to_json(g));
  return json{{"m", c.m}, {"r", c.r}, {"gates", gates}};
}

std::string serialize_circuit(const Circuit& c) { return circuit_to_json(c).dump(); }

Circuit circuit_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("circuit document must be a JSON object");
  Circuit c;
  if (!j.contains("m") || !j["m"].is_number_integer()) throw ValidationError("missing integer field 'm'");
  if (!j.contains("r") || !j["r"].is_number_integer()) throw ValidationError("missing integer field 'r'");
  if (!j.contains("gates") || !j["gates"].is_array()) throw ValidationError("missing array field 'gates'");
  c.m = j["m"].get<int>();
  c.r = j["r"].get<int>();
  std::size_t pos = 0;
  for (const auto& gj : j["gates"]) {
    ++pos;
    if (!gj.is_object()) throw ValidationError(at_gate("gate must be an object", pos));
    Gate g;
    const auto kind = require<std::string>(gj, "kind", pos);
    try {
      g.kind = kind_from_name(kind);
    } catch (const ValidationError& e) {
      throw ValidationError(at_gate(e.what(), pos));
    }
    switch (g.kind) {
      case GateKind::DispQ:
      case GateKind::DispP:
        g.mode = require<int>(gj, "mode", pos);
        g.t = require<double>(gj, "t", pos);
        break;
      case GateKind::CtrlDispQ:
      case GateKind::CtrlDispP:
        g.mode = require<int>(gj, "mode", pos);
        g.t = require<double>(gj, "t", pos);
        if (gj.contains("qubit"))
          g.qubits = {require<int>(gj, "qubit", pos)};
        else
          g.qubits = require<std::vector<int>>(gj, "qubits", pos);
        break;
      case GateKind::Squeeze:
        g.mode = require<int>(gj, "mode", pos);
        g.alpha = require<double>(gj, "alpha", pos);
        break;
      case GateKind::QubitGate:
        if (gj.contains("qubit"))
          g.qubits = {require<int>(gj, "qubit", pos)};
        else
          g.qubits = require<std::vector<int>>(gj, "qubits", pos);
        if (gj.contains("name")) {
          g.name = require<std::string>(gj, "name", pos);
        } else if (gj.contains("matrix")) {
          for (const auto& e : gj["matrix"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
              throw ValidationError(at_gate("matrix entries must be [re, im] pairs", pos));
            g.matrix.emplace_back(e[0].get<double>(), e[1].get<double>());
          }
        } else {
          throw ValidationError(at_gate("qubit gate needs 'name' or 'matrix'", pos));
        }
        break;
      case GateKind::Blackbox:
        if (gj.contains("label")) g.label = require<std::string>(gj, "label", pos);
        if (gj.contains("modes")) {
          g.modes = require<std::vector<int>>(gj, "modes", pos);
        } else {
          for (int a = 0; a < c.m; ++a) g.modes.push_back(a);
        }
        if (gj.contains("qubits")) g.qubits = require<std::vector<int>>(gj, "qubits", pos);
        g.g_bar = require<double>(gj, "g_bar", pos);
        g.xi_bar = require<double>(gj, "xi_bar", pos);
        g.eta = require<double>(gj, "eta", pos);
        if (gj.contains("size")) g.size = require<long>(gj, "size", pos);
        break;
    }
    validate_gate(g, c.m, c.r, pos);
    c.gates.push_back(std::move(g));
  }
  if (c.m < 0 || c.r < 0) throw ValidationError("negative mode or qubit count");
  return c;
}

Circuit parse_circuit(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed circuit document: ") + e.what());
  }
  return circuit_from_json(j);
}

GateParams gate_params(const Gate& g) {
  switch (g.kind) {
    case GateKind::Squeeze: return {g.alpha, 0.0};
    case GateKind::DispQ:
    case GateKind::DispP:
    case GateKind::CtrlDispQ:
    case GateKind::CtrlDispP: return {1.0, std::abs(g.t)};
    case GateKind::QubitGate: return {1.0, 0.0};
    case GateKind::Blackbox: return {g.eta, g.xi_bar};
  }
  return {};
}

Circuit restrict_to_mode(const Circuit& c, int alpha) {
  if (alpha < 0 || alpha >= c.m) throw ValidationError("mode index out of range");
  Circuit out{1, c.r, {}};
  for (const auto& g : c.gates) {
    if (!g.acts_on_mode(alpha)) continue;
    Gate h = g;
    if (h.kind == GateKind::Blackbox)
      h.modes = {0};
    else
      h.mode = 0;
    out.gates.push_back(std::move(h));
  }
  return out;
}

Gate adjoint_gate(const Gate& g) {
  Gate h = g;
  switch (g.kind) {
    case GateKind::DispQ:
    case GateKind::DispP:
    case GateKind::CtrlDispQ:
    case GateKind::CtrlDispP: h.t = -g.t; break;
    case GateKind::Squeeze: h.alpha = 1.0 / g.alpha; break;
    case GateKind::QubitGate:
      if (!g.name.empty()) {
        h.name = adjoint_name(g.name);
      } else {
        const std::size_t dim = g.matrix.size() == 4 ? 2 : 4;
        for (std::size_t a = 0; a < dim; ++a)
          for (std::size_t b = 0; b < dim; ++b) h.matrix[a * dim + b] = std::conj(g.matrix[b * dim + a]);
      }
      break;
    case GateKind::Blackbox:
      if (!g.label.empty()) {
        const std::string suffix = "^dag";
        if (g.label.size() > suffix.size() && g.label.ends_with(suffix))
          h.label = g.label.substr(0, g.label.size() - suffix.size());
        else
          h.label = g.label + suffix;
      }
      break;
  }
  return h;
}

Circuit adjoint_circuit(const Circuit& c) {
  Circuit out{c.m, c.r, {}};
  out.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(adjoint_gate(*it));
  return out;
}

bool within_strength(const Gate& g, const StrengthBounds& b) {
  if (g.is_displacement()) return std::abs(g.t) <= b.zeta;
  if (g.kind == GateKind::Squeeze) return g.alpha >= 1.0 / b.alpha && g.alpha <= b.alpha;
  return g.kind == GateKind::QubitGate;
}

}  // namespace hqoc
