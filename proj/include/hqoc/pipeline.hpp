#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hqoc/circuit.hpp"
#include "hqoc/gkp.hpp"
#include "hqoc/moments.hpp"
#include "hqoc/simulator.hpp"

namespace hqoc {

// U_{2^n,Delta} on one mode and one qubit; size 5n + ceil(log2 1/Delta) + 3.
Circuit build_prep_circuit(int n, double delta);
long prep_circuit_size(int n, double delta);

struct CodePrepInfo {
  int n = 0;            // peak exponent fed to the prep circuit
  int extra_reps = 0;   // ceil(log2 sqrt(2 pi d))
  double z_d = 0.0;     // squeeze exponent per extra rep
  long d = 2;
  double eps = 0.25;
};

CodePrepInfo code_prep_info(int ell, double delta);
CodePrepInfo aux_prep_info(int ell, double delta);
Circuit build_code_prep(int ell, double delta);
Circuit build_aux_prep(int ell, double delta);
GkpParams code_params(int ell, double delta);

// Modes 0..m-1 carry the code states, mode m the auxiliary state; one qubit.
Circuit build_wprep(int m, int ell, double delta);

// Bit-transfer blackbox declared with L_r = 36 ell gates.
Gate bit_transfer_blackbox(int ell, int mode, int aux_mode, int qubit);
// Logical circuit on n' = m ell qubits compiled to dressed bit-transfer pairs (analysis only).
Circuit build_wu(const Circuit& logical, int m, int ell);
CircuitMomentParams wu_params(long s, int m, int ell);
// W_prep followed by W_U collapsed into one blackbox carrying its dressed parameters.
Circuit build_wtot_annotated(long s, int m, int ell, double delta);

struct EncodingLayout {
  int n = 0;
  int m = 0;
  int K = 0;
  int n_prime = 0;
  int ell = 0;

  // 0-based logical qubit -> (mode, iota bit index j of x_j)
  std::pair<int, int> locate(int qubit) const;
};

EncodingLayout make_layout(int n, int m);
long discretize(double x, int ell);
std::vector<int> iota_inverse(long value, int ell);  // (x_{ell-1}, ..., x_0)
long iota(const std::vector<int>& bits);
std::vector<int> post_process(const std::vector<double>& y, const EncodingLayout& layout);
// Code index per mode for a logical basis bitstring of length n.
std::vector<long> encode_basis(const std::vector<int>& bits, const EncodingLayout& layout);

struct ErrorBudget {
  double eps_prep = 0.0;
  double eps_gate = 0.0;
  double eps_final = 0.0;
  double l1_bound = 0.0;  // min(2, eps_final)
  long T_prep = 0;
  long T_logical = 0;
  long T_total = 0;
  double T_prep_bound = 0.0;     // 42 m ln(1/Delta)
  double T_logical_bound = 0.0;  // 340 s ell^2
};

ErrorBudget error_budget(int m, int ell, double delta, long s);

// Log2-domain versions of the budget and composite bounds.
struct LogBudget {
  double log2_eps_prep = 0.0;
  double log2_eps_gate = 0.0;  // -inf when s = 0
  double log2_eps_final = 0.0;
  double log2_wu_xi_bar = 0.0;     // log2(72 s 2^ell)
  double log2_wu_g_bar = 0.0;      // log2(256 2^{148 ell})
  double log2_wtot_xi_bar = 0.0;   // log2(72 s 2^ell + 10 log2 1/Delta)
  double log2_wtot_g_bar = 0.0;    // log2(1024 2^{148 ell} / Delta^3)
  double log2_wtot_energy = 0.0;   // log2(s^3 2^{891 ell + 62} / Delta^21)
  double log2_wprep_energy = 0.0;  // log2(4096 / Delta^18 (2 + 1000 log2^3 1/Delta))
  double log2_size_prep_bound = 0.0;
  double log2_size_logical_bound = 0.0;
};

LogBudget log_budget(int m, int ell, double delta, long s);

nlohmann::json budget_json(const ErrorBudget& b);

struct PrepSimulation {
  HybridState state;
  double trace_distance = 0.0;
  double qubit_leakage = 0.0;
};

// Simulates U_{2^n,Delta} from vacuum and compares against |Sha_{2^n,Delta}> (x) |0>.
PrepSimulation simulate_prep(int n, double delta, const AutoGridOptions& opt = {});
// Simulates a code (or aux) preparation and compares against its truncated target.
PrepSimulation simulate_code_prep(int ell, double delta, bool aux, const AutoGridOptions& opt = {});

struct WprepVerification {
  std::vector<double> per_mode_distance;  // m code modes then aux
  double total_distance = 0.0;
  double bound = 0.0;
};

WprepVerification verify_wprep_factorized(int m, int ell, double delta, const AutoGridOptions& opt = {});

struct SamplingResult {
  EncodingLayout layout;
  std::vector<HomodyneShot> shots;
  std::vector<std::vector<int>> bits;
  ErrorBudget budget;
  CircuitMomentParams params;
  EnergyBoundDetail energy;
  double qubit_leakage = 0.0;
};

// Logical circuits are limited to X gates on |0...0>; each X is realised as a code shift.
SamplingResult run_sampling_scheme(const Circuit& logical, int n, int m, double delta, std::uint64_t shots,
                                   std::uint64_t seed, const AutoGridOptions& opt = {});

}  // namespace hqoc
