#pragma once

#include <string>
#include <vector>

#include "qperc/numerics.hpp"

namespace qperc {

enum class GateKind { CNOT, RY, RZ, PHASE, GENERIC_1Q };

// RY follows the v_of_theta sign convention (+sin in the upper-right entry),
// i.e. the transpose of the more common rotation matrix.
struct Gate {
  GateKind kind = GateKind::GENERIC_1Q;
  std::vector<int> wires;  // control first for CNOT
  double angle = 0.0;      // rotation kinds only
  Mat matrix;              // GENERIC_1Q only, 2x2 unitary

  static Gate cnot(int control, int target);
  static Gate ry(int wire, double angle);
  static Gate rz(int wire, double angle);
  static Gate phase(int wire, double angle);
  static Gate generic(int wire, Mat m);

  void validate() const;
};

struct Circuit {
  int n_wires = 0;
  std::vector<Gate> gates;

  void validate() const;
  int cnot_count() const;
};

// V(theta) = [[cos t/2, sin t/2], [-sin t/2, cos t/2]], real orthogonal.
Operator v_of_theta(double theta);

// Gate-model synthesis of the block-diagonal perceptron: V(0..0) applied
// unconditioned, then one fully-controlled W(x) = V(theta_x) V(theta_0)^dag
// per remaining bitstring, 0-valued control bits conjugated by X. Controlled
// rotations expand to CNOT/RY sequences (2 CNOTs for one control, 4 for two;
// the often-quoted 6-CNOT doubly-controlled form is not needed, see README).
// thetas is indexed by bitstring, input qubit 1 = most significant bit;
// wires 0..N-1 are the inputs, wire N the output.
Circuit decompose_perceptron(const std::vector<double>& thetas, int n_inputs);

// Multiplies the gates in list order; wire 0 is the most significant bit.
Operator circuit_unitary(const Circuit& c);

// |Tr(u^dag v)| / dim: global-phase-insensitive, 1 iff u = e^{i phi} v.
double equivalence_fidelity(const Operator& u, const Operator& v);

// Compares the 2x2 diagonal blocks of two block-diagonal operators by their
// rotation magnitude theta = 2 atan2(|B01|, |B00|), ignoring all block-local
// phases: mean over blocks of |cos((theta_u - theta_v)/2)|.
double aligned_block_fidelity(const Operator& u, const Operator& v);

// (2^N - 1)(2^{N+1} - 2), the equivalent-circuit CNOT count.
long long gate_count(int n_inputs);

struct CostEstimate {
  int n_inputs = 0;
  long long n_cnots = 0;
  double total_time = 0.0;        // seconds
  double fidelity_estimate = 1.0;
};

CostEstimate estimate(int n_inputs, double f_2q = 0.997, double t_2q = 60e-9);

// Line format: "wires N" then one gate per line, zero-indexed wires:
//   CNOT c t | RY q theta | RZ q theta | PHASE q theta
//   U1Q q m00r m00i m01r m01i m10r m10i m11r m11i
// Reals printed with 17 significant digits; emit/parse round-trips exactly.
std::string emit_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace qperc
