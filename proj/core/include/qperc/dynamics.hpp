#pragma once

#include <vector>

#include "qperc/numerics.hpp"
#include "qperc/pulse.hpp"

namespace qperc {

// N-input perceptron drive configuration. The pulse frequencies are expressed
// relative to the bare output qubit, so pulse.omega_f equals the bias b and
// pulse.omega_f - pulse.omega_i is the sweep span. Input bitstrings are
// indexed MSB-first: input qubit 1 is the most significant bit of x.
struct PerceptronConfig {
  std::vector<double> weights;  // rad/s, one per input qubit
  double bias_b = 0.0;          // rad/s, final drive detuning for x = 0
  PulseParams pulse;

  int n_inputs() const { return static_cast<int>(weights.size()); }
  void validate() const;
};

// Rebases the pulse template onto the bias: keeps duration, amplitude,
// family and span, and anchors omega_f at bias_b.
PerceptronConfig make_config(std::vector<double> weights, double bias_b,
                             PulseParams pulse_template);

// Rotating frame of the driven output qubit for one input bitstring:
// Delta(t) = omega_p(t) - omega_q_eff with omega_q_eff = -sum_j w_j x_j
// relative to the bare qubit, so Delta(t_end) = sum_j w_j x_j + b.
struct EffectiveTwoLevelFrame {
  PulseSchedule schedule;
  double shift = 0.0;  // sum_j w_j x_j

  double detuning(double t) const { return schedule.omega(t) + shift; }
  double amplitude(double t) const { return schedule.amplitude(t); }
};

EffectiveTwoLevelFrame make_frame(const PerceptronConfig& cfg, unsigned x);

struct TwoLevelResult {
  QuantumState final_state;
  Operator u;         // 2x2 propagator over the full schedule
  double norm_drift;  // max deviation of u^dag u from identity
  int steps;
};

// Fixed-step RK4 on H(t) = -Delta(t)|1><1| + (Omega(t)/2)(|0><1| + |1><0|).
TwoLevelResult evolve_two_level(const EffectiveTwoLevelFrame& frame,
                                const QuantumState& initial);

// Assembles the block-diagonal gate: the 2x2 block for bitstring x sits at
// rows/cols [2x, 2x+1] of a 2^N * 2 unitary with dims (2^N, 2).
Operator perceptron_unitary(const PerceptronConfig& cfg);

struct LindbladOptions {
  std::vector<double> tphi;  // optional pure-dephasing times per qubit; empty = off
};

// Master-equation evolution for the N = 1 configuration on the 4-dim
// (input, output) space. t1_times holds one amplitude-damping time per qubit;
// +infinity disables the corresponding collapse operator.
DensityMatrix evolve_lindblad(const PerceptronConfig& cfg, const DensityMatrix& rho0,
                              const std::vector<double>& t1_times,
                              const LindbladOptions& opts = {});

// Same generator applied to an arbitrary 4x4 matrix (the master equation is
// linear); used to reconstruct the channel from matrix units.
Mat lindblad_propagate(const PerceptronConfig& cfg, const Mat& m0,
                       const std::vector<double>& t1_times,
                       const LindbladOptions& opts = {});

}  // namespace qperc
