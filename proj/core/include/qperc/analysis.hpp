#pragma once

#include <vector>

#include "qperc/dynamics.hpp"
#include "qperc/numerics.hpp"

namespace qperc {

struct ActivationCurve {
  std::vector<double> bias_points;  // rad/s, ascending
  std::vector<double> populations;  // excited-state population, in [0, 1]
  PulseParams pulse;
  unsigned input_string = 0;
};

// Sweeps the bias over the grid; one evolve_two_level run from |0> per point.
ActivationCurve activation_sweep(const PerceptronConfig& cfg,
                                 const std::vector<double>& bias_grid, unsigned x);

// Bias of the first grid crossing of `level`, by linear interpolation.
double level_crossing(const ActivationCurve& curve, double level);

// Bias interval between the 0.1 and 0.9 population crossings.
double rise_width(const ActivationCurve& curve);

// P1 = sech((wi+df)T/2) sech((wi-df)T/2) [sin^2(sqrt(w0^2+df^2) T/2)
//      + sinh^2(df T/2)], all arguments angular. Results are clamped to
// [0, 1] when within 1e-9 of the boundary; larger violations (including
// float overflow inside the formula) raise a NumericalError.
double analytic_transfer(double omega_i_det, double delta_f, double omega0, double T);

struct FitResult {
  double t_fit = 0.0;         // seconds
  double delta_offset = 0.0;  // rad/s
  double residual_rms = 0.0;
};

// Least-squares fit of the transfer model
//   m(b) = analytic_transfer(b - span + delta, b, omega0, t_fit)
// with free (t_fit, delta); span and omega0 come from the curve's pulse.
// Initialization is data-driven: delta0 is anchored at the half-population
// crossing (the model is identically ~0 at delta = 0), and t_fit comes from
// a scan fine enough to resolve the Rabi oscillation of the residual, which
// carves local minima every half period. Deterministic simplex restarts
// refine the seed, so repeated calls give identical results.
FitResult fit_activation(const ActivationCurve& curve);

// Linear map on two-qubit density matrices, stored as its 16x16 action in
// the column-stacking convention; subsystem order (input, output).
struct QuantumChannel {
  Mat super;

  QuantumChannel() : super(Mat::Zero(16, 16)) {}

  Mat apply(const Mat& rho) const;
  Mat choi() const;
  // trace- and hermiticity-preserving within 1e-8, Choi min eig >= -1e-7
  void validate() const;
};

QuantumChannel channel_from_unitary(const Operator& u);
QuantumChannel channel_from_lindblad(const PerceptronConfig& cfg,
                                     const std::vector<double>& t1_times,
                                     const LindbladOptions& opts = {});

// (1/2) sum_i Tr[(|i><i| x I) M(|i><i| x I/2)]: how well the map preserves
// the input register while acting arbitrarily on the output qubit.
double avg_controlled_fidelity(const QuantumChannel& m);

// Average Tr[M(rho)^2] over the 36 products of single-qubit Pauli eigenstates.
double avg_purity(const QuantumChannel& m);

// Sum of |negative eigenvalues| of the partial transpose; 0 for separable
// two-qubit states, 1/2 for maximally entangled ones.
double negativity(const DensityMatrix& rho, int subsystem = 0);

}  // namespace qperc
