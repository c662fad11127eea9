#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qperc/numerics.hpp"

namespace qperc {

// Two fixed-frequency transmons coupled through a tunable coupler.
// All rates are angular frequencies in rad/s; anharmonicities are negative.
struct DeviceParams {
  double omega1 = two_pi * 6.189e9;
  double omega2 = two_pi * 5.089e9;
  double omega_c = two_pi * 7.8e9;
  double alpha1 = -two_pi * 286e6;
  double alpha2 = -two_pi * 310e6;
  double alpha_c = -two_pi * 300e6;  // assumed value, not a measured input
  double g1c = two_pi * 142e6;
  double g2c = two_pi * 116e6;
  int truncation = 4;

  void validate() const;
};

enum class ZZMethod { numeric, perturbative };

// ZZ interaction strength J and the perceptron weight w = -J.
struct ZZResult {
  double j = 0.0;
  double weight = 0.0;
  ZZMethod method = ZZMethod::numeric;
};

// Full circuit Hamiltonian on the (truncation)^3 space, mode order
// (qubit1, qubit2, coupler), counter-rotating coupling terms included.
Operator build_hamiltonian(const DeviceParams& p);

// J = E11 + E00 - E10 - E01 from exact diagonalization. Dressed levels are
// matched to the bare labels |x1 x2 0> greedily by descending overlap with a
// hard 0.5 floor; ambiguous assignments raise instead of mislabeling.
ZZResult zz_numeric(const DeviceParams& p);

// Fourth-order closed form in the detunings Delta_i = omega_c - omega_i.
// The overall sign is anchored to the small-coupling limit of zz_numeric.
// Any near-zero denominator factor raises a NumericalError naming it.
ZZResult zz_perturbative(const DeviceParams& p);

struct SweepRow {
  double omega_c = 0.0;
  std::optional<double> j_numeric;
  std::optional<double> j_perturbative;
  std::string numeric_error;       // set when j_numeric is empty
  std::string perturbative_error;  // set when j_perturbative is empty
};

// One row per grid point; per-point failures are recorded, not thrown.
std::vector<SweepRow> coupler_sweep(const DeviceParams& p,
                                    const std::vector<double>& omega_c_grid);

}  // namespace qperc
