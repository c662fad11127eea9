#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "qperc/errors.hpp"

namespace qperc {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr double two_pi = 6.283185307179586476925286766559;

// State vector over a tensor product of finite-dimensional subsystems.
struct QuantumState {
    Vec amplitudes;
    std::vector<int> dims;

    QuantumState(Vec a, std::vector<int> d);
    double norm() const { return amplitudes.norm(); }
};

// Dense square matrix over a tensor product of subsystems.
struct Operator {
    Mat entries;
    std::vector<int> dims;

    Operator(Mat m, std::vector<int> d);
    Eigen::Index dim() const { return entries.rows(); }
    bool is_hermitian(double tol = 1e-12) const;
    bool is_unitary(double tol = 1e-8) const;
};

// Hermitian, unit-trace, positive-semidefinite matrix.
struct DensityMatrix {
    Mat entries;
    std::vector<int> dims;

    DensityMatrix(Mat m, std::vector<int> d);
    double min_eigenvalue() const;
};

// Kronecker product; dims are concatenated.
Operator kron(const Operator& a, const Operator& b);

struct EigResult {
    Eigen::VectorXd values;  // ascending
    Mat vectors;             // columns, phase-fixed (largest component real positive)
};

// Eigendecomposition of a Hermitian operator. Rejects non-Hermitian input.
EigResult hermitian_eig(const Operator& m);

using Generator = std::function<Mat(double)>;

// One fixed-step RK4 step of i d|psi>/dt = H(t)|psi| (hbar = 1).
// Throws NumericalError if the generator or the result is non-finite.
QuantumState evolve_step(const Generator& h_of_t, const QuantumState& state,
                         double t, double dt);

// Step count for integrating over `duration` with peak generator rate
// `max_rate` (rad/s): max_rate * dt <= factor, clamped to [min_steps, cap].
int rk4_step_count(double duration, double max_rate, double factor = 0.05,
                   int cap = 20000, int min_steps = 64);

// RK4 integration of i d|psi>/dt = H(t)|psi> from t0 to t0 + duration
// using n_steps fixed steps.
QuantumState evolve(const Generator& h_of_t, const QuantumState& state,
                    double t0, double duration, int n_steps);

// Trace out all subsystems not listed in `keep` (indices into dims).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose one subsystem of a two-subsystem density matrix. The result is
// Hermitian and trace-one but in general not positive.
Operator partial_transpose(const DensityMatrix& rho, int subsystem);

} // namespace qperc
