#include "qperc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace qperc {

namespace {

long long dims_product(const std::vector<int>& dims) {
    long long p = 1;
    for (int d : dims) {
        if (d < 1) throw ValidationError("subsystem dimension must be >= 1");
        p *= d;
    }
    return p;
}

} // namespace

QuantumState::QuantumState(Vec a, std::vector<int> d)
    : amplitudes(std::move(a)), dims(std::move(d)) {
    if (dims_product(dims) != amplitudes.size())
        throw ValidationError("state length does not match product of dims");
}

Operator::Operator(Mat m, std::vector<int> d)
    : entries(std::move(m)), dims(std::move(d)) {
    if (entries.rows() != entries.cols())
        throw ValidationError("operator matrix must be square");
    if (dims_product(dims) != entries.rows())
        throw ValidationError("operator side does not match product of dims");
}

bool Operator::is_hermitian(double tol) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_unitary(double tol) const {
    Mat g = entries.adjoint() * entries;
    g -= Mat::Identity(entries.rows(), entries.cols());
    return g.cwiseAbs().maxCoeff() < tol;
}

DensityMatrix::DensityMatrix(Mat m, std::vector<int> d)
    : entries(std::move(m)), dims(std::move(d)) {
    if (entries.rows() != entries.cols())
        throw ValidationError("density matrix must be square");
    if (dims_product(dims) != entries.rows())
        throw ValidationError("density matrix side does not match product of dims");
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("density matrix not Hermitian within 1e-10");
    if (std::abs(entries.trace().real() - 1.0) > 1e-9 ||
        std::abs(entries.trace().imag()) > 1e-9)
        throw ValidationError("density matrix trace differs from 1 beyond 1e-9");
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Operator kron(const Operator& a, const Operator& b) {
    const Eigen::Index ra = a.entries.rows(), rb = b.entries.rows();
    Mat out(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ra; ++j)
            out.block(i * rb, j * rb, rb, rb) = a.entries(i, j) * b.entries;
    std::vector<int> dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    return Operator(std::move(out), std::move(dims));
}

EigResult hermitian_eig(const Operator& m) {
    if (!m.is_hermitian(1e-12 * std::max(1.0, m.entries.cwiseAbs().maxCoeff())))
        throw ValidationError("hermitian_eig: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(m.entries);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_eig: eigensolver failed to converge");
    EigResult r{es.eigenvalues(), es.eigenvectors()};
    // Deterministic phase: largest-magnitude component of each column made
    // real positive.
    for (Eigen::Index k = 0; k < r.vectors.cols(); ++k) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < r.vectors.rows(); ++i) {
            double a = std::abs(r.vectors(i, k));
            if (a > best) { best = a; imax = i; }
        }
        Complex z = r.vectors(imax, k);
        if (std::abs(z) > 0)
            r.vectors.col(k) *= std::conj(z) / std::abs(z);
    }
    return r;
}

namespace {

void check_finite(const Mat& h, double t) {
    if (!h.allFinite())
        throw NumericalError("generator is non-finite at t = " + std::to_string(t));
}

} // namespace

QuantumState evolve_step(const Generator& h_of_t, const QuantumState& state,
                         double t, double dt) {
    if (dt <= 0) throw ValidationError("evolve_step: dt must be positive");
    const Complex mi(0.0, -1.0);
    Mat h1 = h_of_t(t);
    check_finite(h1, t);
    Mat h2 = h_of_t(t + 0.5 * dt);
    check_finite(h2, t + 0.5 * dt);
    Mat h3 = h_of_t(t + dt);
    check_finite(h3, t + dt);

    const Vec& y = state.amplitudes;
    Vec k1 = mi * (h1 * y);
    Vec k2 = mi * (h2 * (y + (0.5 * dt) * k1));
    Vec k3 = mi * (h2 * (y + (0.5 * dt) * k2));
    Vec k4 = mi * (h3 * (y + dt * k3));
    Vec out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite())
        throw NumericalError("evolve_step: state became non-finite");
    return QuantumState(std::move(out), state.dims);
}

int rk4_step_count(double duration, double max_rate, double factor, int cap,
                   int min_steps) {
    if (duration <= 0) throw ValidationError("rk4_step_count: duration must be positive");
    if (max_rate < 0) throw ValidationError("rk4_step_count: max_rate must be >= 0");
    double need = std::ceil(duration * max_rate / factor);
    if (need < static_cast<double>(min_steps)) return min_steps;
    if (need > static_cast<double>(cap)) return cap;
    return static_cast<int>(need);
}

QuantumState evolve(const Generator& h_of_t, const QuantumState& state,
                    double t0, double duration, int n_steps) {
    if (n_steps < 1) throw ValidationError("evolve: need at least one step");
    const double dt = duration / n_steps;
    QuantumState cur = state;
    for (int i = 0; i < n_steps; ++i)
        cur = evolve_step(h_of_t, cur, t0 + i * dt, dt);
    return cur;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = static_cast<int>(rho.dims.size());
    for (int k : keep)
        if (k < 0 || k >= n)
            throw ValidationError("partial_trace: subsystem index out of range");
    std::vector<int> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());
    if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
        throw ValidationError("partial_trace: duplicate subsystem index");

    std::vector<int> traced;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i))
            traced.push_back(i);

    // Strides of each subsystem index in the flattened row/column labels.
    std::vector<long long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * rho.dims[i + 1];

    long long dk = 1, dt_ = 1;
    for (int k : keep_sorted) dk *= rho.dims[k];
    for (int k : traced) dt_ *= rho.dims[k];

    auto unpack = [&](long long idx, const std::vector<int>& subs) {
        // Maps a compact index over `subs` to a full-space offset.
        long long off = 0;
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            int s = subs[static_cast<size_t>(i)];
            off += (idx % rho.dims[s]) * stride[s];
            idx /= rho.dims[s];
        }
        return off;
    };

    Mat out = Mat::Zero(dk, dk);
    for (long long i = 0; i < dk; ++i) {
        long long oi = unpack(i, keep_sorted);
        for (long long j = 0; j < dk; ++j) {
            long long oj = unpack(j, keep_sorted);
            Complex s = 0;
            for (long long m = 0; m < dt_; ++m) {
                long long om = unpack(m, traced);
                s += rho.entries(oi + om, oj + om);
            }
            out(i, j) = s;
        }
    }
    std::vector<int> odims;
    for (int k : keep_sorted) odims.push_back(rho.dims[k]);
    return DensityMatrix(std::move(out), std::move(odims));
}

Operator partial_transpose(const DensityMatrix& rho, int subsystem) {
    if (rho.dims.size() != 2)
        throw ValidationError("partial_transpose: exactly two subsystems required");
    if (subsystem != 0 && subsystem != 1)
        throw ValidationError("partial_transpose: subsystem must be 0 or 1");
    const int da = rho.dims[0], db = rho.dims[1];
    Mat out(da * db, da * db);
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b)
            for (int ap = 0; ap < da; ++ap)
                for (int bp = 0; bp < db; ++bp) {
                    int row = a * db + b, col = ap * db + bp;
                    int srow, scol;
                    if (subsystem == 0) { srow = ap * db + b; scol = a * db + bp; }
                    else { srow = a * db + bp; scol = ap * db + b; }
                    out(row, col) = rho.entries(srow, scol);
                }
    return Operator(std::move(out), rho.dims);
}

} // namespace qperc
