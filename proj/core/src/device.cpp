#include "qperc/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <sstream>

#include "qperc/errors.hpp"

namespace qperc {

void DeviceParams::validate() const {
  if (truncation < 3)
    throw ValidationError("DeviceParams: truncation must be >= 3, got " +
                          std::to_string(truncation));
  for (double v : {omega1, omega2, omega_c, alpha1, alpha2, alpha_c, g1c, g2c})
    if (!std::isfinite(v)) throw ValidationError("DeviceParams: non-finite entry");
  if (omega1 <= 0 || omega2 <= 0 || omega_c <= 0)
    throw ValidationError("DeviceParams: mode frequencies must be positive");
}

namespace {

Mat number_op(int d) {
  Mat n = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return n;
}

Mat anharmonic_op(int d) {
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) m(k, k) = 0.5 * double(k) * double(k - 1);
  return m;
}

// a - a^dagger
Mat q_op(int d) {
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) {
    double s = std::sqrt(double(k + 1));
    m(k, k + 1) = s;
    m(k + 1, k) = -s;
  }
  return m;
}

Operator k3(const Mat& a, const Mat& b, const Mat& c, int d) {
  Operator oa(a, {d}), ob(b, {d}), oc(c, {d});
  return kron(kron(oa, ob), oc);
}

}  // namespace

Operator build_hamiltonian(const DeviceParams& p) {
  p.validate();
  const int d = p.truncation;
  Mat n = number_op(d), anh = anharmonic_op(d), q = q_op(d), id = Mat::Identity(d, d);
  Operator h = k3(p.omega1 * n + p.alpha1 * anh, id, id, d);
  h.entries += k3(id, p.omega2 * n + p.alpha2 * anh, id, d).entries;
  h.entries += k3(id, id, p.omega_c * n + p.alpha_c * anh, d).entries;
  h.entries += p.g1c * k3(q, id, q, d).entries;
  h.entries += p.g2c * k3(id, q, q, d).entries;
  return h;
}

ZZResult zz_numeric(const DeviceParams& p) {
  p.validate();
  const int d = p.truncation;
  const double d1 = p.omega_c - p.omega1, d2 = p.omega_c - p.omega2;
  const double gmax = std::max(std::abs(p.g1c), std::abs(p.g2c));
  if (std::min(std::abs(d1), std::abs(d2)) <= 3.0 * gmax)
    std::cerr << "warning: zz_numeric outside dispersive regime "
                 "(min detuning <= 3 max coupling), overlap tracking may be ambiguous\n";

  Operator h = build_hamiltonian(p);
  EigResult eig = hermitian_eig(h);
  const int dim = d * d * d;

  // bare computational labels |x1 x2 0_c>
  const std::array<std::pair<int, int>, 4> labels = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  auto bare_index = [d](int n1, int n2) { return (n1 * d + n2) * d; };

  struct Cand {
    double ov;
    int label;
    int state;
  };
  std::vector<Cand> cands;
  cands.reserve(4 * dim);
  for (int li = 0; li < 4; ++li) {
    int bi = bare_index(labels[li].first, labels[li].second);
    for (int k = 0; k < dim; ++k)
      cands.push_back({std::norm(eig.vectors(bi, k)), li, k});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.ov != b.ov) return a.ov > b.ov;
    if (a.label != b.label) return a.label < b.label;
    return a.state < b.state;
  });

  std::array<int, 4> assigned = {-1, -1, -1, -1};
  std::array<double, 4> overlap = {0, 0, 0, 0};
  std::vector<int> state_owner(dim, -1);
  for (const Cand& c : cands) {
    if (assigned[c.label] >= 0) continue;
    if (state_owner[c.state] >= 0) continue;
    assigned[c.label] = c.state;
    overlap[c.label] = c.ov;
    state_owner[c.state] = c.label;
  }

  auto label_name = [&](int li) {
    std::ostringstream s;
    s << "|" << labels[li].first << labels[li].second << ">";
    return s.str();
  };

  // unconstrained argmax per label exposes contested eigenstates
  for (int li = 0; li < 4; ++li) {
    int bi = bare_index(labels[li].first, labels[li].second);
    int best = 0;
    double bv = -1.0;
    for (int k = 0; k < dim; ++k) {
      double ov = std::norm(eig.vectors(bi, k));
      if (ov > bv) {
        bv = ov;
        best = k;
      }
    }
    if (best != assigned[li])
      throw NumericalError("zz_numeric: ambiguous dressed-state assignment, labels " +
                           label_name(state_owner[best]) + " and " + label_name(li) +
                           " both claim eigenstate " + std::to_string(best));
  }
  for (int li = 0; li < 4; ++li) {
    if (overlap[li] <= 0.5)
      throw NumericalError("zz_numeric: dressed-state overlap for " + label_name(li) +
                           " is " + std::to_string(overlap[li]) + ", below the 0.5 floor");
  }

  double e00 = eig.values(assigned[0]);
  double e01 = eig.values(assigned[1]);
  double e10 = eig.values(assigned[2]);
  double e11 = eig.values(assigned[3]);
  double j = e11 + e00 - e10 - e01;
  if (!std::isfinite(j)) throw NumericalError("zz_numeric: non-finite J");
  return {j, -j, ZZMethod::numeric};
}

ZZResult zz_perturbative(const DeviceParams& p) {
  p.validate();
  const double d1 = p.omega_c - p.omega1, d2 = p.omega_c - p.omega2;
  const double floor = two_pi * 1e6;
  const std::array<std::pair<const char*, double>, 5> factors = {{
      {"Delta1", d1},
      {"Delta2", d2},
      {"Delta1+Delta2+alpha_c", d1 + d2 + p.alpha_c},
      {"Delta2-Delta1-alpha2", d2 - d1 - p.alpha2},
      {"Delta1-Delta2-alpha1", d1 - d2 - p.alpha1},
  }};
  for (auto& [name, v] : factors)
    if (std::abs(v) < floor)
      throw NumericalError(std::string("zz_perturbative: near-resonant, perturbation "
                                       "theory invalid (denominator factor ") +
                           name + " = " + std::to_string(v) + " rad/s)");

  const double a1 = p.alpha1, a2 = p.alpha2, ac = p.alpha_c;
  double num = a1 * a2 * (d1 + d2) * (d1 + d2) + a2 * ac * d1 * d1 +
               a1 * d1 * d1 * (d1 + d2) + a2 * d2 * d2 * (d1 + d2) +
               ac * (d1 + d2) * (d1 - d2) * (d1 - d2);
  double den = d1 * d1 * d2 * d2 * (d1 + d2 + ac) * (d2 - d1 - a2) * (d1 - d2 - a1);
  double j = -2.0 * p.g1c * p.g1c * p.g2c * p.g2c * num / den;
  if (!std::isfinite(j)) throw NumericalError("zz_perturbative: non-finite J");
  return {j, -j, ZZMethod::perturbative};
}

std::vector<SweepRow> coupler_sweep(const DeviceParams& p,
                                    const std::vector<double>& omega_c_grid) {
  if (omega_c_grid.empty()) throw ValidationError("coupler_sweep: empty grid");
  for (size_t i = 1; i < omega_c_grid.size(); ++i)
    if (omega_c_grid[i] <= omega_c_grid[i - 1])
      throw ValidationError("coupler_sweep: grid must be strictly ascending");

  std::vector<SweepRow> rows;
  rows.reserve(omega_c_grid.size());
  for (double wc : omega_c_grid) {
    SweepRow row;
    row.omega_c = wc;
    DeviceParams q = p;
    q.omega_c = wc;
    try {
      row.j_numeric = zz_numeric(q).j;
    } catch (const std::exception& e) {
      row.numeric_error = e.what();
    }
    try {
      row.j_perturbative = zz_perturbative(q).j;
    } catch (const std::exception& e) {
      row.perturbative_error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qperc
