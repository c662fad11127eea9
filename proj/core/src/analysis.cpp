#include "qperc/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "qperc/errors.hpp"

namespace qperc {

ActivationCurve activation_sweep(const PerceptronConfig& cfg,
                                 const std::vector<double>& bias_grid, unsigned x) {
  cfg.validate();
  if (bias_grid.empty()) throw ValidationError("activation_sweep: empty bias grid");
  for (size_t i = 1; i < bias_grid.size(); ++i)
    if (bias_grid[i] <= bias_grid[i - 1])
      throw ValidationError("activation_sweep: bias grid must be strictly ascending");

  ActivationCurve curve;
  curve.bias_points = bias_grid;
  curve.pulse = cfg.pulse;
  curve.input_string = x;
  curve.populations.reserve(bias_grid.size());

  QuantumState ground(Vec::Unit(2, 0), {2});
  for (double b : bias_grid) {
    PerceptronConfig at_b = make_config(cfg.weights, b, cfg.pulse);
    TwoLevelResult r = evolve_two_level(make_frame(at_b, x), ground);
    double p = std::norm(r.final_state.amplitudes(1));
    if (p < -1e-9 || p > 1.0 + 1e-9)
      throw NumericalError("activation_sweep: population " + std::to_string(p) +
                           " outside [0,1]");
    curve.populations.push_back(std::clamp(p, 0.0, 1.0));
  }
  return curve;
}

double level_crossing(const ActivationCurve& curve, double level) {
  const auto& b = curve.bias_points;
  const auto& p = curve.populations;
  if (b.size() != p.size() || b.size() < 2)
    throw ValidationError("level_crossing: malformed curve");
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    if ((p[i] - level) * (p[i + 1] - level) <= 0.0 && p[i] != p[i + 1]) {
      double f = (level - p[i]) / (p[i + 1] - p[i]);
      return b[i] + f * (b[i + 1] - b[i]);
    }
  }
  throw ValidationError("level_crossing: curve never reaches level " +
                        std::to_string(level));
}

double rise_width(const ActivationCurve& curve) {
  return level_crossing(curve, 0.9) - level_crossing(curve, 0.1);
}

// The product form sech[(w+d)T/2] sech[(w-d)T/2] [sin^2(sT/2) + sinh^2(dT/2)]
// is evaluated through the identities cosh a cosh b = (cosh(a+b)+cosh(a-b))/2
// and 2(sin^2 + sinh^2) = cosh(dT) - cos(sT), giving
//   P = (cosh(dT) - cos(sT)) / (cosh(wT) + cosh(dT)),
// with the dominant exponential factored out so large arguments stay finite.
double analytic_transfer(double omega_i_det, double delta_f, double omega0, double T) {
  const double x = std::abs(delta_f * T);
  const double y = std::abs(omega_i_det * T);
  const double s = std::hypot(omega0, delta_f) * std::abs(T);
  const double m = std::max(x, y);
  auto scaled_cosh = [m](double z) {
    return 0.5 * (std::exp(z - m) + std::exp(-z - m));
  };
  const double num = scaled_cosh(x) - std::cos(s) * std::exp(-m);
  const double den = scaled_cosh(x) + scaled_cosh(y);
  double p = num / den;
  if (!std::isfinite(p) || p < -1e-9 || p > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "analytic_transfer: formula out of range (P=" << p
        << ", omega_i=" << omega_i_det << ", delta_f=" << delta_f
        << ", omega0=" << omega0 << ", T=" << T << ")";
    throw NumericalError(msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {

struct SimplexResult {
  std::array<double, 2> x;
  double f;
  bool converged;
};

// Deterministic Nelder-Mead in two parameters.
SimplexResult nelder_mead2(const std::function<double(double, double)>& f,
                           std::array<double, 2> x0, double scale, int max_iter,
                           double ftol_rel) {
  std::array<std::array<double, 2>, 3> v = {x0, x0, x0};
  v[1][0] += scale;
  v[2][1] += scale;
  std::array<double, 3> fv;
  for (int i = 0; i < 3; ++i) fv[i] = f(v[i][0], v[i][1]);

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> ord = {0, 1, 2};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    int lo = ord[0], mid = ord[1], hi = ord[2];
    if (fv[hi] - fv[lo] <= ftol_rel * std::abs(fv[lo]) + 1e-24) {
      converged = true;
      break;
    }
    std::array<double, 2> cen = {0.5 * (v[lo][0] + v[mid][0]),
                                 0.5 * (v[lo][1] + v[mid][1])};
    auto at = [&](double t) -> std::array<double, 2> {
      return {cen[0] + t * (cen[0] - v[hi][0]), cen[1] + t * (cen[1] - v[hi][1])};
    };
    std::array<double, 2> xr = at(1.0);
    double fr = f(xr[0], xr[1]);
    if (fr < fv[lo]) {
      std::array<double, 2> xe = at(2.0);
      double fe = f(xe[0], xe[1]);
      if (fe < fr) {
        v[hi] = xe;
        fv[hi] = fe;
      } else {
        v[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[mid]) {
      v[hi] = xr;
      fv[hi] = fr;
    } else {
      std::array<double, 2> xc = at(fr < fv[hi] ? 0.5 : -0.5);
      double fc = f(xc[0], xc[1]);
      if (fc < std::min(fr, fv[hi])) {
        v[hi] = xc;
        fv[hi] = fc;
      } else {
        for (int k : {mid, hi}) {
          v[k] = {0.5 * (v[k][0] + v[lo][0]), 0.5 * (v[k][1] + v[lo][1])};
          fv[k] = f(v[k][0], v[k][1]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (fv[i] < fv[best]) best = i;
  return {v[best], fv[best], converged};
}

}  // namespace

FitResult fit_activation(const ActivationCurve& curve) {
  const auto& pops = curve.populations;
  if (pops.size() != curve.bias_points.size() || pops.size() < 5)
    throw ValidationError("fit_activation: malformed or too-short curve");
  double pmin = *std::min_element(pops.begin(), pops.end());
  double pmax = *std::max_element(pops.begin(), pops.end());
  if (pmin >= 0.2 || pmax <= 0.8)
    throw ValidationError("fit_activation: curve must span both plateaus "
                          "(min < 0.2 and max > 0.8)");

  const double t_pulse = curve.pulse.duration_T;
  const double span = curve.pulse.omega_f - curve.pulse.omega_i;
  const double w0 = curve.pulse.omega0;
  const double vscale = two_pi * 1e7;  // delta in units of 2*pi*10 MHz

  auto cost = [&](double u, double v) -> double {
    if (!(u > 1e-4) || u > 1e4) return 1e6;
    double delta = v * vscale;
    double acc = 0.0;
    for (size_t i = 0; i < pops.size(); ++i) {
      double b = curve.bias_points[i];
      double m;
      try {
        m = analytic_transfer(b - span + delta, b, w0, u * t_pulse);
      } catch (const NumericalError&) {
        return 1e6;
      }
      double r = m - pops[i];
      acc += r * r;
    }
    return acc / double(pops.size());
  };

  // delta0 from the half-population crossing; delta = 0 leaves the model
  // identically ~0 over any physical grid, so the stated-midpoint anchor is
  // the deterministic replacement.
  double b_mid = level_crossing(curve, 0.5);
  double v0 = (span - 2.0 * b_mid) / vscale;

  // The sin^2(sqrt(omega0^2 + b^2) t / 2) factor makes the residual oscillate
  // in t with period 2 pi / s, carving local minima every half period, so the
  // basin holding the global minimum can only be found by a scan that
  // resolves that period. The offset direction is smooth; a coarse grid
  // around the anchor ranks it well enough for seeding.
  double s_max = std::hypot(w0, std::max(std::abs(curve.bias_points.front()),
                                         std::abs(curve.bias_points.back())));
  double du = std::clamp(0.5 * 3.141592653589793 / (s_max * t_pulse), 1e-3, 0.05);
  struct ScanPoint {
    double u, v, f;
  };
  std::vector<ScanPoint> prof;
  for (double u = 0.05; u <= 2.0 + 1e-12; u += du) {
    ScanPoint p{u, v0, 1e18};
    for (int k = -20; k <= 20; ++k) {
      double f = cost(u, v0 + 0.025 * k);
      if (f < p.f) {
        p.v = v0 + 0.025 * k;
        p.f = f;
      }
    }
    prof.push_back(p);
  }
  // The scan grid can sample one basin closer to its center than another, so
  // ranking a single point is not enough: polish each scan-grid local
  // minimum and keep the overall best.
  std::vector<size_t> cands;
  for (size_t i = 0; i < prof.size(); ++i) {
    bool down = i == 0 || prof[i].f <= prof[i - 1].f;
    bool up = i + 1 == prof.size() || prof[i].f <= prof[i + 1].f;
    if (down && up) cands.push_back(i);
  }
  std::sort(cands.begin(), cands.end(),
            [&](size_t a, size_t b) { return prof[a].f < prof[b].f; });
  if (cands.size() > 8) cands.resize(8);
  std::array<double, 2> best = {1.0, v0};
  double fbest = cost(best[0], best[1]);
  for (size_t i : cands) {
    SimplexResult r = nelder_mead2(cost, {prof[i].u, prof[i].v}, 0.5 * du, 500, 1e-12);
    r = nelder_mead2(cost, r.x, 0.1 * du, 500, 1e-12);
    if (r.f < fbest) {
      fbest = r.f;
      best = r.x;
    }
  }
  // A single simplex collapses along the narrow (t, delta) valley well before
  // reaching its bottom; cycling restarts over a shrinking scale ladder until
  // the value stops improving walks the valley to the floor.
  bool settled = false;
  for (int round = 0; round < 40 && !settled; ++round) {
    double before = fbest;
    for (double sc : {0.05, 0.01, 0.002}) {
      SimplexResult r = nelder_mead2(cost, best, sc, 2000, 1e-12);
      if (r.f < fbest) {
        fbest = r.f;
        best = r.x;
      }
    }
    settled = before - fbest <= 1e-12 * fbest + 1e-28;
  }

  FitResult out{best[0] * t_pulse, best[1] * vscale, std::sqrt(fbest)};
  if (!settled) {
    std::ostringstream msg;
    msg << "fit_activation: no convergence after iteration cap; best so far "
        << "t_fit=" << out.t_fit << " s, delta=" << out.delta_offset
        << " rad/s, rms=" << out.residual_rms;
    throw NumericalError(msg.str());
  }
  return out;
}

namespace {

Vec vec_of(const Mat& rho) {
  Vec v(16);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) v(c * 4 + r) = rho(r, c);
  return v;
}

Mat unvec(const Vec& v) {
  Mat m(4, 4);
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r) m(r, c) = v(c * 4 + r);
  return m;
}

Mat unit_matrix(int a, int b) {
  Mat e = Mat::Zero(4, 4);
  e(a, b) = 1.0;
  return e;
}

}  // namespace

Mat QuantumChannel::apply(const Mat& rho) const {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw ValidationError("QuantumChannel::apply: state must be 4x4");
  return unvec(super * vec_of(rho));
}

Mat QuantumChannel::choi() const {
  Mat c(16, 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      c.block<4, 4>(4 * a, 4 * b) = unvec(super.col(b * 4 + a));
  return c;
}

void QuantumChannel::validate() const {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Complex tr = 0.0;
      for (int i = 0; i < 4; ++i) tr += super(i * 4 + i, b * 4 + a);
      if (std::abs(tr - (a == b ? 1.0 : 0.0)) > 1e-8)
        throw NumericalError("QuantumChannel: not trace-preserving");
    }
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      Mat mab = unvec(super.col(b * 4 + a));
      Mat mba = unvec(super.col(a * 4 + b));
      if ((mba - mab.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw NumericalError("QuantumChannel: not hermiticity-preserving");
    }
  Mat c = choi();
  c = 0.5 * (c + c.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Mat> es(c, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-7)
    throw NumericalError("QuantumChannel: not completely positive (Choi min eig " +
                         std::to_string(es.eigenvalues().minCoeff()) + ")");
}

QuantumChannel channel_from_unitary(const Operator& u) {
  if (u.dim() != 4) throw ValidationError("channel_from_unitary: need a 4x4 operator");
  if (!u.is_unitary(1e-8))
    throw ValidationError("channel_from_unitary: operator is not unitary");
  QuantumChannel ch;
  ch.super = kron(Operator(u.entries.conjugate(), {4}), Operator(u.entries, {4})).entries;
  ch.validate();
  return ch;
}

QuantumChannel channel_from_lindblad(const PerceptronConfig& cfg,
                                     const std::vector<double>& t1_times,
                                     const LindbladOptions& opts) {
  QuantumChannel ch;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      ch.super.col(b * 4 + a) = vec_of(lindblad_propagate(cfg, unit_matrix(a, b),
                                                          t1_times, opts));
  ch.validate();
  return ch;
}

double avg_controlled_fidelity(const QuantumChannel& m) {
  double f = 0.0;
  for (int i = 0; i < 2; ++i) {
    Mat proj = Mat::Zero(4, 4);
    proj(2 * i, 2 * i) = 1.0;
    proj(2 * i + 1, 2 * i + 1) = 1.0;
    Mat out = m.apply(0.5 * proj);
    f += 0.5 * (proj * out).trace().real();
  }
  if (f < -1e-9 || f > 1.0 + 1e-9)
    throw NumericalError("avg_controlled_fidelity: value outside [0,1]");
  return std::clamp(f, 0.0, 1.0);
}

double avg_purity(const QuantumChannel& m) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<Eigen::Vector2cd, 6> states = {
      Eigen::Vector2cd(1, 0),
      Eigen::Vector2cd(0, 1),
      Eigen::Vector2cd(s, s),
      Eigen::Vector2cd(s, -s),
      Eigen::Vector2cd(s, Complex(0, s)),
      Eigen::Vector2cd(s, Complex(0, -s))};
  double acc = 0.0;
  for (const auto& in : states)
    for (const auto& out : states) {
      Eigen::Vector4cd psi;
      psi << in(0) * out(0), in(0) * out(1), in(1) * out(0), in(1) * out(1);
      Mat rho = psi * psi.adjoint();
      Mat r = m.apply(rho);
      acc += (r * r).trace().real();
    }
  double p = acc / 36.0;
  if (p < 0.25 - 1e-9 || p > 1.0 + 1e-9)
    throw NumericalError("avg_purity: value outside [1/4, 1]");
  return std::clamp(p, 0.25, 1.0);
}

double negativity(const DensityMatrix& rho, int subsystem) {
  if (rho.dims != std::vector<int>{2, 2})
    throw ValidationError("negativity: two-qubit state required");
  Operator pt = partial_transpose(rho, subsystem);
  EigResult eig = hermitian_eig(pt);
  double n = 0.0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) < 0.0) n -= eig.values(i);
  if (n > 0.5 + 1e-9) throw NumericalError("negativity: value above 1/2");
  return std::min(n, 0.5);
}

}  // namespace qperc
