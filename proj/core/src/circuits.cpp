#include "qperc/circuits.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "qperc/errors.hpp"

namespace qperc {

namespace {

Mat sigma_x() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat ry_matrix(double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Mat m(2, 2);
  m << c, s, -s, c;
  return m;
}

Mat gate_matrix_1q(const Gate& g) {
  switch (g.kind) {
    case GateKind::RY:
      return ry_matrix(g.angle);
    case GateKind::RZ: {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = std::exp(Complex(0.0, -0.5 * g.angle));
      m(1, 1) = std::exp(Complex(0.0, 0.5 * g.angle));
      return m;
    }
    case GateKind::PHASE: {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = std::exp(Complex(0.0, g.angle));
      return m;
    }
    case GateKind::GENERIC_1Q:
      return g.matrix;
    default:
      throw ValidationError("gate_matrix_1q: not a single-qubit gate");
  }
}

bool unitary_2x2(const Mat& m, double tol) {
  if (m.rows() != 2 || m.cols() != 2) return false;
  return ((m.adjoint() * m) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol;
}

// Left-multiplies u by a 1q gate acting on `wire` of an n-wire register,
// wire 0 most significant.
void apply_1q(Mat& u, const Mat& g, int wire, int n_wires) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index mask = Eigen::Index{1} << (n_wires - 1 - wire);
  Vec row0(u.cols()), row1(u.cols());
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & mask) continue;
    const Eigen::Index r1 = r | mask;
    row0 = u.row(r);
    row1 = u.row(r1);
    u.row(r) = g(0, 0) * row0.transpose() + g(0, 1) * row1.transpose();
    u.row(r1) = g(1, 0) * row0.transpose() + g(1, 1) * row1.transpose();
  }
}

void apply_cnot(Mat& u, int control, int target, int n_wires) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index mc = Eigen::Index{1} << (n_wires - 1 - control);
  const Eigen::Index mt = Eigen::Index{1} << (n_wires - 1 - target);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & mc) && !(r & mt)) u.row(r).swap(u.row(r | mt));
  }
}

// Rotation magnitude of a 2x2 block, folded into [0, pi] because only the
// moduli of the entries survive local phase freedom.
double block_angle(const Mat& b) {
  return 2.0 * std::atan2(std::abs(b(1, 0)), std::abs(b(0, 0)));
}

void require_square_unitary(const Operator& u, const char* who) {
  if (u.entries.rows() != u.entries.cols())
    throw ValidationError(std::string(who) + ": operator must be square");
  if (!u.is_unitary(1e-8))
    throw ValidationError(std::string(who) + ": operator is not unitary");
}

double parse_real(std::istringstream& in, const std::string& line) {
  double v = 0.0;
  if (!(in >> v))
    throw IoError("parse_circuit: malformed number in line '" + line + "'");
  return v;
}

int parse_wire(std::istringstream& in, const std::string& line) {
  int w = -1;
  if (!(in >> w) || w < 0)
    throw IoError("parse_circuit: malformed wire index in line '" + line + "'");
  return w;
}

}  // namespace

Gate Gate::cnot(int control, int target) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.wires = {control, target};
  g.validate();
  return g;
}

Gate Gate::ry(int wire, double angle) {
  Gate g;
  g.kind = GateKind::RY;
  g.wires = {wire};
  g.angle = angle;
  g.validate();
  return g;
}

Gate Gate::rz(int wire, double angle) {
  Gate g;
  g.kind = GateKind::RZ;
  g.wires = {wire};
  g.angle = angle;
  g.validate();
  return g;
}

Gate Gate::phase(int wire, double angle) {
  Gate g;
  g.kind = GateKind::PHASE;
  g.wires = {wire};
  g.angle = angle;
  g.validate();
  return g;
}

Gate Gate::generic(int wire, Mat m) {
  Gate g;
  g.kind = GateKind::GENERIC_1Q;
  g.wires = {wire};
  g.matrix = std::move(m);
  g.validate();
  return g;
}

void Gate::validate() const {
  for (int w : wires) {
    if (w < 0) throw ValidationError("Gate: negative wire index");
  }
  switch (kind) {
    case GateKind::CNOT:
      if (wires.size() != 2 || wires[0] == wires[1])
        throw ValidationError("Gate: CNOT needs two distinct wires");
      break;
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::PHASE:
      if (wires.size() != 1)
        throw ValidationError("Gate: rotation gates act on one wire");
      if (!std::isfinite(angle))
        throw ValidationError("Gate: rotation angle must be finite");
      break;
    case GateKind::GENERIC_1Q:
      if (wires.size() != 1)
        throw ValidationError("Gate: GENERIC_1Q acts on one wire");
      if (!unitary_2x2(matrix, 1e-10))
        throw ValidationError("Gate: GENERIC_1Q matrix must be 2x2 unitary");
      break;
  }
}

void Circuit::validate() const {
  if (n_wires < 1) throw ValidationError("Circuit: n_wires must be >= 1");
  for (const Gate& g : gates) {
    g.validate();
    for (int w : g.wires) {
      if (w >= n_wires)
        throw ValidationError("Circuit: gate wire index out of range");
    }
  }
}

int Circuit::cnot_count() const {
  int n = 0;
  for (const Gate& g : gates)
    if (g.kind == GateKind::CNOT) ++n;
  return n;
}

Operator v_of_theta(double theta) {
  if (!std::isfinite(theta))
    throw ValidationError("v_of_theta: angle must be finite");
  return Operator(ry_matrix(theta), {2});
}

Circuit decompose_perceptron(const std::vector<double>& thetas, int n_inputs) {
  if (n_inputs < 1)
    throw ValidationError("decompose_perceptron: n_inputs must be >= 1");
  if (n_inputs > 2)
    throw ValidationError(
        "decompose_perceptron: decomposition implemented only for N <= 2; "
        "use gate_count for scaling");
  const std::size_t expect = std::size_t{1} << n_inputs;
  if (thetas.size() != expect)
    throw ValidationError("decompose_perceptron: need 2^N angles");
  for (double t : thetas) {
    if (!std::isfinite(t))
      throw ValidationError("decompose_perceptron: angles must be finite");
  }

  Circuit c;
  c.n_wires = n_inputs + 1;
  const int target = n_inputs;
  const double theta0 = thetas[0];
  if (theta0 != 0.0) c.gates.push_back(Gate::ry(target, theta0));

  for (std::size_t x = 1; x < expect; ++x) {
    const double phi = thetas[x] - theta0;
    if (phi == 0.0) continue;

    std::vector<int> flipped;
    for (int j = 0; j < n_inputs; ++j) {
      if (!((x >> (n_inputs - 1 - j)) & 1)) flipped.push_back(j);
    }
    for (int w : flipped) c.gates.push_back(Gate::generic(w, sigma_x()));

    if (n_inputs == 1) {
      c.gates.push_back(Gate::ry(target, 0.5 * phi));
      c.gates.push_back(Gate::cnot(0, target));
      c.gates.push_back(Gate::ry(target, -0.5 * phi));
      c.gates.push_back(Gate::cnot(0, target));
    } else {
      c.gates.push_back(Gate::ry(target, 0.25 * phi));
      c.gates.push_back(Gate::cnot(1, target));
      c.gates.push_back(Gate::ry(target, -0.25 * phi));
      c.gates.push_back(Gate::cnot(0, target));
      c.gates.push_back(Gate::ry(target, 0.25 * phi));
      c.gates.push_back(Gate::cnot(1, target));
      c.gates.push_back(Gate::ry(target, -0.25 * phi));
      c.gates.push_back(Gate::cnot(0, target));
    }

    for (int w : flipped) c.gates.push_back(Gate::generic(w, sigma_x()));
  }

  c.validate();
  return c;
}

Operator circuit_unitary(const Circuit& c) {
  c.validate();
  if (c.n_wires > 16)
    throw ValidationError("circuit_unitary: n_wires > 16 not supported");
  const Eigen::Index dim = Eigen::Index{1} << c.n_wires;
  Mat u = Mat::Identity(dim, dim);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::CNOT) {
      apply_cnot(u, g.wires[0], g.wires[1], c.n_wires);
    } else {
      apply_1q(u, gate_matrix_1q(g), g.wires[0], c.n_wires);
    }
  }
  std::vector<int> dims(static_cast<std::size_t>(c.n_wires), 2);
  return Operator(std::move(u), std::move(dims));
}

double equivalence_fidelity(const Operator& u, const Operator& v) {
  require_square_unitary(u, "equivalence_fidelity");
  require_square_unitary(v, "equivalence_fidelity");
  if (u.entries.rows() != v.entries.rows())
    throw ValidationError("equivalence_fidelity: dimension mismatch");
  const double dim = static_cast<double>(u.entries.rows());
  return std::abs((u.entries.adjoint() * v.entries).trace()) / dim;
}

double aligned_block_fidelity(const Operator& u, const Operator& v) {
  require_square_unitary(u, "aligned_block_fidelity");
  require_square_unitary(v, "aligned_block_fidelity");
  const Eigen::Index dim = u.entries.rows();
  if (dim != v.entries.rows())
    throw ValidationError("aligned_block_fidelity: dimension mismatch");
  if (dim % 2 != 0)
    throw ValidationError("aligned_block_fidelity: dimension must be even");
  double acc = 0.0;
  for (Eigen::Index b = 0; b < dim; b += 2) {
    const double tu = block_angle(u.entries.block<2, 2>(b, b));
    const double tv = block_angle(v.entries.block<2, 2>(b, b));
    acc += std::abs(std::cos(0.5 * (tu - tv)));
  }
  return acc / static_cast<double>(dim / 2);
}

long long gate_count(int n_inputs) {
  if (n_inputs < 1)
    throw ValidationError("gate_count: n_inputs must be >= 1");
  if (n_inputs > 30)
    throw ValidationError("gate_count: n_inputs > 30 overflows the count");
  const long long p = 1LL << n_inputs;
  return (p - 1) * (2 * p - 2);
}

CostEstimate estimate(int n_inputs, double f_2q, double t_2q) {
  if (!(f_2q > 0.0) || f_2q > 1.0)
    throw ValidationError("estimate: f_2q must lie in (0, 1]");
  if (!(t_2q > 0.0) || !std::isfinite(t_2q))
    throw ValidationError("estimate: t_2q must be positive");
  CostEstimate e;
  e.n_inputs = n_inputs;
  e.n_cnots = gate_count(n_inputs);
  e.total_time = static_cast<double>(e.n_cnots) * t_2q;
  e.fidelity_estimate = std::pow(f_2q, static_cast<double>(e.n_cnots));
  return e;
}

std::string emit_circuit(const Circuit& c) {
  c.validate();
  std::ostringstream out;
  out << std::setprecision(17);
  out << "wires " << c.n_wires << "\n";
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::CNOT:
        out << "CNOT " << g.wires[0] << " " << g.wires[1] << "\n";
        break;
      case GateKind::RY:
        out << "RY " << g.wires[0] << " " << g.angle << "\n";
        break;
      case GateKind::RZ:
        out << "RZ " << g.wires[0] << " " << g.angle << "\n";
        break;
      case GateKind::PHASE:
        out << "PHASE " << g.wires[0] << " " << g.angle << "\n";
        break;
      case GateKind::GENERIC_1Q: {
        out << "U1Q " << g.wires[0];
        for (int r = 0; r < 2; ++r) {
          for (int col = 0; col < 2; ++col) {
            out << " " << g.matrix(r, col).real() << " "
                << g.matrix(r, col).imag();
          }
        }
        out << "\n";
        break;
      }
    }
  }
  return out.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Circuit c;
  bool saw_header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (!saw_header) {
      if (word != "wires")
        throw IoError("parse_circuit: expected 'wires N' header");
      if (!(ls >> c.n_wires) || c.n_wires < 1)
        throw IoError("parse_circuit: malformed wire count");
      saw_header = true;
      continue;
    }
    if (word == "CNOT") {
      const int a = parse_wire(ls, line);
      const int b = parse_wire(ls, line);
      c.gates.push_back(Gate::cnot(a, b));
    } else if (word == "RY" || word == "RZ" || word == "PHASE") {
      const int w = parse_wire(ls, line);
      const double a = parse_real(ls, line);
      if (word == "RY")
        c.gates.push_back(Gate::ry(w, a));
      else if (word == "RZ")
        c.gates.push_back(Gate::rz(w, a));
      else
        c.gates.push_back(Gate::phase(w, a));
    } else if (word == "U1Q") {
      const int w = parse_wire(ls, line);
      Mat m(2, 2);
      for (int r = 0; r < 2; ++r) {
        for (int col = 0; col < 2; ++col) {
          const double re = parse_real(ls, line);
          const double im = parse_real(ls, line);
          m(r, col) = Complex(re, im);
        }
      }
      c.gates.push_back(Gate::generic(w, std::move(m)));
    } else {
      throw IoError("parse_circuit: unrecognized gate '" + word + "'");
    }
  }
  if (!saw_header) throw IoError("parse_circuit: missing 'wires N' header");
  c.validate();
  return c;
}

}  // namespace qperc
