#include "entrec/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace entrec {

namespace {

void check_distinct(const std::vector<Qubit>& qubits) {
  if (qubits.empty()) throw RegisterError("register must contain at least one qubit");
  for (std::size_t i = 0; i < qubits.size(); ++i)
    for (std::size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j])
        throw RegisterError(std::string("duplicate qubit label '") + qubits[i].name + "'");
}

// Bit of qubit at register position `pos` inside basis index `idx`.
inline std::size_t bit_at(std::size_t idx, std::size_t pos, std::size_t n) {
  return (idx >> (n - 1 - pos)) & 1U;
}

}  // namespace

Register::Register(std::initializer_list<Qubit> qubits) : qubits_(qubits) {
  check_distinct(qubits_);
}

Register::Register(std::vector<Qubit> qubits) : qubits_(std::move(qubits)) {
  check_distinct(qubits_);
}

bool Register::contains(Qubit q) const {
  return std::find(qubits_.begin(), qubits_.end(), q) != qubits_.end();
}

std::size_t Register::position(Qubit q) const {
  auto it = std::find(qubits_.begin(), qubits_.end(), q);
  if (it == qubits_.end())
    throw RegisterError(std::string("qubit '") + q.name + "' not in register " + to_string());
  return static_cast<std::size_t>(it - qubits_.begin());
}

std::string Register::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < qubits_.size(); ++i) {
    if (i) s += ',';
    s += qubits_[i].name;
  }
  return s + "]";
}

PureState::PureState(Register reg, VectorXc amplitudes)
    : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
  if (dim() != reg_.dim())
    throw DimensionError("amplitude vector length " + std::to_string(dim()) +
                         " does not match register " + reg_.to_string());
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kStateTol)
    throw StateError("pure state is not normalized (|psi|^2 = " + std::to_string(norm2) + ")");
}

PureState PureState::normalized(Register reg, VectorXc amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw StateError("cannot normalize a zero vector");
  amplitudes /= n;
  return PureState(std::move(reg), std::move(amplitudes));
}

DensityMatrix::DensityMatrix(Register reg, MatrixXc entries)
    : reg_(std::move(reg)), rho_(std::move(entries)) {
  const auto n = static_cast<std::size_t>(rho_.rows());
  if (rho_.rows() != rho_.cols() || n != reg_.dim())
    throw DimensionError("density matrix shape does not match register " + reg_.to_string());
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateTol)
    throw StateError("density matrix is not Hermitian");
  const complex_t tr = rho_.trace();
  if (std::abs(tr.real() - 1.0) > kStateTol || std::abs(tr.imag()) > kStateTol)
    throw StateError("density matrix trace is not one");
  if (eigenvalues().minCoeff() < -kPsdTol)
    throw StateError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const VectorXc& a = psi.amplitudes();
  return DensityMatrix(psi.reg(), a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Register reg) {
  const auto d = static_cast<Eigen::Index>(reg.dim());
  MatrixXc m = MatrixXc::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(std::move(reg), std::move(m));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  // Symmetrize so the solver sees an exactly Hermitian input.
  const MatrixXc h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

LocalOperator::LocalOperator(Qubit target, Matrix2c matrix, bool unitary)
    : target_(target), m_(std::move(matrix)), unitary_(unitary) {
  if (unitary_ && !entrec::is_unitary(m_))
    throw StateError(std::string("operator on '") + target.name + "' flagged unitary but U^dag U != 1");
}

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}
Matrix2c y() {
  Matrix2c m;
  m << 0, complex_t(0, -1), complex_t(0, 1), 0;
  return m;
}
Matrix2c z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Matrix2c phase_shift(double phi) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, phi);
  return m;
}

PureState bell_state(BellKind kind) {
  const double s = 1.0 / std::numbers::sqrt2;
  VectorXc v = VectorXc::Zero(4);
  switch (kind) {
    case BellKind::psi_minus: v(1) = s; v(2) = -s; break;
    case BellKind::psi_plus: v(1) = s; v(2) = s; break;
    case BellKind::phi_minus: v(0) = s; v(3) = -s; break;
    case BellKind::phi_plus: v(0) = s; v(3) = s; break;
  }
  return PureState({kA, kB}, std::move(v));
}

PureState basis_state(Register reg, std::size_t index) {
  if (index >= reg.dim()) throw DimensionError("basis index out of range");
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(reg.dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(reg), std::move(v));
}

MatrixXc embed(const Matrix2c& op, Qubit target, const Register& reg) {
  const std::size_t n = reg.size();
  const std::size_t pos = reg.position(target);
  const std::size_t d = reg.dim();
  const std::size_t mask = std::size_t{1} << (n - 1 - pos);
  MatrixXc full = MatrixXc::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t col = 0; col < d; ++col) {
    const std::size_t b = bit_at(col, pos, n);
    const std::size_t rest = col & ~mask;
    for (std::size_t r = 0; r < 2; ++r) {
      const std::size_t row = rest | (r ? mask : 0);
      full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b));
    }
  }
  return full;
}

PureState apply_local(const PureState& psi, const LocalOperator& op) {
  if (!op.is_unitary()) throw StateError("apply_local requires a unitary operator");
  return apply_unitary(psi, embed(op.matrix(), op.target(), psi.reg()));
}

DensityMatrix apply_local(const DensityMatrix& rho, const LocalOperator& op) {
  if (!op.is_unitary()) throw StateError("apply_local requires a unitary operator");
  return apply_unitary(rho, embed(op.matrix(), op.target(), rho.reg()));
}

PureState apply_unitary(const PureState& psi, const MatrixXc& u) {
  if (static_cast<std::size_t>(u.rows()) != psi.dim() || u.rows() != u.cols())
    throw DimensionError("operator dimension does not match state");
  return PureState(psi.reg(), u * psi.amplitudes());
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const MatrixXc& u) {
  if (static_cast<std::size_t>(u.rows()) != rho.dim() || u.rows() != u.cols())
    throw DimensionError("operator dimension does not match state");
  MatrixXc out = u * rho.matrix() * u.adjoint();
  // Restore exact Hermiticity lost to rounding.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(rho.reg(), std::move(out));
}

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {
Register concat(const Register& a, const Register& b) {
  std::vector<Qubit> q = a.qubits();
  q.insert(q.end(), b.qubits().begin(), b.qubits().end());
  return Register(std::move(q));
}
}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
  Register reg = concat(a.reg(), b.reg());
  VectorXc v = kron(a.amplitudes(), b.amplitudes());
  return PureState(std::move(reg), std::move(v));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Register reg = concat(a.reg(), b.reg());
  return DensityMatrix(std::move(reg), kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Qubit>& keep) {
  const Register& reg = rho.reg();
  if (keep.empty() || keep.size() >= reg.size())
    throw RegisterError("keep must be a nonempty strict subset of " + reg.to_string());
  std::vector<bool> kept(reg.size(), false);
  for (Qubit q : keep) {
    const std::size_t pos = reg.position(q);
    if (kept[pos]) throw RegisterError(std::string("qubit '") + q.name + "' listed twice");
    kept[pos] = true;
  }
  std::vector<Qubit> kept_labels;
  std::vector<std::size_t> kept_pos, traced_pos;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (kept[i]) {
      kept_labels.push_back(reg.qubits()[i]);
      kept_pos.push_back(i);
    } else {
      traced_pos.push_back(i);
    }
  }

  const std::size_t n = reg.size();
  auto compose = [n](const std::vector<std::size_t>& pos_list, std::size_t bits,
                     std::size_t base) {
    const std::size_t m = pos_list.size();
    for (std::size_t k = 0; k < m; ++k)
      if ((bits >> (m - 1 - k)) & 1U) base |= std::size_t{1} << (n - 1 - pos_list[k]);
    return base;
  };

  const std::size_t dk = std::size_t{1} << kept_pos.size();
  const std::size_t dt = std::size_t{1} << traced_pos.size();
  MatrixXc out = MatrixXc::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    const std::size_t ri = compose(kept_pos, i, 0);
    for (std::size_t j = 0; j < dk; ++j) {
      const std::size_t rj = compose(kept_pos, j, 0);
      complex_t acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t)
        acc += rho(compose(traced_pos, t, ri), compose(traced_pos, t, rj));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(Register(std::move(kept_labels)), std::move(out));
}

double fidelity_to_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw DimensionError("fidelity: dimension mismatch");
  const VectorXc& a = psi.amplitudes();
  const complex_t f = a.dot(rho.matrix() * a);
  return std::clamp(f.real(), 0.0, 1.0);
}

double overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap: dimension mismatch");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool is_unitary(const MatrixXc& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const MatrixXc d = u.adjoint() * u - MatrixXc::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace entrec
