#include "entrec/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace entrec {

namespace {

constexpr double kEnsembleTol = 1e-10;
// Eigenvalues of rho below this fraction of the largest are rounding noise.
constexpr double kRankTol = 1e-13;

void require_two_qubits(const DensityMatrix& rho, const char* what) {
  if (rho.dim() != 4) throw DimensionError(std::string(what) + ": expected a 4x4 two-qubit state");
}

const Matrix4c& sigma_yy() {
  static const Matrix4c m = kron(pauli::y(), pauli::y());
  return m;
}

}  // namespace

PureStateEnsemble::PureStateEnsemble(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("ensemble must have at least one member");
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.probability < 0.0 || m.probability > 1.0)
      throw DomainError("ensemble probability outside [0,1]");
    if (m.state.dim() != 4) throw DimensionError("ensemble members must be two-qubit states");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > kEnsembleTol) throw DomainError("ensemble probabilities do not sum to one");
}

PreparationModel PreparationModel::from_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
  return PreparationModel(eta, (1.0 + 3.0 * eta) / 4.0);
}

PreparationModel PreparationModel::from_fidelity(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) throw DomainError("fidelity must lie in [1/4,1]");
  return PreparationModel((4.0 * fidelity - 1.0) / 3.0, fidelity);
}

std::vector<double> wootters_lambdas(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  // rho = B B^dag with B = V sqrt(D). The lambdas are the singular values of
  // tau = B^T (sy x sy) B, whose squares are the eigenvalues of rho rho~.
  // Working with tau avoids taking square roots of rounding noise, so pure
  // and low-rank states keep full precision.
  const Matrix4c r = rho.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (r + r.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen-decomposition of rho failed");
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  Matrix4c b = Matrix4c::Zero();
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > kRankTol * top) b.col(i) = std::sqrt(ev) * es.eigenvectors().col(i);
  }
  const Matrix4c tau = b.transpose() * sigma_yy() * b;
  Eigen::JacobiSVD<Matrix4c> svd(tau);
  std::vector<double> lambdas(svd.singularValues().data(), svd.singularValues().data() + 4);
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return lambdas;
}

double concurrence(const DensityMatrix& rho) {
  const auto l = wootters_lambdas(rho);
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

bool is_x_state(const DensityMatrix& rho, double tol) {
  if (rho.dim() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && i + j != 3 && std::abs(rho(i, j)) >= tol) return false;
  return true;
}

double concurrence_x_state(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence_x_state");
  if (!is_x_state(rho)) throw ShapeError("density matrix is not X-shaped; use concurrence()");
  const double aa = std::max(0.0, rho(0, 0).real());
  const double bb = std::max(0.0, rho(1, 1).real());
  const double cc = std::max(0.0, rho(2, 2).real());
  const double dd = std::max(0.0, rho(3, 3).real());
  const double t1 = std::abs(rho(1, 2)) - std::sqrt(aa * dd);
  const double t2 = std::abs(rho(0, 3)) - std::sqrt(bb * cc);
  return std::clamp(2.0 * std::max({0.0, t1, t2}), 0.0, 1.0);
}

double binary_entropy(double x) {
  auto term = [](double v) { return v > 0.0 ? -v * std::log2(v) : 0.0; };
  return term(x) + term(1.0 - x);
}

double eof_from_concurrence(double c) {
  constexpr double slack = 1e-9;
  if (!(c >= -slack && c <= 1.0 + slack)) throw DomainError("concurrence outside [0,1]");
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double pure_concurrence(const PureState& psi) {
  if (psi.dim() != 4) throw DimensionError("pure_concurrence: expected a two-qubit state");
  // 2 |a00 a11 - a01 a10| equals |<psi| sy x sy |psi*>|.
  return std::min(1.0, 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]));
}

double ensemble_average_eof(const PureStateEnsemble& ens) {
  double e = 0.0;
  for (const auto& m : ens.members())
    e += m.probability * eof_from_concurrence(concurrence(DensityMatrix::from_pure(m.state)));
  return e;
}

DensityMatrix mixture(const PureStateEnsemble& ens) {
  MatrixXc acc = MatrixXc::Zero(4, 4);
  for (const auto& m : ens.members()) {
    const VectorXc& a = m.state.amplitudes();
    acc += m.probability * (a * a.adjoint());
  }
  const double tr = acc.trace().real();
  acc /= tr;
  return DensityMatrix(ens.members().front().state.reg(), std::move(acc));
}

DensityMatrix werner(const PreparationModel& prep) {
  return mix_with_identity(DensityMatrix::from_pure(bell_state(BellKind::psi_minus)), prep.eta());
}

DensityMatrix mix_with_identity(const DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
  const auto d = static_cast<Eigen::Index>(rho.dim());
  MatrixXc m = eta * rho.matrix() + (1.0 - eta) / static_cast<double>(d) * MatrixXc::Identity(d, d);
  return DensityMatrix(rho.reg(), std::move(m));
}

}  // namespace entrec
