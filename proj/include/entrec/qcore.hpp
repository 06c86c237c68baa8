#pragma once

// Dense state primitives for small qubit registers (2 or 3 qubits).
//
// Basis convention, used everywhere in this library: the computational index
// is big-endian over the register's label order, so for register [A,B] the
// basis is |00>,|01>,|10>,|11> = |a>,|b>,|c>,|d>. Polarization maps H->0,
// V->1 and the path environment maps u->0, d->1.

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrec {

using complex_t = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double kStateTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

struct RegisterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Qubit label such as 'A', 'B' or 'O'.
struct Qubit {
  char name;
  friend bool operator==(Qubit, Qubit) = default;
};

inline constexpr Qubit kA{'A'};
inline constexpr Qubit kB{'B'};
inline constexpr Qubit kO{'O'};

/// Ordered list of distinct qubit labels.
class Register {
 public:
  Register(std::initializer_list<Qubit> qubits);
  explicit Register(std::vector<Qubit> qubits);

  std::size_t size() const { return qubits_.size(); }
  std::size_t dim() const { return std::size_t{1} << qubits_.size(); }
  const std::vector<Qubit>& qubits() const { return qubits_; }

  bool contains(Qubit q) const;
  /// Position of `q` in the register; throws RegisterError if absent.
  std::size_t position(Qubit q) const;
  std::string to_string() const;

  friend bool operator==(const Register&, const Register&) = default;

 private:
  std::vector<Qubit> qubits_;
};

/// Unit-norm amplitude vector over a register.
class PureState {
 public:
  PureState(Register reg, VectorXc amplitudes);

  /// Rescales `amplitudes` to unit norm; throws StateError on a zero vector.
  static PureState normalized(Register reg, VectorXc amplitudes);

  const Register& reg() const { return reg_; }
  const VectorXc& amplitudes() const { return amps_; }
  complex_t operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }

 private:
  Register reg_;
  VectorXc amps_;
};

/// Hermitian, trace-one, numerically positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix(Register reg, MatrixXc entries);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(Register reg);

  const Register& reg() const { return reg_; }
  const MatrixXc& matrix() const { return rho_; }
  complex_t operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }

  /// Ascending eigenvalues of the Hermitian matrix.
  Eigen::VectorXd eigenvalues() const;

 private:
  Register reg_;
  MatrixXc rho_;
};

/// 2x2 operator acting on one labeled qubit.
class LocalOperator {
 public:
  LocalOperator(Qubit target, Matrix2c matrix, bool unitary = true);

  Qubit target() const { return target_; }
  const Matrix2c& matrix() const { return m_; }
  bool is_unitary() const { return unitary_; }

 private:
  Qubit target_;
  Matrix2c m_;
  bool unitary_;
};

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
}  // namespace pauli

/// diag(1, e^{i phi}).
Matrix2c phase_shift(double phi);

enum class BellKind { psi_minus, phi_minus, psi_plus, phi_plus };

/// Bell state on [A,B].
PureState bell_state(BellKind kind);

/// Single basis vector, e.g. basis_state({kA,kB}, 0b01) = |HV>.
PureState basis_state(Register reg, std::size_t index);

/// Full-register matrix of a 2x2 operator on `target` (identity elsewhere).
MatrixXc embed(const Matrix2c& op, Qubit target, const Register& reg);

PureState apply_local(const PureState& psi, const LocalOperator& op);
DensityMatrix apply_local(const DensityMatrix& rho, const LocalOperator& op);

/// Applies a full-register unitary.
PureState apply_unitary(const PureState& psi, const MatrixXc& u);
DensityMatrix apply_unitary(const DensityMatrix& rho, const MatrixXc& u);

/// Kronecker product; registers are concatenated and must be disjoint.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
MatrixXc kron(const MatrixXc& a, const MatrixXc& b);

/// Reduced state on `keep`. The result keeps the parent register order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<Qubit>& keep);

/// <psi|rho|psi>, clamped to [0,1].
double fidelity_to_pure(const DensityMatrix& rho, const PureState& psi);

/// |<a|b>|.
double overlap(const PureState& a, const PureState& b);

bool is_unitary(const MatrixXc& u, double tol = kStateTol);

}  // namespace entrec
