#pragma once

// Two-qubit entanglement quantifiers.

#include "entrec/qcore.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace entrec {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Raised by the X-state shortcut when the input is not X-shaped.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Pure-state decomposition {(p_i, |psi_i>)} of a two-qubit state.
class PureStateEnsemble {
 public:
  struct Member {
    double probability;
    PureState state;
  };

  explicit PureStateEnsemble(std::vector<Member> members);

  const std::vector<Member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Member> members_;
};

/// Werner-type imperfect preparation: rho_in = eta |Psi-><Psi-| + (1-eta) I/4.
class PreparationModel {
 public:
  static PreparationModel from_eta(double eta);
  /// eta = (4F - 1)/3 for F in [1/4, 1].
  static PreparationModel from_fidelity(double fidelity);
  static PreparationModel ideal() { return from_eta(1.0); }

  double eta() const { return eta_; }
  double fidelity() const { return fidelity_; }

 private:
  PreparationModel(double eta, double fidelity) : eta_(eta), fidelity_(fidelity) {}
  double eta_;
  double fidelity_;
};

/// Wootters concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const DensityMatrix& rho);

/// Square roots of the Wootters matrix eigenvalues, sorted descending.
std::vector<double> wootters_lambdas(const DensityMatrix& rho);

/// Closed-form concurrence for X-shaped states:
/// 2 max{0, |rho_bc| - sqrt(rho_aa rho_dd), |rho_ad| - sqrt(rho_bb rho_cc)}.
double concurrence_x_state(const DensityMatrix& rho);

/// True when every entry off the diagonal and anti-diagonal is below `tol`.
bool is_x_state(const DensityMatrix& rho, double tol = 1e-9);

/// Binary entropy in bits with 0 log 0 = 0.
double binary_entropy(double x);

/// E_f = h((1 + sqrt(1 - c^2)) / 2).
double eof_from_concurrence(double c);

/// Concurrence of a two-qubit pure state, |<psi| sy x sy |psi*>|.
double pure_concurrence(const PureState& psi);

/// sum_i p_i E_f(C(|psi_i><psi_i|)).
double ensemble_average_eof(const PureStateEnsemble& ens);

/// sum_i p_i |psi_i><psi_i|.
DensityMatrix mixture(const PureStateEnsemble& ens);

DensityMatrix werner(const PreparationModel& prep);

/// eta * rho + (1 - eta) * I/d.
DensityMatrix mix_with_identity(const DensityMatrix& rho, double eta);

}  // namespace entrec
