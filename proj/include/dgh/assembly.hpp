#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "dgh/problem.hpp"

namespace dgh {

struct AssembledSystem {
  Eigen::VectorXd residual;
  Eigen::SparseMatrix<double> jacobian;
  bool has_jacobian = false;
};

/// Residual (and optionally the Jacobian) of the discrete problem at the
/// given state and loading fraction t, with the BR2 face penalties eta_face
/// supplied frozen by the caller. Throws invalid_state_error when any
/// quadrature point sees det(F^k_T) <= 0 or det(F^{k+1}_TF) <= 0.
AssembledSystem assemble_system(const Problem& pb, const Eigen::VectorXd& state, double t,
                                const std::vector<double>& eta_face, bool want_jacobian);

inline Eigen::VectorXd assemble_residual(const Problem& pb, const Eigen::VectorXd& state,
                                         double t, const std::vector<double>& eta_face) {
  return assemble_system(pb, state, t, eta_face, false).residual;
}

/// Adaptive BR2 penalty: lambda_F from the spectrum of the elasticity tensor
/// evaluated at F^{k+1}_TF of the current iterate, averaged per face, then
/// eta_F = eps + beta lambda_F. Entries are meaningful on internal and
/// Nitsche faces only.
std::vector<double> compute_face_eta(const Problem& pb, const Eigen::VectorXd& state,
                                     double t, EtaStats* stats = nullptr);

}  // namespace dgh
