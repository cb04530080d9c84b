#pragma once

#include <Eigen/Dense>

namespace dgh {

struct StabilizationParams {
  double beta = 1.0;        // adaptive weight
  double eps = 0.0;         // constant floor
  double eta_lbb = 1.0;     // pressure-jump penalty
  double eta_lambda = 1.0;  // multiplier edge-jump penalty
  /// Recompute lambda_F at every Newton iteration instead of freezing it per
  /// loading increment (experimentation only).
  bool refresh_each_iteration = false;
};

/// Smallest eigenvalue of the symmetric part of a flattened fourth-order
/// tensor (rows i*d+j, columns k*d+l): the minimum of G:A:G / G:G over G.
double tensor_min_eigenvalue(const Eigen::MatrixXd& flattened);

/// Full spectrum of the symmetrized flattening, ascending (d^2 values).
Eigen::VectorXd tensor_eigenvalues(const Eigen::MatrixXd& flattened);

/// eta_F = eps + beta * lambda_F.
inline double eta_face(const StabilizationParams& p, double lambda_face) {
  return p.eps + p.beta * lambda_face;
}

struct EtaStats {
  double min = 0, mean = 0, max = 0;
  double lambda_max = 0;  // largest lambda_F encountered
};

}  // namespace dgh
