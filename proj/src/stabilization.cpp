#include "dgh/stabilization.hpp"

#include <Eigen/Eigenvalues>

#include "dgh/errors.hpp"

namespace dgh {

Eigen::VectorXd tensor_eigenvalues(const Eigen::MatrixXd& flattened) {
  const Eigen::MatrixXd sym = 0.5 * (flattened + flattened.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numeric_error("eigensolve of the elasticity tensor failed");
  return es.eigenvalues();
}

double tensor_min_eigenvalue(const Eigen::MatrixXd& flattened) {
  return tensor_eigenvalues(flattened)[0];
}

}  // namespace dgh
