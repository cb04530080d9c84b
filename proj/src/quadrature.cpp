#include "dgh/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "dgh/errors.hpp"

namespace dgh {

int ref_entity_dim(RefEntity e) {
  switch (e) {
    case RefEntity::Point: return 0;
    case RefEntity::Segment: return 1;
    case RefEntity::Triangle:
    case RefEntity::Quad: return 2;
    case RefEntity::Tetra:
    case RefEntity::Hexa: return 3;
  }
  return -1;
}

double ref_entity_measure(RefEntity e) {
  switch (e) {
    case RefEntity::Point: return 1.0;
    case RefEntity::Segment:
    case RefEntity::Quad:
    case RefEntity::Hexa: return 1.0;
    case RefEntity::Triangle: return 0.5;
    case RefEntity::Tetra: return 1.0 / 6.0;
  }
  return 0.0;
}

namespace {

// Golub-Welsch on the symmetric Jacobi matrix of the Jacobi polynomials
// P^(alpha,0) over [-1,1], then mapped to [0,1]. alpha = 0 gives Legendre.
void jacobi_rule01(int n, int alpha, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  if (n < 1) throw unsupported_error("quadrature rule needs at least one node");
  const double a = static_cast<double>(alpha);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    // diagonal: b_k = beta^2 - alpha^2 over (2k+a)(2k+a+2); beta = 0 here
    const double denom = (2 * kk + a) * (2 * kk + a + 2);
    T(k, k) = (denom == 0.0) ? 0.0 : -(a * a) / denom;
    if (k + 1 < n) {
      const double k1 = kk + 1;
      const double num = 4 * k1 * (k1 + a) * (k1 + a) * k1;
      const double den =
          (2 * k1 + a - 1) * (2 * k1 + a) * (2 * k1 + a) * (2 * k1 + a + 1);
      T(k, k + 1) = T(k + 1, k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success) throw numeric_error("quadrature eigensolve failed");
  // moment mu0 = integral over [-1,1] of (1-x)^alpha = 2^(alpha+1)/(alpha+1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    w[i] = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    // map weight to [0,1] with weight (1-x)^alpha: dx -> dx/2, (1-x) -> (1-x)/... on
    // [-1,1] weight is (1-s)^alpha with s = 2x-1, so (1-s) = 2(1-x).
    w[i] /= std::pow(2.0, a + 1.0);
  }
}

}  // namespace

void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  jacobi_rule01(n, 0, x, w);
}

void gauss_jacobi(int n, int alpha, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  jacobi_rule01(n, alpha, x, w);
}

QuadratureRule quadrature_rule(RefEntity entity, int degree) {
  if (degree < 0) throw unsupported_error("quadrature degree must be >= 0");
  QuadratureRule rule;
  rule.entity = entity;
  rule.degree = degree;
  const int n = (degree + 2) / 2;  // 2n-1 >= degree

  switch (entity) {
    case RefEntity::Point: {
      rule.points.resize(0, 1);
      rule.weights = Eigen::VectorXd::Ones(1);
      break;
    }
    case RefEntity::Segment: {
      Eigen::VectorXd x, w;
      gauss_legendre(n, x, w);
      rule.points = x.transpose();
      rule.weights = w;
      break;
    }
    case RefEntity::Quad:
    case RefEntity::Hexa: {
      const int dim = entity == RefEntity::Quad ? 2 : 3;
      Eigen::VectorXd x, w;
      gauss_legendre(n, x, w);
      const int total = static_cast<int>(std::pow(n, dim));
      rule.points.resize(dim, total);
      rule.weights.resize(total);
      for (int q = 0; q < total; ++q) {
        int rem = q;
        double wq = 1.0;
        for (int dIdx = 0; dIdx < dim; ++dIdx) {
          const int i = rem % n;
          rem /= n;
          rule.points(dIdx, q) = x[i];
          wq *= w[i];
        }
        rule.weights[q] = wq;
      }
      break;
    }
    case RefEntity::Triangle: {
      // x = s, y = u (1 - s); ds-weight carries (1-s) -> Gauss-Jacobi(1).
      Eigen::VectorXd s, ws, u, wu;
      gauss_jacobi(n, 1, s, ws);
      gauss_legendre(n, u, wu);
      rule.points.resize(2, n * n);
      rule.weights.resize(n * n);
      int q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j, ++q) {
          rule.points(0, q) = s[i];
          rule.points(1, q) = u[j] * (1.0 - s[i]);
          rule.weights[q] = ws[i] * wu[j];
        }
      break;
    }
    case RefEntity::Tetra: {
      // x = s, y = u (1-s), z = v (1-s)(1-u); weights (1-s)^2 and (1-u).
      Eigen::VectorXd s, ws, u, wu, v, wv;
      gauss_jacobi(n, 2, s, ws);
      gauss_jacobi(n, 1, u, wu);
      gauss_legendre(n, v, wv);
      rule.points.resize(3, n * n * n);
      rule.weights.resize(n * n * n);
      int q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int kk = 0; kk < n; ++kk, ++q) {
            rule.points(0, q) = s[i];
            rule.points(1, q) = u[j] * (1.0 - s[i]);
            rule.points(2, q) = v[kk] * (1.0 - s[i]) * (1.0 - u[j]);
            rule.weights[q] = ws[i] * wu[j] * wv[kk];
          }
      break;
    }
  }
  return rule;
}

}  // namespace dgh
