#pragma once

#include <Eigen/Dense>

namespace dgh {

/// Reference entities carrying quadrature rules. Segments, squares and cubes
/// live on [0,1]^n; the triangle is {x,y >= 0, x+y <= 1} and the tetrahedron
/// {x,y,z >= 0, x+y+z <= 1}.
enum class RefEntity { Point, Segment, Triangle, Quad, Tetra, Hexa };

int ref_entity_dim(RefEntity e);
double ref_entity_measure(RefEntity e);

struct QuadratureRule {
  RefEntity entity;
  Eigen::MatrixXd points;   // ref_dim x n
  Eigen::VectorXd weights;  // sum equals the reference measure
  int degree = 0;           // polynomials up to this total degree are exact
};

/// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-x)^alpha.
void gauss_jacobi(int n, int alpha, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Rule integrating polynomials of total degree <= degree exactly on the
/// reference entity. Simplex rules are conical (collapsed tensor) products.
QuadratureRule quadrature_rule(RefEntity entity, int degree);

}  // namespace dgh
