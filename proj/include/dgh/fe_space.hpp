#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "dgh/mesh.hpp"

namespace dgh {

/// dim P^degree in `dim` variables.
int poly_space_dim(int degree, int dim);

/// Orthonormal polynomial basis on one element: monomials in physical
/// coordinates, centered at the centroid and scaled by the diameter, then
/// orthonormalized against the element quadrature inner product (so the
/// local mass matrix is the identity).
class ElementBasis {
public:
  ElementBasis() = default;
  ElementBasis(int dim, int max_degree, const Eigen::Vector3d& center, double scale,
               const PhysQuad& quad);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  int size_at(int degree) const { return poly_space_dim(degree, dim_); }

  void eval(const Eigen::Matrix3Xd& pts, Eigen::MatrixXd* vals,
            std::array<Eigen::MatrixXd, 3>* grads) const;

private:
  int dim_ = 0;
  int max_degree_ = 0;
  Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
  double scale_ = 1;
  std::vector<std::array<int, 3>> exps_;
  Eigen::MatrixXd comb_;  // phi = comb * monomials
};

/// Orthonormal polynomial basis on a boundary face, in face-local tangential
/// coordinates (a 1D arc parameter in 2D, a 2D tangent frame in 3D).
class FaceBasis {
public:
  FaceBasis() = default;
  FaceBasis(int mesh_dim, int degree, const Eigen::Vector3d& center, double scale,
            const Eigen::Vector3d& normal, const PhysQuad& quad);

  int size() const { return static_cast<int>(exps_.size()); }
  void eval(const Eigen::Matrix3Xd& pts, Eigen::MatrixXd& vals) const;

private:
  int tdim_ = 0;
  Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
  double scale_ = 1;
  Eigen::Matrix<double, 3, 2> frame_ = Eigen::Matrix<double, 3, 2>::Zero();
  std::vector<std::array<int, 2>> exps_;
  Eigen::MatrixXd comb_;
};

/// Element-wise broken polynomial space P^k(T_h)^ncomp with per-element
/// coefficient blocks (component-major within an element).
struct BrokenSpace {
  int degree = 1;
  int ncomp = 1;
  int nb = 0;          // scalar functions per element
  int n_elements = 0;

  BrokenSpace() = default;
  BrokenSpace(const Mesh& mesh, int k, int ncomponents)
      : degree(k), ncomp(ncomponents), nb(poly_space_dim(k, mesh.dim)),
        n_elements(mesh.n_elements()) {}
  int block_size() const { return ncomp * nb; }
  int size() const { return n_elements * block_size(); }
  int offset(int e) const { return e * block_size(); }
  int offset(int e, int comp) const { return offset(e) + comp * nb; }
};

/// Face-wise polynomial space for Lagrange multipliers over the faces listed
/// in `face_ids` (d vector components per face).
struct FaceSpace {
  int degree = 1;
  int ncomp = 1;
  int nb = 0;  // scalar functions per face
  std::vector<int> face_ids;
  std::vector<FaceBasis> bases;  // aligned with face_ids

  FaceSpace() = default;
  FaceSpace(const Mesh& mesh, const std::vector<int>& faces, int k, int quad_degree);
  int block_size() const { return ncomp * nb; }
  int size() const { return static_cast<int>(face_ids.size()) * block_size(); }
  int offset(int local_face) const { return local_face * block_size(); }
  int offset(int local_face, int comp) const { return offset(local_face) + comp * nb; }
};

}  // namespace dgh
