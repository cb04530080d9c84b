#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "dgh/boundary.hpp"
#include "dgh/fe_space.hpp"
#include "dgh/mesh.hpp"

namespace dgh {

/// Vector-valued data sampled on quadrature points, one row per point.
using PointValues = Eigen::MatrixXd;

/// Pointwise function of (position, loading fraction).
using SpaceTimeFn = std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)>;

/// Dirichlet data lookup by face: (face id, position, loading fraction).
using FaceDataFn = std::function<Eigen::Vector3d(int, const Eigen::Vector3d&, double)>;

/// Tensor-valued polynomial R in P^l(T)^{dxd} produced by the jump lifting
/// operator; coefficients are stored against the element's orthonormal basis,
/// coef[a] is an (nb x d) matrix with entry (i, b) multiplying basis i for the
/// tensor component (a, b).
struct LiftedTensor {
  int element = -1;
  int degree = 0;
  std::array<Eigen::MatrixXd, 3> coef;
};

/// Per-side cached face data: basis traces, trace gradients and the lifting
/// kernels used by the BR2 operators. All bases are physical polynomials, so
/// both sides are evaluated at the same physical quadrature points.
struct FaceSideOps {
  Eigen::MatrixXd tr;                      // nfq x nb(k+1)
  std::array<Eigen::MatrixXd, 3> grad_tr;  // each nfq x nb(k)
  // kernels with the quadrature weight folded into the second index:
  Eigen::MatrixXd K_k;    // nfq x nfq   lifting of degree k evaluated on the face
  Eigen::MatrixXd K_kp1;  // nfq x nfq   lifting of degree k+1 on the face
  Eigen::MatrixXd E_k;    // neq x nfq   lifting of degree k at element points
};

struct FaceOps {
  PhysQuad quad;
  std::array<FaceSideOps, 2> side;  // [0] = left element, [1] = right
};

struct ElemOps {
  PhysQuad quad;
  Eigen::MatrixXd vals;                    // neq x nb(k+1)
  std::array<Eigen::MatrixXd, 3> grads;    // each neq x nb(k+1)
};

/// Precomputed discrete setting for one (mesh, partition, degree) triple.
/// Everything is immutable after construction and reentrant.
class DGContext {
public:
  DGContext(const Mesh& mesh, const BoundaryPartition& partition, int degree,
            int quad_degree = -1);

  const Mesh& mesh() const { return *mesh_; }
  const BoundaryPartition& partition() const { return *partition_; }
  int degree() const { return k_; }
  int quad_degree() const { return quad_degree_; }
  int nb_k() const { return nb_k_; }
  int nb_kp1() const { return nb_kp1_; }

  const ElementBasis& basis(int e) const { return basis_[e]; }
  const ElemOps& elem_ops(int e) const { return elem_[e]; }
  const FaceOps& face_ops(int f) const { return face_[f]; }
  /// 0 if e is the left element of f, 1 otherwise.
  int side_of(int f, int e) const { return mesh_->faces[f].left == e ? 0 : 1; }
  bool lifts(int f) const {
    const BCKind kind = partition_->face_kind[f];
    return kind == BCKind::Internal || kind == BCKind::DirichletNitsche;
  }

  /// Element-wise coefficient block of a broken field, one column per
  /// component (nb_k x ncomp).
  Eigen::MatrixXd gather(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                         int e) const;

  /// L2 projection onto the broken space (orthonormal basis: plain moments).
  Eigen::VectorXd l2_project(const SpaceTimeFn& fn, double t, const BrokenSpace& space) const;
  Eigen::VectorXd l2_project_scalar(const std::function<double(const Eigen::Vector3d&)>& fn,
                                    const BrokenSpace& space) const;
  /// L2 projection onto a multiplier face space.
  Eigen::VectorXd l2_project_face(const SpaceTimeFn& fn, double t, const FaceSpace& space) const;

  /// Jump of a broken field across face f seen from element e, at the face
  /// quadrature points (nfq x d). Nitsche faces use 2 (v|_T - g_D) and require
  /// dirichlet data; internal faces v|_T - v|_T'.
  PointValues face_jump(const Eigen::VectorXd& coeffs, const BrokenSpace& space, int f, int e,
                        const FaceDataFn* dirichlet = nullptr, double t = 1.0) const;

  /// Average of a broken field on face f (nfq x ncomp); one-sided on boundary.
  PointValues face_average(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                           int f) const;

  /// Jump lifting: coefficients of R^l_{FT}(phi) from values of phi at the
  /// face quadrature points (nfq x d).
  LiftedTensor lift_jump(int f, int e, const PointValues& phi, int degree) const;

  /// Evaluate a lifted tensor at the element (kind=0) or face (kind=1)
  /// quadrature points; returns per-point d x d matrices flattened row-major
  /// into a (npts x d*d) matrix.
  Eigen::MatrixXd eval_lifting(const LiftedTensor& lift, int f_or_e, int kind) const;

  /// Local discrete gradient G^k_T(v) at the element quadrature points
  /// (neq x d*d, row-major tensor components).
  Eigen::MatrixXd discrete_gradient(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                    int e, const FaceDataFn* dirichlet = nullptr,
                                    double t = 1.0) const;

  /// Volume discrete deformation gradient F^k_T = G^k_T + I (neq x d*d).
  Eigen::MatrixXd def_grad_volume(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                  int e, const FaceDataFn* dirichlet = nullptr,
                                  double t = 1.0) const;

  /// Face discrete deformation gradient F^{k+1}_{TF} at the face quadrature
  /// points (nfq x d*d).
  Eigen::MatrixXd def_grad_face(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                int e, int f, const FaceDataFn* dirichlet = nullptr,
                                double t = 1.0) const;

private:
  const Mesh* mesh_;
  const BoundaryPartition* partition_;
  int k_;
  int quad_degree_;
  int nb_k_ = 0;
  int nb_kp1_ = 0;
  std::vector<ElementBasis> basis_;
  std::vector<ElemOps> elem_;
  std::vector<FaceOps> face_;
};

}  // namespace dgh
