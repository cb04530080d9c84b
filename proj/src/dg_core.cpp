#include "dgh/dg_core.hpp"

#include "dgh/errors.hpp"

namespace dgh {

DGContext::DGContext(const Mesh& mesh, const BoundaryPartition& partition, int degree,
                     int quad_degree)
    : mesh_(&mesh), partition_(&partition), k_(degree),
      quad_degree_(quad_degree > 0 ? quad_degree : 2 * degree + 2) {
  if (degree < 1) throw config_error("polynomial degree must be >= 1");
  nb_k_ = poly_space_dim(k_, mesh.dim);
  nb_kp1_ = poly_space_dim(k_ + 1, mesh.dim);

  const int ne = mesh.n_elements();
  basis_.reserve(ne);
  elem_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    elem_[e].quad = mesh.element_quadrature(e, quad_degree_);
    basis_.emplace_back(mesh.dim, k_ + 1, mesh.elements[e].centroid, mesh.elements[e].h,
                        elem_[e].quad);
    basis_[e].eval(elem_[e].quad.pts, &elem_[e].vals, &elem_[e].grads);
  }

  const int nf = mesh.n_faces();
  face_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    FaceOps& ops = face_[f];
    ops.quad = mesh.face_quadrature(f, quad_degree_);
    const Face& F = mesh.faces[f];
    const bool lifting_face = lifts(f);
    for (int s = 0; s < 2; ++s) {
      const int e = s == 0 ? F.left : F.right;
      if (e < 0) continue;
      FaceSideOps& side = ops.side[s];
      std::array<Eigen::MatrixXd, 3> g;
      basis_[e].eval(ops.quad.pts, &side.tr, lifting_face ? &g : nullptr);
      if (!lifting_face) continue;
      for (int d = 0; d < mesh.dim; ++d) side.grad_tr[d] = g[d].leftCols(nb_k_);
      const Eigen::MatrixXd trw = ops.quad.w.asDiagonal() * side.tr;
      side.K_k = side.tr.leftCols(nb_k_) * trw.leftCols(nb_k_).transpose();
      side.K_kp1 = side.tr * trw.transpose();
      side.E_k = elem_[e].vals.leftCols(nb_k_) * trw.leftCols(nb_k_).transpose();
    }
  }
}

Eigen::MatrixXd DGContext::gather(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                  int e) const {
  Eigen::MatrixXd out(space.nb, space.ncomp);
  for (int c = 0; c < space.ncomp; ++c)
    out.col(c) = coeffs.segment(space.offset(e, c), space.nb);
  return out;
}

Eigen::VectorXd DGContext::l2_project(const SpaceTimeFn& fn, double t,
                                      const BrokenSpace& space) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.size());
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const ElemOps& ops = elem_[e];
    const int nq = static_cast<int>(ops.quad.w.size());
    Eigen::MatrixXd fvals(nq, space.ncomp);
    for (int q = 0; q < nq; ++q) {
      const Eigen::Vector3d v = fn(ops.quad.pts.col(q), t);
      for (int c = 0; c < space.ncomp; ++c) fvals(q, c) = v[c];
    }
    const Eigen::MatrixXd mom =
        ops.vals.leftCols(space.nb).transpose() * ops.quad.w.asDiagonal() * fvals;
    for (int c = 0; c < space.ncomp; ++c) out.segment(space.offset(e, c), space.nb) = mom.col(c);
  }
  return out;
}

Eigen::VectorXd DGContext::l2_project_scalar(
    const std::function<double(const Eigen::Vector3d&)>& fn, const BrokenSpace& space) const {
  return l2_project(
      [&](const Eigen::Vector3d& x, double) { return Eigen::Vector3d(fn(x), 0, 0); }, 1.0,
      space);
}

Eigen::VectorXd DGContext::l2_project_face(const SpaceTimeFn& fn, double t,
                                           const FaceSpace& space) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.size());
  for (size_t i = 0; i < space.face_ids.size(); ++i) {
    const PhysQuad quad = mesh_->face_quadrature(space.face_ids[i], quad_degree_);
    const int nq = static_cast<int>(quad.w.size());
    Eigen::MatrixXd vals;
    space.bases[i].eval(quad.pts, vals);
    Eigen::MatrixXd fvals(nq, space.ncomp);
    for (int q = 0; q < nq; ++q) {
      const Eigen::Vector3d v = fn(quad.pts.col(q), t);
      for (int c = 0; c < space.ncomp; ++c) fvals(q, c) = v[c];
    }
    const Eigen::MatrixXd mom = vals.transpose() * quad.w.asDiagonal() * fvals;
    for (int c = 0; c < space.ncomp; ++c)
      out.segment(space.offset(static_cast<int>(i), c), space.nb) = mom.col(c);
  }
  return out;
}

PointValues DGContext::face_jump(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                 int f, int e, const FaceDataFn* dirichlet, double t) const {
  const Face& F = mesh_->faces[f];
  const FaceOps& ops = face_[f];
  const int s = side_of(f, e);
  const Eigen::MatrixXd own =
      ops.side[s].tr.leftCols(space.nb) * gather(coeffs, space, e);
  if (!F.boundary()) {
    const int other = s == 0 ? F.right : F.left;
    return own - ops.side[1 - s].tr.leftCols(space.nb) * gather(coeffs, space, other);
  }
  if (partition_->face_kind[f] != BCKind::DirichletNitsche)
    throw config_error("face_jump requested on a non-lifting boundary face");
  if (dirichlet == nullptr)
    throw config_error("missing Dirichlet data for a Nitsche boundary face");
  PointValues g(own.rows(), own.cols());
  for (int q = 0; q < own.rows(); ++q) {
    const Eigen::Vector3d v = (*dirichlet)(f, ops.quad.pts.col(q), t);
    for (int c = 0; c < own.cols(); ++c) g(q, c) = v[c];
  }
  return 2.0 * (own - g);
}

PointValues DGContext::face_average(const Eigen::VectorXd& coeffs, const BrokenSpace& space,
                                    int f) const {
  const Face& F = mesh_->faces[f];
  const FaceOps& ops = face_[f];
  const Eigen::MatrixXd left = ops.side[0].tr.leftCols(space.nb) * gather(coeffs, space, F.left);
  if (F.boundary()) return left;
  return 0.5 * (left + ops.side[1].tr.leftCols(space.nb) * gather(coeffs, space, F.right));
}

LiftedTensor DGContext::lift_jump(int f, int e, const PointValues& phi, int degree) const {
  const FaceOps& ops = face_[f];
  const int s = side_of(f, e);
  const int nb = poly_space_dim(degree, mesh_->dim);
  const double sign = s == 0 ? 1.0 : -1.0;  // stored normals point out of the left element
  LiftedTensor lift;
  lift.element = e;
  lift.degree = degree;
  const Eigen::MatrixXd moments = ops.side[s].tr.leftCols(nb).transpose() *
                                  ops.quad.w.asDiagonal();  // nb x nfq
  for (int a = 0; a < mesh_->dim; ++a) {
    const Eigen::VectorXd na = sign * ops.quad.normals.row(a).transpose();
    lift.coef[a] = 0.5 * moments * na.asDiagonal() * phi;
  }
  return lift;
}

Eigen::MatrixXd DGContext::eval_lifting(const LiftedTensor& lift, int f_or_e, int kind) const {
  const int d = mesh_->dim;
  const int nb = poly_space_dim(lift.degree, d);
  const Eigen::MatrixXd* vals = nullptr;
  Eigen::MatrixXd tr;
  if (kind == 0) {
    vals = &elem_[lift.element].vals;
  } else {
    tr = face_[f_or_e].side[side_of(f_or_e, lift.element)].tr;
    vals = &tr;
  }
  const int np = static_cast<int>(vals->rows());
  Eigen::MatrixXd out(np, d * d);
  for (int a = 0; a < d; ++a)
    out.middleCols(a * d, d) = vals->leftCols(nb) * lift.coef[a];
  return out;
}

Eigen::MatrixXd DGContext::discrete_gradient(const Eigen::VectorXd& coeffs,
                                             const BrokenSpace& space, int e,
                                             const FaceDataFn* dirichlet, double t) const {
  const int d = mesh_->dim;
  const ElemOps& ops = elem_[e];
  const int nq = static_cast<int>(ops.quad.w.size());
  const Eigen::MatrixXd U = gather(coeffs, space, e);
  Eigen::MatrixXd out(nq, d * d);
  for (int j = 0; j < d; ++j) {
    const Eigen::MatrixXd dj = ops.grads[j].leftCols(space.nb) * U;  // nq x d
    for (int a = 0; a < d; ++a) out.col(a * d + j) = dj.col(a);
  }
  for (int f : mesh_->element_faces[e]) {
    if (!lifts(f)) continue;
    const PointValues jump = face_jump(coeffs, space, f, e, dirichlet, t);
    const FaceOps& fops = face_[f];
    const int s = side_of(f, e);
    const double sign = s == 0 ? 1.0 : -1.0;
    for (int a = 0; a < d; ++a) {
      const Eigen::VectorXd na = sign * fops.quad.normals.row(a).transpose();
      // R_ab at element points = 1/2 E_k * (n_a .* jump_b)
      const Eigen::MatrixXd r = 0.5 * fops.side[s].E_k * (na.asDiagonal() * jump);
      for (int b = 0; b < d; ++b) out.col(a * d + b) -= r.col(b);
    }
  }
  return out;
}

Eigen::MatrixXd DGContext::def_grad_volume(const Eigen::VectorXd& coeffs,
                                           const BrokenSpace& space, int e,
                                           const FaceDataFn* dirichlet, double t) const {
  const int d = mesh_->dim;
  Eigen::MatrixXd out = discrete_gradient(coeffs, space, e, dirichlet, t);
  for (int a = 0; a < d; ++a) out.col(a * d + a).array() += 1.0;
  return out;
}

Eigen::MatrixXd DGContext::def_grad_face(const Eigen::VectorXd& coeffs,
                                         const BrokenSpace& space, int e, int f,
                                         const FaceDataFn* dirichlet, double t) const {
  const int d = mesh_->dim;
  const FaceOps& fops = face_[f];
  const int s = side_of(f, e);
  const int nq = static_cast<int>(fops.quad.w.size());
  const Eigen::MatrixXd U = gather(coeffs, space, e);
  Eigen::MatrixXd out(nq, d * d);
  for (int j = 0; j < d; ++j) {
    const Eigen::MatrixXd dj = fops.side[s].grad_tr[j] * U;
    for (int a = 0; a < d; ++a) out.col(a * d + j) = dj.col(a);
  }
  const PointValues jump = face_jump(coeffs, space, f, e, dirichlet, t);
  const double sign = s == 0 ? 1.0 : -1.0;
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd na = sign * fops.quad.normals.row(a).transpose();
    const Eigen::MatrixXd r = 0.5 * fops.side[s].K_kp1 * (na.asDiagonal() * jump);
    for (int b = 0; b < d; ++b) out.col(a * d + b) -= r.col(b);
  }
  for (int a = 0; a < d; ++a) out.col(a * d + a).array() += 1.0;
  return out;
}

}  // namespace dgh
