#include "dgh/fe_space.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "dgh/errors.hpp"

namespace dgh {

int poly_space_dim(int degree, int dim) {
  int num = 1, den = 1;
  for (int i = 1; i <= dim; ++i) {
    num *= degree + i;
    den *= i;
  }
  return num / den;
}

namespace {

std::vector<std::array<int, 3>> graded_exponents(int dim, int max_degree) {
  std::vector<std::array<int, 3>> exps;
  for (int total = 0; total <= max_degree; ++total) {
    if (dim == 2) {
      for (int i = total; i >= 0; --i) exps.push_back({i, total - i, 0});
    } else {
      for (int i = total; i >= 0; --i)
        for (int j = total - i; j >= 0; --j) exps.push_back({i, j, total - i - j});
    }
  }
  return exps;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& monomial_vals,
                               const Eigen::VectorXd& w) {
  const Eigen::MatrixXd gram =
      monomial_vals.transpose() * w.asDiagonal() * monomial_vals;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw numeric_error("singular local mass matrix (degenerate element map?)");
  const int n = static_cast<int>(gram.rows());
  return llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace

ElementBasis::ElementBasis(int dim, int max_degree, const Eigen::Vector3d& center,
                           double scale, const PhysQuad& quad)
    : dim_(dim), max_degree_(max_degree), center_(center), scale_(scale),
      exps_(graded_exponents(dim, max_degree)) {
  const int nq = static_cast<int>(quad.w.size());
  const int nm = size();
  Eigen::MatrixXd vals(nq, nm);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Vector3d s = (quad.pts.col(q) - center_) / scale_;
    for (int m = 0; m < nm; ++m) {
      double v = 1;
      for (int d = 0; d < dim_; ++d)
        for (int p = 0; p < exps_[m][d]; ++p) v *= s[d];
      vals(q, m) = v;
    }
  }
  comb_ = orthonormalize(vals, quad.w);
}

void ElementBasis::eval(const Eigen::Matrix3Xd& pts, Eigen::MatrixXd* vals,
                        std::array<Eigen::MatrixXd, 3>* grads) const {
  const int nq = static_cast<int>(pts.cols());
  const int nm = size();
  Eigen::MatrixXd mono(nq, nm);
  std::array<Eigen::MatrixXd, 3> dmono;
  if (grads)
    for (int d = 0; d < dim_; ++d) dmono[d].resize(nq, nm);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Vector3d s = (pts.col(q) - center_) / scale_;
    for (int m = 0; m < nm; ++m) {
      // powers per direction, plus the derivative factor for each direction
      double v = 1;
      for (int d = 0; d < dim_; ++d)
        for (int p = 0; p < exps_[m][d]; ++p) v *= s[d];
      mono(q, m) = v;
      if (grads) {
        for (int d = 0; d < dim_; ++d) {
          const int a = exps_[m][d];
          if (a == 0) {
            dmono[d](q, m) = 0;
            continue;
          }
          double g = a / scale_;
          for (int dd = 0; dd < dim_; ++dd) {
            const int pw = dd == d ? exps_[m][dd] - 1 : exps_[m][dd];
            for (int p = 0; p < pw; ++p) g *= s[dd];
          }
          dmono[d](q, m) = g;
        }
      }
    }
  }
  if (vals) *vals = mono * comb_.transpose();
  if (grads)
    for (int d = 0; d < dim_; ++d) (*grads)[d] = dmono[d] * comb_.transpose();
}

FaceBasis::FaceBasis(int mesh_dim, int degree, const Eigen::Vector3d& center, double scale,
                     const Eigen::Vector3d& normal, const PhysQuad& quad)
    : tdim_(mesh_dim - 1), center_(center), scale_(scale) {
  if (tdim_ == 1) {
    frame_.col(0) = Eigen::Vector3d(-normal.y(), normal.x(), 0.0);
    for (int total = 0; total <= degree; ++total) exps_.push_back({total, 0});
  } else {
    // any orthonormal tangent pair will do
    Eigen::Vector3d t0 = normal.cross(Eigen::Vector3d::UnitX());
    if (t0.norm() < 0.5) t0 = normal.cross(Eigen::Vector3d::UnitY());
    t0.normalize();
    frame_.col(0) = t0;
    frame_.col(1) = normal.cross(t0).normalized();
    for (int total = 0; total <= degree; ++total)
      for (int i = total; i >= 0; --i) exps_.push_back({i, total - i});
  }
  const int nq = static_cast<int>(quad.w.size());
  const int nm = size();
  Eigen::MatrixXd vals(nq, nm);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Vector3d rel = (quad.pts.col(q) - center_) / scale_;
    const double s0 = frame_.col(0).dot(rel);
    const double s1 = tdim_ == 2 ? frame_.col(1).dot(rel) : 0.0;
    for (int m = 0; m < nm; ++m)
      vals(q, m) = std::pow(s0, exps_[m][0]) * std::pow(s1, exps_[m][1]);
  }
  comb_ = orthonormalize(vals, quad.w);
}

void FaceBasis::eval(const Eigen::Matrix3Xd& pts, Eigen::MatrixXd& vals) const {
  const int nq = static_cast<int>(pts.cols());
  const int nm = size();
  Eigen::MatrixXd mono(nq, nm);
  for (int q = 0; q < nq; ++q) {
    const Eigen::Vector3d rel = (pts.col(q) - center_) / scale_;
    const double s0 = frame_.col(0).dot(rel);
    const double s1 = tdim_ == 2 ? frame_.col(1).dot(rel) : 0.0;
    for (int m = 0; m < nm; ++m)
      mono(q, m) = std::pow(s0, exps_[m][0]) * std::pow(s1, exps_[m][1]);
  }
  vals = mono * comb_.transpose();
}

FaceSpace::FaceSpace(const Mesh& mesh, const std::vector<int>& faces, int k, int quad_degree)
    : degree(k), ncomp(mesh.dim), nb(poly_space_dim(k, mesh.dim - 1)), face_ids(faces) {
  bases.reserve(faces.size());
  for (int f : faces) {
    const Face& F = mesh.faces[f];
    bases.emplace_back(mesh.dim, k, F.centroid, F.h, F.normal,
                       mesh.face_quadrature(f, quad_degree));
  }
}

}  // namespace dgh
