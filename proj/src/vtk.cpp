#include "dgh/vtk.hpp"

#include <fstream>
#include <sstream>

#include "dgh/assembly.hpp"
#include "dgh/errors.hpp"
#include "dgh/stabilization.hpp"

namespace dgh {

namespace {

int vtk_cell_type(CellType t) {
  switch (t) {
    case CellType::Triangle: return 5;
    case CellType::Quad: return 9;
    case CellType::Tetra: return 10;
    case CellType::Hexa: return 12;
    case CellType::Segment: return 3;
  }
  return 1;
}

template <int D>
void cell_fields(const Problem& pb, const Eigen::VectorXd& state, int e, double& von_mises,
                 double& min_eig) {
  const DGContext& ctx = *pb.ctx;
  const ElemOps& ops = ctx.elem_ops(e);
  const int nb = pb.dofs.nb;
  const FaceDataFn lookup = pb.dirichlet_lookup();
  const Eigen::MatrixXd Fv = ctx.def_grad_volume(state, pb.u_space, e, &lookup, 1.0);
  Eigen::VectorXd pv = Eigen::VectorXd::Zero(Fv.rows());
  if (pb.incompressible())
    pv = ops.vals.leftCols(nb) * state.segment(pb.dofs.p_offset(e), nb);

  double wsum = 0;
  double vm_acc = 0;
  min_eig = 1e300;
  for (int q = 0; q < Fv.rows(); ++q) {
    Eigen::Matrix<double, D, D> F;
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) F(a, b) = Fv(q, a * D + b);
    const Kinematics<double, D> kin(F);
    const double p = pb.incompressible() ? pv[q] : 0.0;
    if (kin.J > 0) {
      const Eigen::Matrix<double, D, D> P = first_piola<double, D>(pb.law, pb.material, kin, p);
      Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
      sigma.topLeftCorner(D, D) = (P * F.transpose()) / kin.J;
      const Eigen::Matrix3d dev = sigma - sigma.trace() / 3.0 * Eigen::Matrix3d::Identity();
      vm_acc += ops.quad.w[q] * std::sqrt(1.5 * (dev.array() * dev.array()).sum());
      wsum += ops.quad.w[q];
    }
    try {
      const auto A = elasticity_tensor<D>(pb.law, pb.material, kin, p);
      min_eig = std::min(min_eig, tensor_min_eigenvalue(A));
    } catch (const invalid_state_error&) {
    }
  }
  von_mises = wsum > 0 ? vm_acc / wsum : 0.0;
  if (min_eig > 1e299) min_eig = 0.0;
}

}  // namespace

std::string vtk_to_string(const Problem& pb, const Eigen::VectorXd& state,
                          const std::vector<double>* eta_face) {
  const Mesh& mesh = *pb.mesh;
  const DGContext& ctx = *pb.ctx;
  const int d = mesh.dim;
  const int nb = pb.dofs.nb;

  std::ostringstream os;
  os.precision(12);
  os << "# vtk DataFile Version 3.0\n";
  os << "deformed configuration\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";

  int npoints = 0;
  for (const auto& el : mesh.elements) npoints += static_cast<int>(el.verts.size());

  // evaluate u (and p) at the element corners; points are duplicated per cell
  std::vector<Eigen::Vector3d> disp(npoints);
  std::vector<double> press(npoints, 0.0);
  os << "POINTS " << npoints << " double\n";
  int pt = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    Eigen::Matrix3Xd corners(3, el.verts.size());
    for (size_t v = 0; v < el.verts.size(); ++v) corners.col(v) = mesh.vertices[el.verts[v]];
    Eigen::MatrixXd vals;
    ctx.basis(e).eval(corners, &vals, nullptr);
    const Eigen::MatrixXd uh = vals.leftCols(nb) * ctx.gather(state, pb.u_space, e);
    Eigen::VectorXd ph;
    if (pb.incompressible())
      ph = vals.leftCols(nb) * state.segment(pb.dofs.p_offset(e), nb);
    for (size_t v = 0; v < el.verts.size(); ++v) {
      Eigen::Vector3d u = Eigen::Vector3d::Zero();
      for (int c = 0; c < d; ++c) u[c] = uh(v, c);
      disp[pt] = u;
      if (pb.incompressible()) press[pt] = ph[v];
      const Eigen::Vector3d x = corners.col(v) + u;
      os << x.x() << " " << x.y() << " " << x.z() << "\n";
      ++pt;
    }
  }

  int listlen = 0;
  for (const auto& el : mesh.elements) listlen += 1 + static_cast<int>(el.verts.size());
  os << "CELLS " << mesh.n_elements() << " " << listlen << "\n";
  pt = 0;
  for (const auto& el : mesh.elements) {
    os << el.verts.size();
    for (size_t v = 0; v < el.verts.size(); ++v) os << " " << pt++;
    os << "\n";
  }
  os << "CELL_TYPES " << mesh.n_elements() << "\n";
  for (const auto& el : mesh.elements) os << vtk_cell_type(el.type) << "\n";

  os << "POINT_DATA " << npoints << "\n";
  os << "VECTORS displacement double\n";
  for (const auto& u : disp) os << u.x() << " " << u.y() << " " << u.z() << "\n";
  if (pb.incompressible()) {
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (double p : press) os << p << "\n";
  }

  os << "CELL_DATA " << mesh.n_elements() << "\n";
  os << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  std::vector<double> eig(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double vm = 0, me = 0;
    if (d == 2)
      cell_fields<2>(pb, state, e, vm, me);
    else
      cell_fields<3>(pb, state, e, vm, me);
    eig[e] = me;
    os << vm << "\n";
  }
  os << "SCALARS min_eigenvalue double 1\nLOOKUP_TABLE default\n";
  for (double v : eig) os << v << "\n";
  os << "SCALARS eta_face_max double 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double m = 0;
    if (eta_face)
      for (int f : mesh.element_faces[e])
        if (ctx.lifts(f)) m = std::max(m, (*eta_face)[f]);
    os << m << "\n";
  }
  return os.str();
}

void export_vtk(const Problem& pb, const Eigen::VectorXd& state,
                const std::vector<double>* eta_face, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open VTK output file '" + path + "'");
  out << vtk_to_string(pb, state, eta_face);
  if (!out) throw config_error("failed writing VTK output to '" + path + "'");
}

}  // namespace dgh
