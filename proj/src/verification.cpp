#include "dgh/verification.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

ManufacturedCase ManufacturedCase::compressible(LawTag law, const LameParams& prm) {
  ManufacturedCase mc;
  mc.kind_ = Kind::Compressible;
  mc.law_ = law;
  mc.prm_ = prm;
  return mc;
}

ManufacturedCase ManufacturedCase::incompressible(LawTag law, const LameParams& prm) {
  ManufacturedCase mc;
  mc.kind_ = Kind::Incompressible;
  mc.law_ = law;
  mc.prm_ = prm;
  return mc;
}

template <typename S>
Eigen::Matrix<S, 3, 1> ManufacturedCase::displacement(const Eigen::Matrix<S, 3, 1>& X) const {
  using std::sin;
  Eigen::Matrix<S, 3, 1> u;
  if (kind_ == Kind::Compressible) {
    const double il = 1.0 / prm_.lambda;
    const double shrink = (alpha_ + gamma_ + alpha_ * gamma_) / (1 + alpha_ + gamma_ + alpha_ * gamma_);
    u[0] = (il + alpha_) * X[0] + alpha_ * sin(S(M_PI) * X[1]);
    u[1] = -(il + shrink) * X[1];
    u[2] = (il + gamma_) * X[2] + gamma_ * sin(S(M_PI) * X[0]);
  } else {
    const S sy = sin(X[1]);
    const S sz = sin(X[2]);
    u[0] = (a_ * a_ - 1.0) * X[0] + S(0.5) * b_ * sy * sy + S(0.5) * c_ * sz * sz;
    u[1] = (1.0 / a_ - 1.0) * X[1];
    u[2] = (1.0 / a_ - 1.0) * X[2];
  }
  return u;
}

template <typename S>
Eigen::Matrix<S, 3, 3> ManufacturedCase::deformation_gradient(
    const Eigen::Matrix<S, 3, 1>& X) const {
  using std::cos;
  using std::sin;
  Eigen::Matrix<S, 3, 3> F = Eigen::Matrix<S, 3, 3>::Identity();
  if (kind_ == Kind::Compressible) {
    const double il = 1.0 / prm_.lambda;
    const double shrink = (alpha_ + gamma_ + alpha_ * gamma_) / (1 + alpha_ + gamma_ + alpha_ * gamma_);
    F(0, 0) += il + alpha_;
    F(0, 1) += alpha_ * S(M_PI) * cos(S(M_PI) * X[1]);
    F(1, 1) += -(il + shrink);
    F(2, 2) += il + gamma_;
    F(2, 0) += gamma_ * S(M_PI) * cos(S(M_PI) * X[0]);
  } else {
    F(0, 0) += a_ * a_ - 1.0;
    F(0, 1) += b_ * sin(X[1]) * cos(X[1]);
    F(0, 2) += c_ * sin(X[2]) * cos(X[2]);
    F(1, 1) += 1.0 / a_ - 1.0;
    F(2, 2) += 1.0 / a_ - 1.0;
  }
  return F;
}

template <typename S>
S ManufacturedCase::pressure_impl(const Eigen::Matrix<S, 3, 1>& X) const {
  // p = tr(sigma)/3 with sigma = J^{-1} F S F^T; closed forms below match the
  // direct evaluation and keep the complex-step path cheap
  using std::cos;
  using std::sin;
  const double mu = prm_.mu, lam = prm_.lambda;
  const S cy = cos(X[1]), sy = sin(X[1]);
  const S cz = cos(X[2]), sz = sin(X[2]);
  if (law_ == LawTag::NHK_I) {
    return (c_ * c_ * cz * cz * sz * sz * mu + b_ * b_ * cy * cy * sy * sy * mu +
            std::pow(a_, 4) * mu + S(2.0) * mu / (a_ * a_)) /
           S(3.0);
  }
  // SVK-I
  const S cy2 = cy * cy, sy2 = sy * sy, cz2 = cz * cz, sz2 = sz * sz;
  const S mu_part = S(2.0) * cz2 * cz2 * sz2 * sz2 +
                    (S(4.0) * cy2 * sy2 + S(6.0)) * cz2 * sz2 +
                    S(2.0) * cy2 * cy2 * sy2 * sy2 + S(6.0) * cy2 * sy2;
  const S lam_part = cz2 * cz2 * sz2 * sz2 + (S(2.0) * cy2 * sy2 + S(3.0)) * cz2 * sz2 +
                     cy2 * cy2 * sy2 * sy2 + S(3.0) * cy2 * sy2;
  return (mu * mu_part + lam * lam_part) / S(6.0);
}

double ManufacturedCase::pressure(const Eigen::Vector3d& X) const {
  if (kind_ != Kind::Incompressible)
    throw config_error("exact pressure is defined for the incompressible case only");
  return pressure_impl<double>(X);
}

template <typename S>
Eigen::Matrix<S, 3, 3> ManufacturedCase::piola(const Eigen::Matrix<S, 3, 1>& X) const {
  const Kinematics<S, 3> kin(deformation_gradient(X));
  const S p = kind_ == Kind::Incompressible ? pressure_impl<S>(X) : S(0);
  return first_piola<S, 3>(law_, prm_, kin, p);
}

Eigen::Vector3d ManufacturedCase::forcing(const Eigen::Vector3d& X) const {
  using C = std::complex<double>;
  const double h = 1e-40;
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  for (int j = 0; j < 3; ++j) {
    Eigen::Matrix<C, 3, 1> Xc = X.cast<C>();
    Xc[j] += C(0.0, h);
    const Eigen::Matrix<C, 3, 3> P = piola<C>(Xc);
    for (int i = 0; i < 3; ++i) f[i] -= P(i, j).imag() / h;
  }
  return f;
}

Eigen::Vector3d ManufacturedCase::forcing_fd(const Eigen::Vector3d& X, double h) const {
  auto div_at = [&](double step) {
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d Xp = X, Xm = X;
      Xp[j] += step;
      Xm[j] -= step;
      const Eigen::Matrix3d Pp = piola<double>(Xp);
      const Eigen::Matrix3d Pm = piola<double>(Xm);
      for (int i = 0; i < 3; ++i) f[i] -= (Pp(i, j) - Pm(i, j)) / (2 * step);
    }
    return f;
  };
  // one Richardson step: (4 D(h/2) - D(h)) / 3
  return (4.0 * div_at(h / 2) - div_at(h)) / 3.0;
}

Eigen::Vector3d ManufacturedCase::traction(const Eigen::Vector3d& X,
                                           const Eigen::Vector3d& N) const {
  return piola<double>(X) * N;
}

template Eigen::Matrix<double, 3, 1> ManufacturedCase::displacement<double>(
    const Eigen::Matrix<double, 3, 1>&) const;
template Eigen::Matrix<std::complex<double>, 3, 1>
ManufacturedCase::displacement<std::complex<double>>(
    const Eigen::Matrix<std::complex<double>, 3, 1>&) const;
template Eigen::Matrix<double, 3, 3> ManufacturedCase::deformation_gradient<double>(
    const Eigen::Matrix<double, 3, 1>&) const;
template Eigen::Matrix<std::complex<double>, 3, 3>
ManufacturedCase::deformation_gradient<std::complex<double>>(
    const Eigen::Matrix<std::complex<double>, 3, 1>&) const;
template Eigen::Matrix<double, 3, 3> ManufacturedCase::piola<double>(
    const Eigen::Matrix<double, 3, 1>&) const;

ErrorNorms error_norms(const Problem& pb, const Eigen::VectorXd& state,
                       const ManufacturedCase& mc) {
  const Mesh& mesh = *pb.mesh;
  const DGContext& ctx = *pb.ctx;
  const int d = mesh.dim;
  const int nb = pb.dofs.nb;
  const int err_degree = 2 * ctx.degree() + 4;

  double eu2 = 0, egu2 = 0, ep2 = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const PhysQuad quad = mesh.element_quadrature(e, err_degree);
    Eigen::MatrixXd vals;
    std::array<Eigen::MatrixXd, 3> grads;
    ctx.basis(e).eval(quad.pts, &vals, &grads);
    const Eigen::MatrixXd U = ctx.gather(state, pb.u_space, e);
    const Eigen::MatrixXd uh = vals.leftCols(nb) * U;  // nq x d
    std::array<Eigen::MatrixXd, 3> guh;
    for (int j = 0; j < d; ++j) guh[j] = grads[j].leftCols(nb) * U;
    Eigen::VectorXd ph;
    if (pb.incompressible())
      ph = vals.leftCols(nb) * state.segment(pb.dofs.p_offset(e), nb);

    for (int q = 0; q < quad.w.size(); ++q) {
      const Eigen::Vector3d X = quad.pts.col(q);
      const Eigen::Vector3d uex = mc.displacement<double>(X);
      const Eigen::Matrix3d Fex = mc.deformation_gradient<double>(X);
      const double w = quad.w[q];
      for (int c = 0; c < d; ++c) {
        const double du = uh(q, c) - uex[c];
        eu2 += w * du * du;
        for (int j = 0; j < d; ++j) {
          const double dg = guh[j](q, c) - (Fex(c, j) - (c == j ? 1.0 : 0.0));
          egu2 += w * dg * dg;
        }
      }
      if (pb.incompressible()) {
        const double dp = ph[q] - mc.pressure(X);
        ep2 += w * dp * dp;
      }
    }
  }
  ErrorNorms out;
  out.u = std::sqrt(eu2);
  out.grad_u = std::sqrt(egu2);
  out.p = std::sqrt(ep2);
  return out;
}

std::vector<double> convergence_rates(const std::vector<double>& errors,
                                      const std::vector<double>& h) {
  if (errors.size() != h.size()) throw config_error("rate computation needs matching sizes");
  if (errors.size() < 2) throw config_error("rate computation needs at least two levels");
  std::vector<double> rates;
  for (size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] <= 0 || errors[i + 1] <= 0) {
      rates.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    rates.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  return rates;
}

}  // namespace dgh

ProblemBundle make_manufactured_problem(const ManufacturedCase& mc, int cells_per_axis,
                                        int degree, BCKind dirichlet_mech,
                                        const StabilizationParams& stab, int quad_degree) {
  ProblemBundle b;
  b.mesh = std::make_unique<Mesh>(build_cartesian_mesh(
      3, {cells_per_axis, cells_per_axis, cells_per_axis}, Eigen::Vector3d::Zero(),
      Eigen::Vector3d::Ones()));

  std::vector<BoundaryRegionSpec> regions(2);
  regions[0].name = "dirichlet";
  regions[0].kind = dirichlet_mech;
  regions[0].matches = [](const Eigen::Vector3d& c, const std::string&) {
    return c.z() < 1.0 - 1e-9;
  };
  regions[1].name = "neumann";
  regions[1].kind = BCKind::Neumann;
  regions[1].matches = [](const Eigen::Vector3d& c, const std::string&) {
    return c.z() >= 1.0 - 1e-9;
  };
  b.partition =
      std::make_unique<BoundaryPartition>(classify_boundary(*b.mesh, regions));
  b.ctx = std::make_unique<DGContext>(*b.mesh, *b.partition, degree, quad_degree);

  Problem& pb = b.problem;
  pb.mesh = b.mesh.get();
  pb.partition = b.partition.get();
  pb.ctx = b.ctx.get();
  pb.regime = mc.regime();
  pb.law = mc.law();
  pb.material = mc.material();
  pb.stab = stab;
  pb.body_force = [mc](const Eigen::Vector3d& X, double t) -> Eigen::Vector3d {
    return t * mc.forcing(X);
  };
  pb.regions.resize(2);
  pb.regions[0].name = "dirichlet";
  pb.regions[0].kind = dirichlet_mech;
  pb.regions[0].value = [mc](const Eigen::Vector3d& X, double t) -> Eigen::Vector3d {
    return t * mc.displacement<double>(X);
  };
  pb.regions[1].name = "neumann";
  pb.regions[1].kind = BCKind::Neumann;
  pb.regions[1].traction = [mc](const Eigen::Vector3d& X, const Eigen::Vector3d& n,
                                double t) -> Eigen::Vector3d {
    return t * mc.traction(X, n);
  };
  pb.init_spaces();
  return b;
}

ConvergenceTable run_manufactured_convergence(const ManufacturedCase& mc, int degree,
                                              BCKind dirichlet_mech,
                                              const std::vector<int>& cells_per_axis,
                                              int increments, const NewtonSettings& settings,
                                              const StabilizationParams& stab) {
  ConvergenceTable table;
  std::vector<double> h, eu, egu, ep;
  for (int cells : cells_per_axis) {
    ProblemBundle b = make_manufactured_problem(mc, cells, degree, dirichlet_mech, stab);
    const SolveResult res = incremental_solve(b.problem, increments, settings);
    ConvergenceLevel lvl;
    lvl.cards = b.mesh->n_elements();
    lvl.h = b.mesh->h_max();
    lvl.converged = res.report.converged;
    lvl.increments_used = increments;
    if (res.report.converged) lvl.err = error_norms(b.problem, res.state, mc);
    table.levels.push_back(lvl);
    if (res.report.converged) {
      h.push_back(lvl.h);
      eu.push_back(lvl.err.u);
      egu.push_back(lvl.err.grad_u);
      ep.push_back(lvl.err.p);
    }
  }
  if (h.size() >= 2) {
    table.rate_u = convergence_rates(eu, h);
    table.rate_grad_u = convergence_rates(egu, h);
    if (mc.regime() == Regime::Incompressible) table.rate_p = convergence_rates(ep, h);
  }
  return table;
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream os;
  os << "cards,error_u,rate_u,error_gradu,rate_gradu,error_p,rate_p\n";
  os.precision(6);
  os << std::scientific;
  for (size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    auto rate = [&](const std::vector<double>& r) -> std::string {
      if (i == 0 || i - 1 >= r.size()) return "-";
      std::ostringstream rs;
      rs.precision(2);
      rs << std::fixed << r[i - 1];
      return rs.str();
    };
    if (!l.converged) {
      os << l.cards << ",failed,-,failed,-,failed,-\n";
      continue;
    }
    os << l.cards << "," << l.err.u << "," << rate(rate_u) << "," << l.err.grad_u << ","
       << rate(rate_grad_u) << ",";
    if (l.err.p > 0 || !rate_p.empty())
      os << l.err.p << "," << rate(rate_p) << "\n";
    else
      os << "-,-\n";
  }
  return os.str();
}
