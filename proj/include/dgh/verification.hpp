#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dgh/dg_core.hpp"
#include "dgh/hyperelastic.hpp"
#include "dgh/problem.hpp"
#include "dgh/solver.hpp"

namespace dgh {

/// 3D manufactured solutions used by the convergence studies: a smooth
/// compressible field (linear stretch plus sinusoidal shear), and an
/// isochoric field with det F identically one for the incompressible regime.
class ManufacturedCase {
public:
  enum class Kind { Compressible, Incompressible };

  static ManufacturedCase compressible(LawTag law, const LameParams& prm);
  static ManufacturedCase incompressible(LawTag law, const LameParams& prm);

  Kind kind() const { return kind_; }
  Regime regime() const {
    return kind_ == Kind::Compressible ? Regime::Compressible : Regime::Incompressible;
  }
  LawTag law() const { return law_; }
  const LameParams& material() const { return prm_; }

  template <typename S>
  Eigen::Matrix<S, 3, 1> displacement(const Eigen::Matrix<S, 3, 1>& X) const;

  /// Analytic deformation gradient (grad u + I).
  template <typename S>
  Eigen::Matrix<S, 3, 3> deformation_gradient(const Eigen::Matrix<S, 3, 1>& X) const;

  /// Exact hydrostatic pressure p = tr(sigma)/3 with sigma = J^{-1} F S F^T
  /// (incompressible case only).
  double pressure(const Eigen::Vector3d& X) const;

  /// First Piola-Kirchhoff stress of the exact state (pressure included for
  /// the incompressible case).
  template <typename S>
  Eigen::Matrix<S, 3, 3> piola(const Eigen::Matrix<S, 3, 1>& X) const;

  /// rho f+ = -Div P(X), computed by complex-step differentiation of the
  /// closed-form stress field (machine-precision accurate).
  Eigen::Vector3d forcing(const Eigen::Vector3d& X) const;

  /// Same divergence from Richardson-extrapolated central differences; used
  /// to cross-check the complex-step path.
  Eigen::Vector3d forcing_fd(const Eigen::Vector3d& X, double h = 1e-4) const;

  /// Exact traction P N on a plane with outward normal N.
  Eigen::Vector3d traction(const Eigen::Vector3d& X, const Eigen::Vector3d& N) const;

private:
  Kind kind_ = Kind::Compressible;
  LawTag law_ = LawTag::NHK_C;
  LameParams prm_;
  // compressible-field constants
  double alpha_ = 0.1, gamma_ = 0.1;
  // incompressible-field constants
  double a_ = 1.1, b_ = 1.0, c_ = 1.0;

  template <typename S>
  S pressure_impl(const Eigen::Matrix<S, 3, 1>& X) const;
};

struct ErrorNorms {
  double u = 0;       // || u - u_h ||_L2
  double grad_u = 0;  // || grad(u - u_h) ||_L2 (broken gradient)
  double p = 0;       // || p - p_h ||_L2, incompressible only
};

/// Quadrature-evaluated error norms at degree 2k+4 (over-integration).
ErrorNorms error_norms(const Problem& pb, const Eigen::VectorXd& state,
                       const ManufacturedCase& mc);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); NaN marks an undefined
/// rate (zero error).
std::vector<double> convergence_rates(const std::vector<double>& errors,
                                      const std::vector<double>& h);

/// A self-owning problem: keeps the mesh/partition/context alive together
/// with the Problem that points into them.
struct ProblemBundle {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<BoundaryPartition> partition;
  std::unique_ptr<DGContext> ctx;
  Problem problem;
};

/// Unit-cube manufactured problem: exact Dirichlet data on five of the six
/// surfaces (Nitsche or Lagrange multipliers), exact traction on the last
/// one, forcing synthesized from the exact stress field.
ProblemBundle make_manufactured_problem(const ManufacturedCase& mc, int cells_per_axis,
                                        int degree, BCKind dirichlet_mech,
                                        const StabilizationParams& stab,
                                        int quad_degree = -1);

struct ConvergenceLevel {
  int cards = 0;    // element count
  double h = 0;     // mesh size
  ErrorNorms err;
  bool converged = false;
  int increments_used = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> rate_u, rate_grad_u, rate_p;
  std::string to_csv() const;
};

/// h-refinement study on the unit cube for one manufactured case.
ConvergenceTable run_manufactured_convergence(const ManufacturedCase& mc, int degree,
                                              BCKind dirichlet_mech,
                                              const std::vector<int>& cells_per_axis,
                                              int increments, const NewtonSettings& settings,
                                              const StabilizationParams& stab);

}  // namespace dgh
