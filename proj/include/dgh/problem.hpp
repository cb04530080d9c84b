#pragma once

#include <memory>
#include <vector>

#include "dgh/boundary.hpp"
#include "dgh/dg_core.hpp"
#include "dgh/fe_space.hpp"
#include "dgh/hyperelastic.hpp"
#include "dgh/mesh.hpp"
#include "dgh/stabilization.hpp"

namespace dgh {

/// Block layout of the unknown vector: displacement coefficients first
/// (element-wise), then pressure (incompressible only), then face multipliers.
struct DofMap {
  int d = 0;
  int nb = 0;   // scalar basis functions per element
  int nfb = 0;  // scalar basis functions per multiplier face
  int n_elements = 0;
  int n_multiplier_faces = 0;
  bool with_pressure = false;

  int n_u = 0, n_p = 0, n_lambda = 0, total = 0;

  DofMap() = default;
  DofMap(const Mesh& mesh, const BoundaryPartition& part, int k, bool pressure) {
    d = mesh.dim;
    nb = poly_space_dim(k, d);
    nfb = poly_space_dim(k, d - 1);
    n_elements = mesh.n_elements();
    n_multiplier_faces = static_cast<int>(part.lagrange_faces.size());
    with_pressure = pressure;
    n_u = n_elements * d * nb;
    n_p = pressure ? n_elements * nb : 0;
    n_lambda = n_multiplier_faces * d * nfb;
    total = n_u + n_p + n_lambda;
  }

  int u_offset(int e) const { return e * d * nb; }
  int u_offset(int e, int comp) const { return u_offset(e) + comp * nb; }
  int p_offset(int e) const { return n_u + e * nb; }
  int lambda_offset(int lf) const { return n_u + n_p + lf * d * nfb; }
  int lambda_offset(int lf, int comp) const { return lambda_offset(lf) + comp * nfb; }
};

/// Normal-aware traction data: (position, outward unit normal, fraction).
using TractionFn =
    std::function<Eigen::Vector3d(const Eigen::Vector3d&, const Eigen::Vector3d&, double)>;

/// Boundary data attached to a classification region. Values receive the
/// loading fraction t and must return the already-scaled data; standard
/// proportional loading wraps g as t * g(X).
struct BCRegionData {
  std::string name;
  BCKind kind = BCKind::Neumann;
  SpaceTimeFn value;    // g_D for Dirichlet regions
  TractionFn traction;  // g_N for Neumann regions
};

/// A fully assembled discrete problem (mesh + spaces + material + data).
struct Problem {
  const Mesh* mesh = nullptr;
  const BoundaryPartition* partition = nullptr;
  const DGContext* ctx = nullptr;

  Regime regime = Regime::Compressible;
  LawTag law = LawTag::NHK_C;
  LameParams material;
  StabilizationParams stab;

  SpaceTimeFn body_force;  // rho * f^+ as a single field (rho defaults to 1)
  std::vector<BCRegionData> regions;

  BrokenSpace u_space;
  BrokenSpace p_space;  // used only in the incompressible regime
  FaceSpace lambda_space;
  DofMap dofs;

  bool incompressible() const { return regime == Regime::Incompressible; }

  void init_spaces() {
    u_space = BrokenSpace(*mesh, ctx->degree(), mesh->dim);
    if (incompressible()) p_space = BrokenSpace(*mesh, ctx->degree(), 1);
    lambda_space = FaceSpace(*mesh, partition->lagrange_faces, ctx->degree(),
                             ctx->quad_degree());
    dofs = DofMap(*mesh, *partition, ctx->degree(), incompressible());
  }

  /// Region-aware Dirichlet lookup for the jump operators.
  FaceDataFn dirichlet_lookup() const {
    return [this](int f, const Eigen::Vector3d& x, double t) {
      return regions[partition->face_region[f]].value(x, t);
    };
  }
};

}  // namespace dgh
