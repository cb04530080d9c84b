#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dgh/mesh.hpp"

namespace dgh {

enum class BCKind { Internal, DirichletNitsche, DirichletLagrange, Neumann };

struct BoundaryRegionSpec {
  std::string name;
  BCKind kind = BCKind::Neumann;
  /// Predicate on the face centroid (and optionally the face tag).
  std::function<bool(const Eigen::Vector3d&, const std::string& tag)> matches;
};

/// Edge of a Lagrange-multiplier face. In 2D an "edge" is an endpoint of the
/// boundary segment and carries unit measure (h_E = 1).
struct MultiplierEdge {
  std::vector<int> verts;  // 1 vertex in 2D, 2 in 3D
  bool internal = false;   // shared by two faces of the same smooth patch
  int other_face = -1;     // face id across the edge when internal
  double h = 1.0;
};

struct BoundaryPartition {
  std::vector<BCKind> face_kind;   // per face id
  std::vector<int> face_region;    // region index per face id, -1 if internal
  std::vector<int> lagrange_faces; // face ids carrying multiplier unknowns
  std::vector<int> multiplier_index;              // per face id, -1 if none
  std::vector<std::vector<MultiplierEdge>> edges; // per multiplier face (same order)
  std::vector<int> patch;                         // per multiplier face, smooth patch id
  int n_patches = 0;

  bool has_lagrange() const { return !lagrange_faces.empty(); }
};

/// Splits the boundary into Nitsche/Lagrange/Neumann face sets and builds the
/// per-face edge partition of the multiplier region. Two adjacent multiplier
/// faces belong to the same smooth patch when their normals differ by less
/// than patch_angle_deg.
BoundaryPartition classify_boundary(const Mesh& mesh,
                                    const std::vector<BoundaryRegionSpec>& regions,
                                    double patch_angle_deg = 30.0);

}  // namespace dgh
