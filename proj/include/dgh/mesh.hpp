#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "dgh/quadrature.hpp"

namespace dgh {

enum class CellType { Segment, Triangle, Quad, Tetra, Hexa };

RefEntity cell_ref_entity(CellType t);
RefEntity face_ref_entity(CellType cell, int local_face);

struct Element {
  CellType type;
  std::vector<int> verts;
  double h = 0;  // diameter of the vertex set
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
};

struct Face {
  std::vector<int> verts;  // ordered as seen from the left element
  int left = -1;           // owning element (defines the stored normal)
  int right = -1;          // second element, -1 on the boundary
  double h = 0;            // diameter of the vertex set
  double measure = 0;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // at centroid, out of left
  std::string tag;  // optional boundary tag from an imported file

  bool boundary() const { return right < 0; }
};

/// Physical quadrature on an element, face or edge: points, measure-scaled
/// weights and (faces only) unit normals pointing out of the left element.
struct PhysQuad {
  Eigen::Matrix3Xd pts;
  Eigen::VectorXd w;
  Eigen::Matrix3Xd normals;
};

class Mesh {
public:
  int dim = 0;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Element> elements;
  std::vector<Face> faces;
  std::vector<std::vector<int>> element_faces;  // per element, face ids
  std::vector<int> boundary_faces;              // face ids with right < 0

  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  double h_max() const;

  /// +1 when e owns the stored normal of face f, -1 for the other side.
  double side_sign(int f, int e) const { return faces[f].left == e ? 1.0 : -1.0; }
  int neighbor(int f, int e) const {
    const Face& F = faces[f];
    return F.left == e ? F.right : F.left;
  }

  PhysQuad element_quadrature(int e, int degree) const;
  PhysQuad face_quadrature(int f, int degree) const;
  /// Edge of a Lagrange-multiplier face: a segment in 3D, a point in 2D.
  PhysQuad edge_quadrature(const std::vector<int>& edge_verts, int degree) const;

  /// Builds faces, adjacency, diameters and centroids from vertices+elements.
  void finalize();
};

/// Uniform quadrilateral/hexahedral grid over an axis-aligned box.
Mesh build_cartesian_mesh(int dim, const std::array<int, 3>& cells,
                          const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

/// Rectangle triangulated by splitting each grid cell into two triangles.
Mesh build_triangulated_rectangle(int nx, int ny, const Eigen::Vector2d& lo,
                                  const Eigen::Vector2d& hi);

/// Structured tetrahedral mesh of a hollow cylinder (each hex split into six
/// tets sharing the main diagonal; conforming across the periodic seam).
Mesh build_cylinder_shell_tets(double r_inner, double r_outer, double height,
                               int n_radial, int n_theta, int n_axial);

/// Parses the ASCII mesh format described in the README.
Mesh import_mesh(const std::string& content);
std::string export_mesh(const Mesh& mesh);

}  // namespace dgh
