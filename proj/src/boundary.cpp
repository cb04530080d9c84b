#include "dgh/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

namespace {

// edges of a boundary face: endpoints in 2D, vertex pairs of the polygon in 3D
std::vector<std::vector<int>> face_edges(const Mesh& mesh, int f) {
  const auto& vs = mesh.faces[f].verts;
  std::vector<std::vector<int>> out;
  if (mesh.dim == 2) {
    out.push_back({vs[0]});
    out.push_back({vs[1]});
  } else {
    const int n = static_cast<int>(vs.size());
    for (int i = 0; i < n; ++i) out.push_back({vs[i], vs[(i + 1) % n]});
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

BoundaryPartition classify_boundary(const Mesh& mesh,
                                    const std::vector<BoundaryRegionSpec>& regions,
                                    double patch_angle_deg) {
  BoundaryPartition part;
  part.face_kind.assign(mesh.n_faces(), BCKind::Internal);
  part.face_region.assign(mesh.n_faces(), -1);
  part.multiplier_index.assign(mesh.n_faces(), -1);

  for (int f : mesh.boundary_faces) {
    const Face& F = mesh.faces[f];
    int hit = -1;
    int count = 0;
    for (size_t r = 0; r < regions.size(); ++r) {
      if (regions[r].matches(F.centroid, F.tag)) {
        hit = static_cast<int>(r);
        ++count;
      }
    }
    if (count != 1) {
      std::ostringstream msg;
      msg << "boundary face at (" << F.centroid.x() << ", " << F.centroid.y();
      if (mesh.dim == 3) msg << ", " << F.centroid.z();
      msg << ") matched " << count << " boundary regions (need exactly 1)";
      throw config_error(msg.str());
    }
    part.face_kind[f] = regions[hit].kind;
    part.face_region[f] = hit;
    if (regions[hit].kind == BCKind::DirichletLagrange) {
      part.multiplier_index[f] = static_cast<int>(part.lagrange_faces.size());
      part.lagrange_faces.push_back(f);
    }
  }

  // smooth patches over the multiplier region: adjacency through shared edges,
  // merge when normals agree up to the threshold angle
  const int nL = static_cast<int>(part.lagrange_faces.size());
  part.patch.assign(nL, 0);
  part.edges.assign(nL, {});
  if (nL == 0) return part;

  std::map<std::vector<int>, std::vector<int>> edge_to_faces;  // key -> local DL ids
  for (int i = 0; i < nL; ++i) {
    for (auto ev : face_edges(mesh, part.lagrange_faces[i])) {
      std::sort(ev.begin(), ev.end());
      edge_to_faces[ev].push_back(i);
    }
  }

  const double cos_thresh = std::cos(patch_angle_deg * M_PI / 180.0);
  UnionFind uf(nL);
  for (const auto& [ev, fs] : edge_to_faces) {
    if (fs.size() != 2) continue;
    const Eigen::Vector3d na = mesh.faces[part.lagrange_faces[fs[0]]].normal;
    const Eigen::Vector3d nb = mesh.faces[part.lagrange_faces[fs[1]]].normal;
    if (na.dot(nb) >= cos_thresh) uf.unite(fs[0], fs[1]);
  }
  std::map<int, int> roots;
  for (int i = 0; i < nL; ++i) {
    const int r = uf.find(i);
    auto it = roots.find(r);
    if (it == roots.end()) it = roots.emplace(r, static_cast<int>(roots.size())).first;
    part.patch[i] = it->second;
  }
  part.n_patches = static_cast<int>(roots.size());

  for (int i = 0; i < nL; ++i) {
    for (auto ev_raw : face_edges(mesh, part.lagrange_faces[i])) {
      MultiplierEdge edge;
      edge.verts = ev_raw;
      std::vector<int> key = ev_raw;
      std::sort(key.begin(), key.end());
      const auto& fs = edge_to_faces.at(key);
      if (fs.size() == 2) {
        const int other = fs[0] == i ? fs[1] : fs[0];
        if (part.patch[other] == part.patch[i]) {
          edge.internal = true;
          edge.other_face = part.lagrange_faces[other];
        }
      }
      edge.h = mesh.dim == 2
                   ? 1.0
                   : (mesh.vertices[ev_raw[0]] - mesh.vertices[ev_raw[1]]).norm();
      part.edges[i].push_back(std::move(edge));
    }
  }
  return part;
}

}  // namespace dgh
