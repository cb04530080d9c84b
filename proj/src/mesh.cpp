#include "dgh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

RefEntity cell_ref_entity(CellType t) {
  switch (t) {
    case CellType::Segment: return RefEntity::Segment;
    case CellType::Triangle: return RefEntity::Triangle;
    case CellType::Quad: return RefEntity::Quad;
    case CellType::Tetra: return RefEntity::Tetra;
    case CellType::Hexa: return RefEntity::Hexa;
  }
  return RefEntity::Point;
}

namespace {

// Local faces per cell type; hex vertices follow the VTK convention
// (bottom quad 0-3 counter-clockwise, top quad 4-7 above it).
const std::vector<std::vector<int>>& local_faces(CellType t) {
  static const std::vector<std::vector<int>> seg = {{0}, {1}};
  static const std::vector<std::vector<int>> tri = {{0, 1}, {1, 2}, {2, 0}};
  static const std::vector<std::vector<int>> quad = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const std::vector<std::vector<int>> tet = {
      {0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  static const std::vector<std::vector<int>> hex = {
      {0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  switch (t) {
    case CellType::Segment: return seg;
    case CellType::Triangle: return tri;
    case CellType::Quad: return quad;
    case CellType::Tetra: return tet;
    case CellType::Hexa: return hex;
  }
  return seg;
}

double diameter(const std::vector<Eigen::Vector3d>& pts) {
  double d = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

Eigen::Vector3d vertex_mean(const Mesh& m, const std::vector<int>& vs) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int v : vs) c += m.vertices[v];
  return c / static_cast<double>(vs.size());
}

// Multilinear/affine reference map value and Jacobian columns.
void map_eval(RefEntity ent, const std::vector<Eigen::Vector3d>& v,
              const Eigen::VectorXd& xi, Eigen::Vector3d& x,
              Eigen::Matrix<double, 3, 3>& jac, int& ref_dim) {
  ref_dim = ref_entity_dim(ent);
  jac.setZero();
  switch (ent) {
    case RefEntity::Point:
      x = v[0];
      break;
    case RefEntity::Segment:
      x = v[0] + xi[0] * (v[1] - v[0]);
      jac.col(0) = v[1] - v[0];
      break;
    case RefEntity::Triangle:
      x = v[0] + xi[0] * (v[1] - v[0]) + xi[1] * (v[2] - v[0]);
      jac.col(0) = v[1] - v[0];
      jac.col(1) = v[2] - v[0];
      break;
    case RefEntity::Tetra:
      x = v[0] + xi[0] * (v[1] - v[0]) + xi[1] * (v[2] - v[0]) + xi[2] * (v[3] - v[0]);
      jac.col(0) = v[1] - v[0];
      jac.col(1) = v[2] - v[0];
      jac.col(2) = v[3] - v[0];
      break;
    case RefEntity::Quad: {
      const double a = xi[0], b = xi[1];
      x = (1 - a) * (1 - b) * v[0] + a * (1 - b) * v[1] + a * b * v[2] + (1 - a) * b * v[3];
      jac.col(0) = (1 - b) * (v[1] - v[0]) + b * (v[2] - v[3]);
      jac.col(1) = (1 - a) * (v[3] - v[0]) + a * (v[2] - v[1]);
      break;
    }
    case RefEntity::Hexa: {
      const double a = xi[0], b = xi[1], c = xi[2];
      auto blend = [&](int i) {
        const double fa = (i == 1 || i == 2 || i == 5 || i == 6) ? a : 1 - a;
        const double fb = (i == 2 || i == 3 || i == 6 || i == 7) ? b : 1 - b;
        const double fc = (i >= 4) ? c : 1 - c;
        return fa * fb * fc;
      };
      x.setZero();
      for (int i = 0; i < 8; ++i) x += blend(i) * v[i];
      auto dblend = [&](int i, int dir) {
        const bool pa = (i == 1 || i == 2 || i == 5 || i == 6);
        const bool pb = (i == 2 || i == 3 || i == 6 || i == 7);
        const bool pc = (i >= 4);
        const double fa = pa ? a : 1 - a;
        const double fb = pb ? b : 1 - b;
        const double fc = pc ? c : 1 - c;
        switch (dir) {
          case 0: return (pa ? 1.0 : -1.0) * fb * fc;
          case 1: return (pb ? 1.0 : -1.0) * fa * fc;
          default: return (pc ? 1.0 : -1.0) * fa * fb;
        }
      };
      for (int dir = 0; dir < 3; ++dir) {
        Eigen::Vector3d col = Eigen::Vector3d::Zero();
        for (int i = 0; i < 8; ++i) col += dblend(i, dir) * v[i];
        jac.col(dir) = col;
      }
      break;
    }
  }
}

std::vector<Eigen::Vector3d> gather(const Mesh& m, const std::vector<int>& ids) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(m.vertices[i]);
  return out;
}

}  // namespace

double Mesh::h_max() const {
  double h = 0;
  for (const auto& e : elements) h = std::max(h, e.h);
  return h;
}

PhysQuad Mesh::element_quadrature(int e, int degree) const {
  const Element& el = elements[e];
  const RefEntity ent = cell_ref_entity(el.type);
  const QuadratureRule rule = quadrature_rule(ent, degree);
  const auto vs = gather(*this, el.verts);
  const int nq = static_cast<int>(rule.weights.size());
  PhysQuad out;
  out.pts.resize(3, nq);
  out.w.resize(nq);
  Eigen::Vector3d x;
  Eigen::Matrix3d jac;
  int rd = 0;
  for (int q = 0; q < nq; ++q) {
    map_eval(ent, vs, rule.points.col(q), x, jac, rd);
    out.pts.col(q) = x;
    double meas = 0;
    if (rd == 3)
      meas = std::abs(jac.determinant());
    else if (rd == 2)
      meas = std::abs(jac.col(0).x() * jac.col(1).y() - jac.col(0).y() * jac.col(1).x());
    else
      meas = jac.col(0).norm();
    if (meas <= 0) throw numeric_error("degenerate element map in element " + std::to_string(e));
    out.w[q] = rule.weights[q] * meas;
  }
  return out;
}

PhysQuad Mesh::face_quadrature(int f, int degree) const {
  const Face& F = faces[f];
  const RefEntity ent = dim == 2 ? RefEntity::Segment
                                 : (F.verts.size() == 3 ? RefEntity::Triangle : RefEntity::Quad);
  const QuadratureRule rule = quadrature_rule(ent, degree);
  const auto vs = gather(*this, F.verts);
  const int nq = static_cast<int>(rule.weights.size());
  PhysQuad out;
  out.pts.resize(3, nq);
  out.w.resize(nq);
  out.normals.resize(3, nq);
  Eigen::Vector3d x;
  Eigen::Matrix3d jac;
  int rd = 0;
  const Eigen::Vector3d inward = elements[F.left].centroid - F.centroid;
  for (int q = 0; q < nq; ++q) {
    map_eval(ent, vs, rule.points.col(q), x, jac, rd);
    out.pts.col(q) = x;
    Eigen::Vector3d n;
    double meas;
    if (dim == 2) {
      const Eigen::Vector3d t = jac.col(0);
      meas = t.norm();
      n = Eigen::Vector3d(t.y(), -t.x(), 0.0) / meas;
    } else {
      const Eigen::Vector3d c = jac.col(0).cross(jac.col(1));
      meas = c.norm();
      n = c / meas;
    }
    if (n.dot(inward) > 0) n = -n;
    out.w[q] = rule.weights[q] * meas;
    out.normals.col(q) = n;
  }
  return out;
}

PhysQuad Mesh::edge_quadrature(const std::vector<int>& edge_verts, int degree) const {
  PhysQuad out;
  if (dim == 2) {
    // edges of a 2D boundary face are its endpoints; integration is evaluation
    out.pts.resize(3, 1);
    out.pts.col(0) = vertices[edge_verts[0]];
    out.w = Eigen::VectorXd::Ones(1);
    return out;
  }
  const QuadratureRule rule = quadrature_rule(RefEntity::Segment, degree);
  const auto vs = gather(*this, edge_verts);
  const int nq = static_cast<int>(rule.weights.size());
  out.pts.resize(3, nq);
  out.w.resize(nq);
  const Eigen::Vector3d t = vs[1] - vs[0];
  for (int q = 0; q < nq; ++q) {
    out.pts.col(q) = vs[0] + rule.points(0, q) * t;
    out.w[q] = rule.weights[q] * t.norm();
  }
  return out;
}

void Mesh::finalize() {
  if (dim != 2 && dim != 3) throw config_error("mesh dimension must be 2 or 3");
  for (auto& el : elements) {
    auto vs = gather(*this, el.verts);
    el.h = diameter(vs);
    el.centroid = vertex_mean(*this, el.verts);
    // normalize orientation of simplices / 2D cells so maps have positive measure
    if (el.type == CellType::Triangle || el.type == CellType::Quad) {
      double area2 = 0;
      const int n = static_cast<int>(el.verts.size());
      for (int i = 0; i < n; ++i) {
        const auto& p = vertices[el.verts[i]];
        const auto& q = vertices[el.verts[(i + 1) % n]];
        area2 += p.x() * q.y() - q.x() * p.y();
      }
      if (area2 < 0) std::reverse(el.verts.begin(), el.verts.end());
    } else if (el.type == CellType::Tetra) {
      Eigen::Matrix3d J;
      J.col(0) = vertices[el.verts[1]] - vertices[el.verts[0]];
      J.col(1) = vertices[el.verts[2]] - vertices[el.verts[0]];
      J.col(2) = vertices[el.verts[3]] - vertices[el.verts[0]];
      if (J.determinant() < 0) std::swap(el.verts[1], el.verts[2]);
    }
  }

  faces.clear();
  element_faces.assign(elements.size(), {});
  boundary_faces.clear();
  std::map<std::vector<int>, int> lookup;
  for (int e = 0; e < n_elements(); ++e) {
    const Element& el = elements[e];
    for (const auto& lf : local_faces(el.type)) {
      std::vector<int> fv;
      fv.reserve(lf.size());
      for (int li : lf) fv.push_back(el.verts[li]);
      std::vector<int> key = fv;
      std::sort(key.begin(), key.end());
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Face F;
        F.verts = fv;
        F.left = e;
        lookup[key] = static_cast<int>(faces.size());
        element_faces[e].push_back(static_cast<int>(faces.size()));
        faces.push_back(std::move(F));
      } else {
        Face& F = faces[it->second];
        if (F.right >= 0)
          throw config_error("non-conforming mesh: a face is shared by three elements");
        F.right = e;
        element_faces[e].push_back(it->second);
      }
    }
  }
  for (int f = 0; f < n_faces(); ++f) {
    Face& F = faces[f];
    F.centroid = vertex_mean(*this, F.verts);
    F.h = dim == 2 ? (vertices[F.verts[0]] - vertices[F.verts[1]]).norm()
                   : diameter(gather(*this, F.verts));
    PhysQuad fq = face_quadrature(f, 2);
    F.measure = fq.w.sum();
    F.normal = fq.normals.col(0);
    // centroid-evaluated normal for classification purposes
    for (int q = 1; q < fq.normals.cols(); ++q) F.normal += fq.normals.col(q);
    F.normal.normalize();
    if (F.boundary()) boundary_faces.push_back(f);
  }
}

Mesh build_cartesian_mesh(int dim, const std::array<int, 3>& cells, const Eigen::Vector3d& lo,
                          const Eigen::Vector3d& hi) {
  if (dim != 2 && dim != 3) throw config_error("cartesian mesh dimension must be 2 or 3");
  for (int d = 0; d < dim; ++d)
    if (cells[d] < 1) throw config_error("cartesian mesh needs at least one cell per axis");

  Mesh m;
  m.dim = dim;
  const int nx = cells[0], ny = cells[1], nz = dim == 3 ? cells[2] : 1;
  const int vx = nx + 1, vy = ny + 1, vz = dim == 3 ? nz + 1 : 1;
  auto vid = [&](int i, int j, int k) { return (k * vy + j) * vx + i; };
  for (int k = 0; k < vz; ++k)
    for (int j = 0; j < vy; ++j)
      for (int i = 0; i < vx; ++i) {
        Eigen::Vector3d p(lo.x() + (hi.x() - lo.x()) * i / nx,
                          lo.y() + (hi.y() - lo.y()) * j / ny, 0.0);
        if (dim == 3) p.z() = lo.z() + (hi.z() - lo.z()) * k / nz;
        m.vertices.push_back(p);
      }
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Element el;
        if (dim == 2) {
          el.type = CellType::Quad;
          el.verts = {vid(i, j, 0), vid(i + 1, j, 0), vid(i + 1, j + 1, 0), vid(i, j + 1, 0)};
        } else {
          el.type = CellType::Hexa;
          el.verts = {vid(i, j, k),         vid(i + 1, j, k),         vid(i + 1, j + 1, k),
                      vid(i, j + 1, k),     vid(i, j, k + 1),         vid(i + 1, j, k + 1),
                      vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        }
        m.elements.push_back(std::move(el));
      }
  m.finalize();
  return m;
}

Mesh build_triangulated_rectangle(int nx, int ny, const Eigen::Vector2d& lo,
                                  const Eigen::Vector2d& hi) {
  if (nx < 1 || ny < 1) throw config_error("triangulated rectangle needs at least one cell");
  Mesh m;
  m.dim = 2;
  const int vx = nx + 1;
  auto vid = [&](int i, int j) { return j * vx + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx,
                              lo.y() + (hi.y() - lo.y()) * j / ny, 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Element a, b;
      a.type = b.type = CellType::Triangle;
      a.verts = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)};
      b.verts = {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)};
      m.elements.push_back(std::move(a));
      m.elements.push_back(std::move(b));
    }
  m.finalize();
  return m;
}

Mesh build_cylinder_shell_tets(double r_inner, double r_outer, double height, int n_radial,
                               int n_theta, int n_axial) {
  if (r_inner <= 0 || r_outer <= r_inner || n_radial < 1 || n_theta < 3 || n_axial < 1)
    throw config_error("bad cylinder shell parameters");
  Mesh m;
  m.dim = 3;
  const int vr = n_radial + 1, vt = n_theta, vz = n_axial + 1;
  auto vid = [&](int i, int j, int k) { return (k * vt + (j % vt)) * vr + i; };
  for (int k = 0; k < vz; ++k)
    for (int j = 0; j < vt; ++j)
      for (int i = 0; i < vr; ++i) {
        const double r = r_inner + (r_outer - r_inner) * i / n_radial;
        const double th = 2.0 * M_PI * j / n_theta;
        m.vertices.emplace_back(r * std::cos(th), r * std::sin(th), height * k / n_axial);
      }
  // split each hex into six tets around the main diagonal v0-v6
  static const int tet_of_hex[6][4] = {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6},
                                       {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}};
  for (int k = 0; k < n_axial; ++k)
    for (int j = 0; j < n_theta; ++j)
      for (int i = 0; i < n_radial; ++i) {
        const int c[8] = {vid(i, j, k),         vid(i + 1, j, k),     vid(i + 1, j + 1, k),
                          vid(i, j + 1, k),     vid(i, j, k + 1),     vid(i + 1, j, k + 1),
                          vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        for (const auto& t : tet_of_hex) {
          Element el;
          el.type = CellType::Tetra;
          el.verts = {c[t[0]], c[t[1]], c[t[2]], c[t[3]]};
          m.elements.push_back(std::move(el));
        }
      }
  m.finalize();
  return m;
}

Mesh import_mesh(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) return true;
    }
    return false;
  };

  if (!next_line()) throw parse_error("empty mesh file", lineno);
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    ls >> magic >> version;
    if (magic != "dgh-mesh" || version != 1)
      throw parse_error("expected header 'dgh-mesh 1'", lineno);
  }

  Mesh m;
  if (!next_line()) throw parse_error("missing 'dim' line", lineno);
  {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw >> m.dim;
    if (kw != "dim" || (m.dim != 2 && m.dim != 3))
      throw parse_error("expected 'dim 2' or 'dim 3'", lineno);
  }

  if (!next_line()) throw parse_error("missing 'vertices' line", lineno);
  int nv = 0;
  {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw >> nv;
    if (kw != "vertices" || nv < 1) throw parse_error("expected 'vertices <count>'", lineno);
  }
  for (int i = 0; i < nv; ++i) {
    if (!next_line()) throw parse_error("unexpected end of vertex list", lineno);
    std::istringstream ls(line);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    ls >> p.x() >> p.y();
    if (m.dim == 3) ls >> p.z();
    if (ls.fail()) throw parse_error("bad vertex coordinates", lineno);
    m.vertices.push_back(p);
  }

  if (!next_line()) throw parse_error("missing 'elements' line", lineno);
  int ne = 0;
  {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw >> ne;
    if (kw != "elements" || ne < 1) throw parse_error("expected 'elements <count>'", lineno);
  }
  for (int i = 0; i < ne; ++i) {
    if (!next_line()) throw parse_error("unexpected end of element list", lineno);
    std::istringstream ls(line);
    std::string type;
    ls >> type;
    Element el;
    int count = 0;
    if (type == "tri") el.type = CellType::Triangle, count = 3;
    else if (type == "quad") el.type = CellType::Quad, count = 4;
    else if (type == "tet") el.type = CellType::Tetra, count = 4;
    else if (type == "hex") el.type = CellType::Hexa, count = 8;
    else throw parse_error("unknown element type '" + type + "'", lineno);
    if ((el.type == CellType::Triangle || el.type == CellType::Quad) && m.dim != 2)
      throw parse_error("2D element in a 3D mesh", lineno);
    if ((el.type == CellType::Tetra || el.type == CellType::Hexa) && m.dim != 3)
      throw parse_error("3D element in a 2D mesh", lineno);
    el.verts.resize(count);
    for (int v = 0; v < count; ++v) ls >> el.verts[v];
    if (ls.fail()) throw parse_error("bad element connectivity", lineno);
    for (int v : el.verts)
      if (v < 0 || v >= nv)
        throw parse_error("element references missing vertex " + std::to_string(v), lineno);
    m.elements.push_back(std::move(el));
  }

  // optional boundary tag table
  std::map<std::vector<int>, std::string> tags;
  if (next_line()) {
    std::istringstream ls(line);
    std::string kw;
    int nb = 0;
    ls >> kw >> nb;
    if (kw != "boundary") throw parse_error("expected 'boundary <count>'", lineno);
    for (int i = 0; i < nb; ++i) {
      if (!next_line()) throw parse_error("unexpected end of boundary table", lineno);
      std::istringstream bs(line);
      std::string tag;
      int cnt = 0;
      bs >> tag >> cnt;
      std::vector<int> vs(cnt);
      for (int v = 0; v < cnt; ++v) bs >> vs[v];
      if (bs.fail()) throw parse_error("bad boundary record", lineno);
      for (int v : vs)
        if (v < 0 || v >= nv)
          throw parse_error("boundary face references missing vertex", lineno);
      std::sort(vs.begin(), vs.end());
      tags[vs] = tag;
    }
  }

  try {
    m.finalize();
  } catch (const config_error& err) {
    throw parse_error(err.what(), lineno);
  }
  if (!tags.empty()) {
    for (int f : m.boundary_faces) {
      std::vector<int> key = m.faces[f].verts;
      std::sort(key.begin(), key.end());
      auto it = tags.find(key);
      if (it != tags.end()) m.faces[f].tag = it->second;
    }
  }
  return m;
}

std::string export_mesh(const Mesh& m) {
  std::ostringstream out;
  out.precision(17);
  out << "dgh-mesh 1\n";
  out << "dim " << m.dim << "\n";
  out << "vertices " << m.vertices.size() << "\n";
  for (const auto& v : m.vertices) {
    out << v.x() << " " << v.y();
    if (m.dim == 3) out << " " << v.z();
    out << "\n";
  }
  out << "elements " << m.elements.size() << "\n";
  for (const auto& el : m.elements) {
    switch (el.type) {
      case CellType::Triangle: out << "tri"; break;
      case CellType::Quad: out << "quad"; break;
      case CellType::Tetra: out << "tet"; break;
      case CellType::Hexa: out << "hex"; break;
      case CellType::Segment: out << "seg"; break;
    }
    for (int v : el.verts) out << " " << v;
    out << "\n";
  }
  int tagged = 0;
  for (int f : m.boundary_faces)
    if (!m.faces[f].tag.empty()) ++tagged;
  if (tagged > 0) {
    out << "boundary " << tagged << "\n";
    for (int f : m.boundary_faces) {
      const Face& F = m.faces[f];
      if (F.tag.empty()) continue;
      out << F.tag << " " << F.verts.size();
      for (int v : F.verts) out << " " << v;
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace dgh
