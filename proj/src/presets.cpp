#include "dgh/presets.hpp"

#include <cmath>
#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

namespace {

// 2D unit square squashed into a parabola: the top surface ends up on
// y = 3 (X - 1/2)^2, the bottom is clamped, the sides are traction free.
RunConfig indentation_base() {
  RunConfig c;
  c.set("degree", 1);
  c.set("mesh.kind", "tri-grid");
  c.set("mesh.cells", "16 16");
  c.set("mesh.box", "0 1 0 1");
  c.set("mu", 0.4);
  c.set("lambda", 0.4);
  c.set("bc.top.where", "Y > 0.999");
  c.set("bc.top.type", "dirichlet_nitsche");
  c.set("bc.top.value", "0; 3*(X-0.5)^2 - 1");
  c.set("bc.bottom.where", "Y < 0.001");
  c.set("bc.bottom.type", "dirichlet_nitsche");
  c.set("bc.bottom.value", "0; 0");
  c.set("bc.sides.where", "X < 0.001 || X > 0.999");
  c.set("bc.sides.type", "neumann");
  c.set("bc.sides.value", "0; 0");
  c.set("stab.beta", 0);
  c.set("stab.epsilon", 0);
  c.set("stab.eta_lbb", 1);
  c.set("stab.eta_lambda", 1);
  c.set("solver.increments", 60);
  return c;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string rotation_expr_2d(double cx, double cy, double angle, int comp,
                             const std::string& extra = "") {
  // displacement of a plane rotation by t*angle about (cx, cy)
  std::ostringstream os;
  os.precision(17);
  const std::string a = "(" + num(angle) + "*t)";
  if (comp == 0)
    os << "(X-" << cx << ")*cos" << a << " - (Y-" << cy << ")*sin" << a << " + " << cx
       << " - X" << extra;
  else
    os << "(X-" << cx << ")*sin" << a << " + (Y-" << cy << ")*cos" << a << " + " << cy
       << " - Y" << extra;
  return os.str();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"manufactured-nhkc-k1", "manufactured-svkc-k1", "manufactured-nhki-k1",
          "manufactured-svki-k1", "indentation-nhkc",     "indentation-svkc",
          "indentation-nhki",     "beam-nhkc",            "cavitation",
          "bar-torsion-svki",     "cylinder-nhkc"};
}

RunConfig preset(const std::string& name) {
  if (name.rfind("manufactured-", 0) == 0) {
    RunConfig c;
    c.set("case", "manufactured");
    c.set("degree", 1);
    c.set("mesh.kind", "box");
    c.set("mesh.dim", 3);
    c.set("mesh.cells", "4 4 4");
    c.set("mu", 1.0);
    c.set("lambda", 10.0);
    c.set("bc.dirichlet.where", "Z < 0.999");
    c.set("bc.dirichlet.type", "dirichlet_nitsche");
    c.set("bc.dirichlet.value", "exact");
    c.set("bc.neumann.where", "Z > 0.999");
    c.set("bc.neumann.type", "neumann");
    c.set("bc.neumann.value", "exact");
    c.set("stab.beta", 1);
    c.set("stab.epsilon", 0);
    c.set("stab.eta_lbb", 1);
    c.set("stab.eta_lambda", 1);
    c.set("solver.increments", 3);
    if (name == "manufactured-nhkc-k1") {
      c.set("law", "nhk-c");
      c.set("regime", "compressible");
    } else if (name == "manufactured-svkc-k1") {
      c.set("law", "svk");
      c.set("regime", "compressible");
    } else if (name == "manufactured-nhki-k1") {
      c.set("law", "nhk-i");
      c.set("regime", "incompressible");
      c.set("note", "material parameters mu = 1, lambda = 10 as in the compressible runs");
    } else if (name == "manufactured-svki-k1") {
      c.set("law", "svk");
      c.set("regime", "incompressible");
      c.set("note", "material parameters mu = 1, lambda = 10 as in the compressible runs");
    } else {
      throw config_error("unknown preset '" + name + "'");
    }
    return c;
  }

  if (name == "indentation-nhkc") {
    RunConfig c = indentation_base();
    c.set("law", "nhk-c");
    c.set("regime", "compressible");
    return c;
  }
  if (name == "indentation-svkc") {
    RunConfig c = indentation_base();
    c.set("law", "svk");
    c.set("regime", "compressible");
    c.set("note", "expected to fail mid-path: the SVK energy does not penalize J -> 0");
    return c;
  }
  if (name == "indentation-nhki") {
    RunConfig c = indentation_base();
    c.set("law", "nhk-i");
    c.set("regime", "incompressible");
    c.set("solver.increments", 40);
    return c;
  }

  if (name == "beam-nhkc") {
    // 1 x 5 strip, 110 triangles; top face rotated by pi/2 during the first
    // half of the path, then translated sideways by one beam width
    RunConfig c;
    c.set("degree", 1);
    c.set("mesh.kind", "tri-grid");
    c.set("mesh.cells", "5 11");
    c.set("mesh.box", "0 1 0 5");
    c.set("law", "nhk-c");
    c.set("regime", "compressible");
    c.set("young", 1.0);
    c.set("poisson", 0.3);
    const std::string a = "(" + num(M_PI / 2) + "*min(2*t,1))";
    c.set("bc.top.where", "Y > 4.999");
    c.set("bc.top.type", "dirichlet_lagrange");
    c.set("bc.top.value", "(X-0.5)*cos" + a + " - (Y-5)*sin" + a +
                              " + 0.5 - X + max(0, 2*t-1); (X-0.5)*sin" + a +
                              " + (Y-5)*cos" + a + " + 5 - Y");
    c.set("bc.bottom.where", "Y < 0.001");
    c.set("bc.bottom.type", "dirichlet_lagrange");
    c.set("bc.bottom.value", "0; 0");
    c.set("bc.sides.where", "X < 0.001 || X > 0.999");
    c.set("bc.sides.type", "neumann");
    c.set("bc.sides.value", "0; 0");
    c.set("stab.beta", 1);
    c.set("stab.epsilon", 1);
    c.set("stab.eta_lambda", 1);
    c.set("solver.increments", 15);
    c.set("note", "1 x 5 strip assumed (aspect ratio unstated); sideways translation by one "
                  "beam width");
    return c;
  }

  if (name == "cavitation") {
    RunConfig c;
    c.set("degree", 2);
    c.set("mesh.kind", "file");
    c.set("mesh.path", "assets/disk_two_holes.mesh");
    c.set("law", "nhk-cav");
    c.set("regime", "compressible");
    c.set("mu", 0.1);
    c.set("lambda", 1.0);
    // outer boundary stretched radially to alpha = 4.7, hole walls free
    c.set("bc.outer.where", "sqrt(X*X + Y*Y) > 0.6");
    c.set("bc.outer.type", "dirichlet_lagrange");
    c.set("bc.outer.value", "3.7*X; 3.7*Y");
    c.set("bc.holes.where", "sqrt(X*X + Y*Y) < 0.6");
    c.set("bc.holes.type", "neumann");
    c.set("bc.holes.value", "0; 0");
    c.set("stab.beta", 1);
    c.set("stab.epsilon", 1);
    c.set("stab.eta_lambda", 1);
    c.set("solver.increments", 100);
    c.set("note", "desk-scale mesh (~2k triangles) generated for this repository; the "
                  "reference computation used 8982 triangles");
    return c;
  }

  if (name == "bar-torsion-svki") {
    RunConfig c;
    c.set("degree", 1);
    c.set("mesh.kind", "box");
    c.set("mesh.dim", 3);
    c.set("mesh.cells", "4 4 25");
    c.set("mesh.box", "0 1 0 1 0 5");
    c.set("law", "svk");
    c.set("regime", "incompressible");
    c.set("mu", 1.0);
    c.set("lambda", 1.0);
    const double quarter = M_PI / 2;
    c.set("bc.top.where", "Z > 4.999");
    c.set("bc.top.type", "dirichlet_nitsche");
    c.set("bc.top.value", rotation_expr_2d(0.5, 0.5, quarter, 0) + "; " +
                              rotation_expr_2d(0.5, 0.5, quarter, 1) + "; 0");
    c.set("bc.bottom.where", "Z < 0.001");
    c.set("bc.bottom.type", "dirichlet_nitsche");
    c.set("bc.bottom.value", "0; 0; 0");
    c.set("bc.sides.where", "Z >= 0.001 && Z <= 4.999");
    c.set("bc.sides.type", "neumann");
    c.set("bc.sides.value", "0; 0; 0");
    c.set("stab.beta", 0);
    c.set("stab.epsilon", 0);
    c.set("stab.eta_lbb", 1);
    c.set("stab.eta_lambda", 1);
    c.set("solver.increments", 15);
    c.set("note", "desk scale: quarter turn instead of the full 360-degree rotation "
                  "(400-element reference mesh kept)");
    return c;
  }

  if (name == "cylinder-nhkc") {
    RunConfig c;
    c.set("degree", 1);
    c.set("mesh.kind", "cylinder-shell");
    // H/R = 4, r = 0.7 R with R = 1
    c.set("mesh.cylinder", "0.7 1.0 4.0 2 16 10");
    c.set("law", "nhk-c");
    c.set("regime", "compressible");
    c.set("young", 1.0);
    c.set("poisson", 0.25);
    const double quarter = M_PI / 2;
    c.set("bc.top.where", "Z > 3.999");
    c.set("bc.top.type", "dirichlet_lagrange");
    c.set("bc.top.value", rotation_expr_2d(0.0, 0.0, quarter, 0) + "; " +
                              rotation_expr_2d(0.0, 0.0, quarter, 1) + "; 0");
    c.set("bc.bottom.where", "Z < 0.001");
    c.set("bc.bottom.type", "dirichlet_lagrange");
    c.set("bc.bottom.value", "0; 0; 0");
    c.set("bc.walls.where", "Z >= 0.001 && Z <= 3.999");
    c.set("bc.walls.type", "neumann");
    c.set("bc.walls.value", "0; 0; 0");
    c.set("stab.beta", 4);
    c.set("stab.epsilon", 1);
    c.set("stab.eta_lbb", 1);
    c.set("stab.eta_lambda", 1);
    c.set("solver.increments", 30);
    c.set("note", "desk scale: quarter turn of the top surface on a coarse tetrahedral "
                  "shell (reference run: 8906 tets, full half turn)");
    return c;
  }

  throw config_error("unknown preset '" + name + "'");
}

}  // namespace dgh
