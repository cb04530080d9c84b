#pragma once

#include <string>
#include <vector>

#include "dgh/problem.hpp"

namespace dgh {

/// Writes a legacy-ASCII VTK unstructured grid of the deformed configuration
/// (x = X + u_h at the element corners, every element its own cell so the
/// broken field stays broken). Point data: displacement and, when
/// incompressible, pressure. Cell data: Von Mises stress of the Cauchy
/// stress, the largest face penalty eta of the element, and the smallest
/// eigenvalue of the elasticity tensor over the element quadrature points.
void export_vtk(const Problem& pb, const Eigen::VectorXd& state,
                const std::vector<double>* eta_face, const std::string& path);

std::string vtk_to_string(const Problem& pb, const Eigen::VectorXd& state,
                          const std::vector<double>* eta_face);

}  // namespace dgh
