#include "dgh/hyperelastic.hpp"

namespace dgh {

std::string law_name(LawTag law) {
  switch (law) {
    case LawTag::SVK: return "svk";
    case LawTag::NHK_C: return "nhk-c";
    case LawTag::NHK_I: return "nhk-i";
    case LawTag::NHK_CAV: return "nhk-cav";
  }
  return "?";
}

LawTag law_from_name(const std::string& name) {
  if (name == "svk" || name == "svk-c" || name == "svk-i") return LawTag::SVK;
  if (name == "nhk-c") return LawTag::NHK_C;
  if (name == "nhk-i") return LawTag::NHK_I;
  if (name == "nhk-cav") return LawTag::NHK_CAV;
  throw config_error("unknown constitutive law '" + name + "'");
}

LameParams lame_from_young_poisson(double young, double poisson) {
  if (young <= 0) throw config_error("Young's modulus must be positive");
  if (poisson <= -1.0 || poisson >= 0.5)
    throw config_error("Poisson's ratio must lie in (-1, 0.5); the incompressible "
                       "regime handles nu = 0.5 through the constraint");
  LameParams p;
  p.mu = young / (2.0 * (1.0 + poisson));
  p.lambda = poisson * young / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  return p;
}

}  // namespace dgh
