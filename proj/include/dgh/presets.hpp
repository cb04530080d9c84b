#pragma once

#include <string>
#include <vector>

#include "dgh/config.hpp"

namespace dgh {

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

}  // namespace dgh
