#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "speclab/geometry.hpp"

namespace speclab {

struct LoadedDomain {
  Domain domain;
  std::vector<std::string> orientation_fixes;
};

// Parses {"label", "outer", "holes", "components"}, re-orients loops and
// validates. Throws InvalidDomainError.
LoadedDomain parse_domain(const nlohmann::json& j);
LoadedDomain load_domain(const std::string& path);

nlohmann::json domain_to_json(const Domain& d);
void save_domain(const Domain& d, const std::string& path);

}  // namespace speclab
