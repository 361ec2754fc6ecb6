#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocat {

struct Scenario {
  std::string name;
  std::string description;
  std::string config;  // config text in the run-file format
};

// Canned studies, ordered by name.
const std::vector<Scenario>& list_scenarios();
std::optional<Scenario> find_scenario(std::string_view name);

}  // namespace ocat
