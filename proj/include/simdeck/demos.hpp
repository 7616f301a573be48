#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "simdeck/engine.hpp"

namespace simdeck {

struct DemoInfo {
  std::string name;
  std::string summary;
  std::function<std::unique_ptr<Simulation>()> make;
};

/// Registered demos in listing order.
const std::vector<DemoInfo>& demo_registry();

/// Returns nullptr for unknown names.
std::unique_ptr<Simulation> make_demo(std::string_view name);

}  // namespace simdeck
