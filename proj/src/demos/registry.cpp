#include "simdeck/demo_sims.hpp"
#include "simdeck/demos.hpp"

namespace simdeck {

const std::vector<DemoInfo>& demo_registry() {
  static const std::vector<DemoInfo> registry = {
      {"decay", "x <- decay * x from x(0) = 100", [] { return std::make_unique<demos::Decay>(); }},
      {"lif_scope", "LIF neuron on a sweep scope", [] { return std::make_unique<demos::LifScope>(); }},
      {"lif_plot", "LIF neuron with a parameter dictslider and plot", [] { return std::make_unique<demos::LifPlot>(); }},
      {"datagen", "interactive 2-D data generation", [] { return std::make_unique<demos::DataGen>(); }},
      {"classifiers", "least squares and kernel classifiers", [] { return std::make_unique<demos::Classifiers>(); }},
  };
  return registry;
}

std::unique_ptr<Simulation> make_demo(std::string_view name) {
  for (const auto& d : demo_registry())
    if (d.name == name) return d.make();
  return nullptr;
}

}  // namespace simdeck
