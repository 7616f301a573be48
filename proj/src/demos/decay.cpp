#include "simdeck/demo_sims.hpp"
#include "simdeck/text.hpp"

namespace simdeck::demos {

std::string Decay::directives() const {
  return R"(
#@IVISIT:SIMULATION & decay
#@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,5,0.01] & decay & -1 & float & 0.9
#@IVISIT:SLIDER & Delay [msec] & [200,1] & [0,1000,5,10] & delay & -1 & int & 100
#@IVISIT:TEXT_OUT & Results & [30,4] & just_left & str_results
)";
}

void Decay::declare(FieldRegistry& f) {
  f.param("decay", decay);
  f.param("delay", delay);
  f.data("str_results", str_results);
}

void Decay::init() {
  x = 100.0;
  n = 0;
  report();
}

void Decay::step() {
  x = decay_step(x, decay);
  ++n;
  report();
}

void Decay::report() { str_results = "step=" + text::format_int(n) + "\nx=" + text::format_double(x); }

}  // namespace simdeck::demos
