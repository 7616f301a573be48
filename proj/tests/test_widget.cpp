#include <doctest.h>

#include <cmath>
#include <random>

#include "simdeck/widget.hpp"
#include "support.hpp"

using namespace simdeck;
using testsupport::error_code_of;

namespace {

/// Enumerates every lattice point and picks the closest, preferring the
/// larger one on exact ties.
double quantize_oracle(double raw, double min, double max, double inc) {
  double best = min;
  double best_d = std::abs(raw - min);
  for (long k = 1;; ++k) {
    const double p = min + k * inc;
    if (p > max + 1e-9 * inc) break;
    const double d = std::abs(raw - p);
    if (d <= best_d + 1e-12 * inc) {
      best = p;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("slider_quantize examples") {
  CHECK(slider_quantize(3.4, 0, 9, 1) == 3);
  CHECK(slider_quantize(12, 0, 9, 1) == 9);
  CHECK(slider_quantize(0, 0, 9, 1) == 0);
  CHECK(slider_quantize(3.5, 0, 9, 1) == 4);
  CHECK(slider_quantize(-3, 0, 9, 1) == 0);
}

TEST_CASE("property: slider_quantize matches the enumeration oracle and stays on the lattice") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  std::uniform_int_distribution<int> steps(1, 40);
  for (int i = 0; i < 20000; ++i) {
    const double min = std::round(u(rng));
    const double inc = steps(rng) / 4.0;
    const double max = min + inc * steps(rng) + (i % 3 == 0 ? inc / 3 : 0.0);
    const double raw = i % 5 == 0 ? min + inc * (steps(rng) + 0.5) : u(rng) * 2;
    const double q = slider_quantize(raw, min, max, inc);
    CHECK(q >= min);
    CHECK(q <= max);
    const double k = (q - min) / inc;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
    CHECK(q == doctest::Approx(quantize_oracle(raw, min, max, inc)).epsilon(1e-12));
  }
}

TEST_CASE("checkbox encoding") {
  const std::vector<std::string> items{"AA", "BB", "CC", "DD"};
  CHECK(checkbox_decode("0110", items) == std::vector<std::string>{"BB", "CC"});
  CHECK(checkbox_encode({}, items) == "0000");
  CHECK(checkbox_decode(checkbox_encode({"AA", "DD"}, items), items) == std::vector<std::string>{"AA", "DD"});
  CHECK(error_code_of([&] { checkbox_decode("011", items); }) == "encoding length");
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::string bits;
    for (int i = 0; i < 4; ++i) bits += (mask >> i) & 1 ? '1' : '0';
    CHECK(checkbox_encode(checkbox_decode(bits, items), items) == bits);
  }
}

TEST_CASE("apply_param_widget typed writes") {
  WidgetState s({"s", {}, SliderConfig{200, 1, 0, 9, 3, 1, ValueType::Int}, "var", -1}, std::int64_t{0});
  auto w = apply_param_widget(s, {4.6, {}});
  REQUIRE(w);
  CHECK(w->value == ParamValue{std::int64_t{5}});
  CHECK(w->target == "var");
  CHECK(s.current == ParamValue{std::int64_t{5}});

  WidgetState r({"r", {}, RadioButtonConfig{{"AA", "BB"}}, "sel", -1}, std::string("AA"));
  CHECK(apply_param_widget(r, {std::string("BB"), {}})->value == ParamValue{std::string("BB")});
  CHECK(error_code_of([&] { apply_param_widget(r, {std::string("ZZ"), {}}); }) == "unknown item");

  WidgetState l({"l", {}, ListSelConfig{20, 5, {"1", "2", "3"}, ValueType::Int}, "n", 2}, std::int64_t{1});
  const auto lw = apply_param_widget(l, {std::string("2"), {}});
  CHECK(lw->value == ParamValue{std::int64_t{2}});
  CHECK(lw->list_index == 2);

  WidgetState bad({"l", {}, ListSelConfig{20, 5, {"A", "B"}, ValueType::Int}, "n", -1}, std::int64_t{1});
  CHECK(error_code_of([&] { apply_param_widget(bad, {std::string("A"), {}}); }) == "type conversion");
  CHECK(bad.current == ParamValue{std::int64_t{1}});

  WidgetState t({"t", {}, TextInConfig{20, 5}, "txt", -1}, std::string(""));
  CHECK(apply_param_widget(t, {std::string("hello & bye"), {}})->value == ParamValue{std::string("hello & bye")});
}

TEST_CASE("dictslider writes one keyed member") {
  DictSliderConfig c{200, 20, 1, 0, 10, 1,
                     {{"Item1", 0, 9, 3, 1, "item1", ValueType::Int}, {"Item2", 0, 30, 4, 2, "item2", ValueType::Float}}};
  WidgetState s({"d", {}, c, "dict_par", -1}, KeyedGroup{{{"item1", std::int64_t{3}}, {"item2", 0.5}}});
  CHECK(s.selected_item_key == "item2");
  auto w = apply_param_widget(s, {7.1, {}});
  CHECK(w->key == std::optional<std::string>("item2"));
  CHECK(w->value == ParamValue{8.0});
  w = apply_param_widget(s, {4.4, "item1"});
  CHECK(w->value == ParamValue{std::int64_t{4}});
  CHECK(s.current == ParamValue{KeyedGroup{{{"item1", std::int64_t{4}}, {"item2", 8.0}}}});
  CHECK(error_code_of([&] { apply_param_widget(s, {1.0, "nope"}); }) == "unknown item");
}

TEST_CASE("button pulses for exactly one read") {
  WidgetState b({"b", {}, ButtonConfig{"l", "Go"}, "btn", -1}, std::string("0"));
  CHECK(button_read_and_reset(b) == "0");
  CHECK_FALSE(apply_param_widget(b, {std::string("click"), {}}));
  CHECK(button_read_and_reset(b) == "1");
  CHECK(button_read_and_reset(b) == "0");
  apply_param_widget(b, {std::string("click"), {}});
  apply_param_widget(b, {std::string("click"), {}});
  CHECK(button_read_and_reset(b) == "1");
  CHECK(button_read_and_reset(b) == "0");
}

TEST_CASE("image_normalize") {
  ImageBuffer buf(3, 1);
  buf.data = {255, 300, -5};
  CHECK(image_normalize(buf, 0, 255).data == std::vector<std::uint8_t>{255, 255, 0});
  ImageBuffer z(1, 1);
  z.data = {0.0};
  CHECK(image_normalize(z, -1, 1).data[0] == 128);
  CHECK(error_code_of([&] { image_normalize(z, 1, 1); }) == "bad range");

  ImageBuffer ramp(2001, 1);
  for (int i = 0; i < 2001; ++i) ramp.data[i] = -2 + i * 0.002;
  const auto n = image_normalize(ramp, -1, 1);
  for (int i = 1; i < 2001; ++i) CHECK(n.data[i] >= n.data[i - 1]);
  CHECK(n.data[500] == 0);
  CHECK(n.data[1500] == 255);
}
