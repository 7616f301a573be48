#include <doctest.h>

#include <random>

#include "simdeck/model.hpp"
#include "simdeck/model_json.hpp"
#include "support.hpp"

using namespace simdeck;
using testsupport::error_code_of;

namespace {

ParameterWidgetDef slider(const std::string& name, const std::string& target, double min = 0, double max = 1) {
  return {name, {}, SliderConfig{200, 1, min, max, 5, 0.01, ValueType::Float}, target, -1};
}

ParameterDef fparam(const std::string& name, double v) { return {name, ParamKind::Float, v, -1}; }

std::vector<std::string> rules(const WidgetCollection& c) {
  std::vector<std::string> out;
  for (const auto& v : validate_collection(c)) out.push_back(v.rule);
  return out;
}

}  // namespace

TEST_CASE("validate_collection") {
  WidgetCollection empty;
  CHECK(empty.context.name == "N.N.");
  CHECK(validate_collection(empty).empty());

  WidgetCollection dangling;
  dangling.pwidgets.push_back(slider("Decay Factor", "decay"));
  const auto v = validate_collection(dangling);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "dangling target");
  CHECK(v[0].record == "tb_parameterwidget:Decay Factor");

  WidgetCollection cb;
  cb.parameters.push_back({"bits", ParamKind::String, std::string("011"), -1});
  cb.pwidgets.push_back({"cb", {}, CheckboxConfig{{"AA", "BB", "CC", "DD"}}, "bits", -1});
  CHECK(rules(cb) == std::vector<std::string>{"encoding length"});

  WidgetCollection range;
  range.parameters.push_back(fparam("x", 2.0));
  range.pwidgets.push_back(slider("s", "x"));
  CHECK(rules(range) == std::vector<std::string>{"value out of range"});

  WidgetCollection img;
  img.data.push_back({"im", DataKind::Image});
  img.dwidgets.push_back({"i", {}, ImageConfig{0.0, 1, 1, ValueType::Int}, "im"});
  CHECK(rules(img) == std::vector<std::string>{"image range", "scale"});

  WidgetCollection dup;
  dup.parameters.push_back(fparam("x", 0.5));
  dup.pwidgets.push_back(slider("s", "x"));
  dup.pwidgets.push_back(slider("s", "x"));
  CHECK(rules(dup) == std::vector<std::string>{"duplicate name"});
}

TEST_CASE("upsert_widget") {
  WidgetCollection c;
  auto w = slider("Decay Factor", "decay");
  w.geometry = {9, 9};
  CHECK(upsert_widget(c, w, UpsertPolicy::PreserveState) == UpsertOutcome::Created);
  CHECK(c.pwidgets.at(0).geometry == Geometry{0, 0});

  c.pwidgets[0].geometry = {40, 80};
  auto wider = slider("Decay Factor", "decay", 0, 2);
  CHECK(upsert_widget(c, wider, UpsertPolicy::PreserveState) == UpsertOutcome::Updated);
  CHECK(c.pwidgets[0].geometry == Geometry{40, 80});
  CHECK(std::get<SliderConfig>(c.pwidgets[0].config).max == 2);

  CHECK(upsert_widget(c, wider, UpsertPolicy::Overwrite) == UpsertOutcome::Updated);
  CHECK(c.pwidgets[0].geometry == Geometry{0, 0});

  ParameterWidgetDef cbx{"Decay Factor", {}, CheckboxConfig{{"A"}}, "decay", -1};
  CHECK(error_code_of([&] { upsert_widget(c, cbx, UpsertPolicy::PreserveState); }) == "kind conflict");
}

TEST_CASE("property: overwrite upsert is idempotent and upserts keep collections valid") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    WidgetCollection c;
    const int n = 1 + trial % 7;
    for (int i = 0; i < 3 * n; ++i) {
      const std::string name = "w" + std::to_string(rng() % n);
      const std::string target = "p" + std::to_string(rng() % n);
      const double max = 1 + rng() % 5;
      upsert_parameter(c, fparam(target, 0.5), UpsertPolicy::PreserveState);
      const auto pol = rng() % 2 ? UpsertPolicy::Overwrite : UpsertPolicy::PreserveState;
      upsert_widget(c, slider(name, target, 0, max), pol);
      c.pwidgets.back().geometry = {static_cast<int>(rng() % 100), static_cast<int>(rng() % 100)};
    }
    CHECK(validate_collection(c).empty());
    auto w = slider("w0", "p0", 0, 3);
    auto once = c;
    upsert_widget(once, w, UpsertPolicy::Overwrite);
    auto twice = once;
    CHECK(upsert_widget(twice, w, UpsertPolicy::Overwrite) == UpsertOutcome::Unchanged);
    CHECK(twice == once);
  }
}

TEST_CASE("upsert_parameter keeps keyed group values for surviving keys") {
  WidgetCollection c;
  upsert_parameter(c, {"g", ParamKind::KeyedGroup, KeyedGroup{{{"a", 1.0}, {"b", 2.0}}}, -1},
                   UpsertPolicy::PreserveState);
  std::get<KeyedGroup>(c.parameters[0].value).set("a", 7.0);
  upsert_parameter(c, {"g", ParamKind::KeyedGroup, KeyedGroup{{{"c", 3.0}, {"a", 1.0}}}, -1},
                   UpsertPolicy::PreserveState);
  CHECK(c.parameters[0].value == ParamValue{KeyedGroup{{{"c", 3.0}, {"a", 7.0}}}});
  CHECK(error_code_of([&] { std::get<KeyedGroup>(c.parameters[0].value).get("zz"); }) == "unknown item");
}

TEST_CASE("resolve_bindings") {
  WidgetCollection c;
  c.parameters.push_back(fparam("decay", 0.5));
  c.parameters.push_back({"dict_par", ParamKind::KeyedGroup, KeyedGroup{{{"item1", std::int64_t{3}}}}, -1});
  c.data.push_back({"im_voltage", DataKind::Image});
  c.pwidgets.push_back(slider("s", "decay"));
  c.pwidgets.push_back({"d", {}, DictSliderConfig{200, 20, 1, 0, 10, 0, {{"Item1", 0, 9, 3, 1, "item1", ValueType::Int}}},
                        "dict_par", -1});
  c.dwidgets.push_back({"v", {}, ImageConfig{}, "im_voltage"});

  SimRegistry reg;
  reg["decay"] = {FieldRole::Parameter, FieldType::Int, {}, {}};
  reg["dict_par"] = {FieldRole::Parameter, FieldType::KeyedGroup, {}, {"other"}};
  const auto b = resolve_bindings(c, reg);
  CHECK(b.is_bound(WidgetTable::Parameter, "s"));
  CHECK(b.is_bound(WidgetTable::Parameter, "d"));
  CHECK_FALSE(b.is_bound(WidgetTable::Data, "v"));
  CHECK(b.unresolved == std::vector<std::string>{"d/item1", "v"});
}

TEST_CASE("value text encoding round trips every kind") {
  const std::vector<ParamValue> values = {std::int64_t{-42}, 0.1, 1e300, std::string("a & b"),
                                          KeyedGroup{{{"x", std::int64_t{1}}, {"y", 0.25}}}};
  for (const auto& v : values) CHECK(value_from_text(kind_of(v), value_to_text(v)) == v);
  CHECK(error_code_of([] { value_from_text(ParamKind::Int, "1.5"); }) == "bad value");
}
