#include "simdeck/model_json.hpp"

#include "simdeck/error.hpp"
#include "simdeck/text.hpp"

namespace simdeck {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ValueType type_field(const json& j, const char* key) {
  const auto t = value_type_from_string(j.at(key).get<std::string>());
  if (!t) throw Error("bad config", std::string("type ") + key);
  return *t;
}

json number_to_json(const Number& n) {
  return std::visit([](auto v) { return json(v); }, n);
}

Number number_from_json(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  throw Error("bad value", "expected number");
}

json item_to_json(const DictSliderItem& i) {
  return {{"label", i.label}, {"min", i.min},   {"max", i.max},
          {"nticks", i.nticks}, {"increment", i.increment}, {"key", i.key},
          {"type", to_string(i.type)}};
}

DictSliderItem item_from_json(const json& j) {
  DictSliderItem i;
  i.label = j.at("label").get<std::string>();
  i.min = j.at("min").get<double>();
  i.max = j.at("max").get<double>();
  i.nticks = j.at("nticks").get<int>();
  i.increment = j.at("increment").get<double>();
  i.key = j.at("key").get<std::string>();
  i.type = type_field(j, "type");
  return i;
}

}  // namespace

json config_to_json(const ParamWidgetConfig& c) {
  return std::visit(
      overloaded{
          [](const SliderConfig& s) -> json {
            return {{"width", s.width},   {"height", s.height},        {"min", s.min}, {"max", s.max},
                    {"nticks", s.nticks}, {"increment", s.increment}, {"type", to_string(s.type)}};
          },
          [](const DictSliderConfig& s) -> json {
            json items = json::array();
            for (const auto& i : s.items) items.push_back(item_to_json(i));
            return {{"width", s.width},
                    {"columns", s.columns},
                    {"rows", s.rows},
                    {"display_mode", s.display_mode},
                    {"font_size", s.font_size},
                    {"selected", s.selected},
                    {"items", items}};
          },
          [](const TextInConfig& s) -> json { return {{"columns", s.columns}, {"rows", s.rows}}; },
          [](const ListSelConfig& s) -> json {
            return {{"columns", s.columns}, {"rows", s.rows}, {"items", s.items}, {"type", to_string(s.type)}};
          },
          [](const CheckboxConfig& s) -> json { return {{"items", s.items}}; },
          [](const RadioButtonConfig& s) -> json { return {{"items", s.items}}; },
          [](const ButtonConfig& s) -> json { return {{"label_text", s.label_text}, {"button_text", s.button_text}}; },
      },
      c);
}

ParamWidgetConfig param_config_from_json(WidgetKind kind, const json& j) {
  try {
    switch (kind) {
      case WidgetKind::Slider: {
        SliderConfig s;
        s.width = j.at("width").get<int>();
        s.height = j.at("height").get<int>();
        s.min = j.at("min").get<double>();
        s.max = j.at("max").get<double>();
        s.nticks = j.at("nticks").get<int>();
        s.increment = j.at("increment").get<double>();
        s.type = type_field(j, "type");
        return s;
      }
      case WidgetKind::DictSlider: {
        DictSliderConfig s;
        s.width = j.at("width").get<int>();
        s.columns = j.at("columns").get<int>();
        s.rows = j.at("rows").get<int>();
        s.display_mode = j.at("display_mode").get<int>();
        s.font_size = j.at("font_size").get<int>();
        s.selected = j.at("selected").get<int>();
        for (const auto& i : j.at("items")) s.items.push_back(item_from_json(i));
        return s;
      }
      case WidgetKind::TextIn:
        return TextInConfig{j.at("columns").get<int>(), j.at("rows").get<int>()};
      case WidgetKind::ListSel:
        return ListSelConfig{j.at("columns").get<int>(), j.at("rows").get<int>(),
                             j.at("items").get<std::vector<std::string>>(), type_field(j, "type")};
      case WidgetKind::Checkbox:
        return CheckboxConfig{j.at("items").get<std::vector<std::string>>()};
      case WidgetKind::RadioButton:
        return RadioButtonConfig{j.at("items").get<std::vector<std::string>>()};
      case WidgetKind::Button:
        return ButtonConfig{j.at("label_text").get<std::string>(), j.at("button_text").get<std::string>()};
      default:
        break;
    }
  } catch (const json::exception& e) {
    throw Error("bad config", e.what());
  }
  throw Error("bad config", "not a parameter widget kind");
}

json config_to_json(const DataWidgetConfig& c) {
  return std::visit(overloaded{
                        [](const ImageConfig& s) -> json {
                          return {{"scale", s.scale}, {"lo", s.lo}, {"hi", s.hi}, {"type", to_string(s.type)}};
                        },
                        [](const TextOutConfig& s) -> json {
                          return {{"columns", s.columns},
                                  {"rows", s.rows},
                                  {"justification", to_string(s.justification)}};
                        },
                    },
                    c);
}

DataWidgetConfig data_config_from_json(WidgetKind kind, const json& j) {
  try {
    if (kind == WidgetKind::Image)
      return ImageConfig{j.at("scale").get<double>(), j.at("lo").get<double>(), j.at("hi").get<double>(),
                         type_field(j, "type")};
    if (kind == WidgetKind::TextOut) {
      const auto just = justification_from_string(j.at("justification").get<std::string>());
      if (!just) throw Error("bad config", "justification");
      return TextOutConfig{j.at("columns").get<int>(), j.at("rows").get<int>(), *just};
    }
  } catch (const json::exception& e) {
    throw Error("bad config", e.what());
  }
  throw Error("bad config", "not a data widget kind");
}

json value_to_json(const ParamValue& v) {
  return std::visit(overloaded{
                        [](std::int64_t i) -> json { return i; },
                        [](double d) -> json { return d; },
                        [](const std::string& s) -> json { return s; },
                        [](const KeyedGroup& g) -> json {
                          json arr = json::array();
                          for (const auto& e : g.entries) arr.push_back({{"key", e.key}, {"value", number_to_json(e.value)}});
                          return arr;
                        },
                    },
                    v);
}

ParamValue value_from_json(ParamKind kind, const json& j) {
  switch (kind) {
    case ParamKind::Int:
      if (j.is_number_integer()) return j.get<std::int64_t>();
      break;
    case ParamKind::Float:
      if (j.is_number()) return j.get<double>();
      break;
    case ParamKind::String:
      if (j.is_string()) return j.get<std::string>();
      break;
    case ParamKind::KeyedGroup:
      if (j.is_array()) {
        KeyedGroup g;
        for (const auto& e : j) {
          if (!e.is_object() || !e.contains("key") || !e.contains("value")) throw Error("bad value", "keyed entry");
          g.entries.push_back({e.at("key").get<std::string>(), number_from_json(e.at("value"))});
        }
        return g;
      }
      break;
  }
  throw Error("bad value", "expected " + std::string(to_string(kind)));
}

std::string value_to_text(const ParamValue& v) {
  return std::visit(overloaded{
                        [](std::int64_t i) { return text::format_int(i); },
                        [](double d) { return text::format_double(d); },
                        [](const std::string& s) { return s; },
                        [&](const KeyedGroup&) { return value_to_json(v).dump(); },
                    },
                    v);
}

ParamValue value_from_text(ParamKind kind, std::string_view t) {
  switch (kind) {
    case ParamKind::Int:
      if (auto i = text::parse_int(t)) return *i;
      break;
    case ParamKind::Float:
      if (auto d = text::parse_double(t)) return *d;
      break;
    case ParamKind::String:
      return std::string(t);
    case ParamKind::KeyedGroup: {
      auto j = json::parse(t, nullptr, false);
      if (!j.is_discarded()) return value_from_json(kind, j);
      break;
    }
  }
  throw Error("bad value", std::string(t));
}

json collection_to_json(const WidgetCollection& c) {
  json j;
  j["context"] = {{"name", c.context.name}, {"app_name", c.context.app_name}};
  j["parameters"] = json::array();
  for (const auto& p : c.parameters)
    j["parameters"].push_back(
        {{"name", p.name}, {"kind", to_string(p.kind)}, {"value", value_to_json(p.value)}, {"list_index", p.list_index}});
  j["data"] = json::array();
  for (const auto& d : c.data) j["data"].push_back({{"name", d.name}, {"kind", to_string(d.kind)}});
  j["pwidgets"] = json::array();
  for (const auto& w : c.pwidgets)
    j["pwidgets"].push_back({{"kind", to_string(w.kind())},
                             {"name", w.name},
                             {"x", w.geometry.x},
                             {"y", w.geometry.y},
                             {"config", config_to_json(w.config)},
                             {"target", w.target},
                             {"list_index", w.list_index}});
  j["dwidgets"] = json::array();
  for (const auto& w : c.dwidgets)
    j["dwidgets"].push_back({{"kind", to_string(w.kind())},
                             {"name", w.name},
                             {"x", w.geometry.x},
                             {"y", w.geometry.y},
                             {"config", config_to_json(w.config)},
                             {"target", w.target}});
  j["comments"] = json::array();
  for (const auto& w : c.comments)
    j["comments"].push_back({{"name", w.name}, {"x", w.geometry.x}, {"y", w.geometry.y}, {"body", w.body}});
  return j;
}

WidgetCollection collection_from_json(const json& j) {
  try {
    WidgetCollection c;
    c.context.name = j.at("context").at("name").get<std::string>();
    c.context.app_name = j.at("context").at("app_name").get<std::string>();
    for (const auto& p : j.at("parameters")) {
      const auto kind = param_kind_from_string(p.at("kind").get<std::string>());
      if (!kind) throw Error("bad value", "parameter kind");
      c.parameters.push_back({p.at("name").get<std::string>(), *kind, value_from_json(*kind, p.at("value")),
                              p.at("list_index").get<int>()});
    }
    for (const auto& d : j.at("data")) {
      const auto kind = data_kind_from_string(d.at("kind").get<std::string>());
      if (!kind) throw Error("bad value", "data kind");
      c.data.push_back({d.at("name").get<std::string>(), *kind});
    }
    for (const auto& w : j.at("pwidgets")) {
      const auto kind = widget_kind_from_string(w.at("kind").get<std::string>());
      if (!kind) throw Error("bad config", "widget kind");
      c.pwidgets.push_back({w.at("name").get<std::string>(),
                            {w.at("x").get<int>(), w.at("y").get<int>()},
                            param_config_from_json(*kind, w.at("config")),
                            w.at("target").get<std::string>(),
                            w.at("list_index").get<int>()});
    }
    for (const auto& w : j.at("dwidgets")) {
      const auto kind = widget_kind_from_string(w.at("kind").get<std::string>());
      if (!kind) throw Error("bad config", "widget kind");
      c.dwidgets.push_back({w.at("name").get<std::string>(),
                            {w.at("x").get<int>(), w.at("y").get<int>()},
                            data_config_from_json(*kind, w.at("config")),
                            w.at("target").get<std::string>()});
    }
    for (const auto& w : j.at("comments"))
      c.comments.push_back(
          {w.at("name").get<std::string>(), {w.at("x").get<int>(), w.at("y").get<int>()}, w.at("body").get<std::string>()});
    return c;
  } catch (const json::exception& e) {
    throw Error("bad config", e.what());
  }
}

}  // namespace simdeck
