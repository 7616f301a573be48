#include "simdeck/widget.hpp"

#include <algorithm>
#include <cmath>

#include "simdeck/error.hpp"
#include "simdeck/text.hpp"

namespace simdeck {

double slider_quantize(double raw, double min, double max, double increment) {
  const double k_max = std::floor((max - min) / increment + 1e-9);
  double k = std::floor((raw - min) / increment + 0.5 + 1e-9);
  if (std::isnan(k)) k = 0;
  k = std::clamp(k, 0.0, k_max);
  return std::min(max, min + k * increment);
}

std::string checkbox_encode(const std::vector<std::string>& selected, const std::vector<std::string>& items) {
  for (const auto& s : selected)
    if (std::find(items.begin(), items.end(), s) == items.end()) throw Error("unknown item", s);
  std::string bits(items.size(), '0');
  for (std::size_t i = 0; i < items.size(); ++i)
    if (std::find(selected.begin(), selected.end(), items[i]) != selected.end()) bits[i] = '1';
  return bits;
}

std::vector<std::string> checkbox_decode(std::string_view bits, const std::vector<std::string>& items) {
  if (bits.size() != items.size() || bits.find_first_not_of("01") != std::string_view::npos)
    throw Error("encoding length", std::string(bits));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (bits[i] == '1') out.push_back(items[i]);
  return out;
}

WidgetState::WidgetState(ParameterWidgetDef d, ParamValue v) : def(std::move(d)), current(std::move(v)) {
  if (const auto* ds = std::get_if<DictSliderConfig>(&def.config); ds && !ds->items.empty())
    selected_item_key = ds->items[std::clamp<std::size_t>(ds->selected, 0, ds->items.size() - 1)].key;
}

namespace {

double ui_number(const UiValue& ui) {
  if (const auto* d = std::get_if<double>(&ui.value)) {
    if (!std::isfinite(*d)) throw Error("type conversion", "non-finite");
    return *d;
  }
  const auto v = text::parse_double(std::get<std::string>(ui.value));
  if (!v || !std::isfinite(*v)) throw Error("type conversion", std::get<std::string>(ui.value));
  return *v;
}

std::string ui_text(const UiValue& ui) {
  if (const auto* s = std::get_if<std::string>(&ui.value)) return *s;
  return text::format_double(std::get<double>(ui.value));
}

ParamValue typed_number(double v, ValueType t) {
  if (t == ValueType::Int) return static_cast<std::int64_t>(std::llround(v));
  return v;
}

ParamValue convert_item(const std::string& item, ValueType t) {
  switch (t) {
    case ValueType::String:
      return item;
    case ValueType::Int:
      if (auto i = text::parse_int(item)) return *i;
      break;
    case ValueType::Float:
      if (auto d = text::parse_double(item)) return *d;
      break;
  }
  throw Error("type conversion", item + " as " + std::string(to_string(t)));
}

void require_item(const std::vector<std::string>& items, const std::string& item) {
  if (std::find(items.begin(), items.end(), item) == items.end()) throw Error("unknown item", item);
}

}  // namespace

std::optional<ParamWrite> apply_param_widget(WidgetState& state, const UiValue& ui) {
  const auto& w = state.def;
  ParamWrite write{w.target, w.list_index, std::nullopt, {}};

  if (const auto* c = std::get_if<SliderConfig>(&w.config)) {
    write.value = typed_number(slider_quantize(ui_number(ui), c->min, c->max, c->increment), c->type);
  } else if (const auto* c = std::get_if<DictSliderConfig>(&w.config)) {
    const std::string key = ui.item.empty() ? state.selected_item_key : ui.item;
    const auto it = std::find_if(c->items.begin(), c->items.end(), [&](const auto& i) { return i.key == key; });
    if (it == c->items.end()) throw Error("unknown item", key);
    const auto v = typed_number(slider_quantize(ui_number(ui), it->min, it->max, it->increment), it->type);
    const Number n = std::holds_alternative<std::int64_t>(v) ? Number{std::get<std::int64_t>(v)}
                                                              : Number{std::get<double>(v)};
    auto* group = std::get_if<KeyedGroup>(&state.current);
    if (!group) throw Error("type conversion", "parameter is not a keyed group");
    group->set(key, n);
    state.selected_item_key = key;
    write.key = key;
    write.value = v;
    return write;
  } else if (std::holds_alternative<TextInConfig>(w.config)) {
    write.value = ui_text(ui);
  } else if (const auto* c = std::get_if<ListSelConfig>(&w.config)) {
    const auto item = ui_text(ui);
    require_item(c->items, item);
    write.value = convert_item(item, c->type);
  } else if (const auto* c = std::get_if<CheckboxConfig>(&w.config)) {
    const auto bits = ui_text(ui);
    checkbox_decode(bits, c->items);
    write.value = bits;
  } else if (const auto* c = std::get_if<RadioButtonConfig>(&w.config)) {
    const auto item = ui_text(ui);
    require_item(c->items, item);
    write.value = item;
  } else if (std::holds_alternative<ButtonConfig>(w.config)) {
    state.clicked = true;
    return std::nullopt;
  }
  state.current = write.value;
  return write;
}

std::string button_read_and_reset(WidgetState& state) {
  const bool was = state.clicked;
  state.clicked = false;
  return was ? "1" : "0";
}

Image8 image_normalize(const ImageBuffer& buf, double lo, double hi) {
  if (!(hi > lo)) throw Error("bad range", "hi must exceed lo");
  Image8 out(buf.width, buf.height, buf.channels);
  const double span = hi - lo;
  for (std::size_t i = 0; i < buf.data.size(); ++i) {
    const double v = buf.data[i];
    if (std::isnan(v)) continue;
    const double t = std::clamp((v - lo) / span, 0.0, 1.0);
    out.data[i] = static_cast<std::uint8_t>(std::floor(255.0 * t + 0.5));
  }
  return out;
}

}  // namespace simdeck
