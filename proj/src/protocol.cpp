#include "simdeck/protocol.hpp"

#include <cstring>
#include <limits>

#include "simdeck/error.hpp"
#include "simdeck/model_json.hpp"

namespace simdeck::protocol {

using nlohmann::json;

namespace {

constexpr std::uint8_t kMagic[4] = {'I', 'V', 'I', 'M'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(b[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

[[noreturn]] void bad(const std::string& detail) { throw Error("bad_message", detail); }

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field ") + name);
  return *it;
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i >= std::numeric_limits<int>::min() && i <= std::numeric_limits<int>::max()) return static_cast<int>(i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == static_cast<double>(static_cast<int>(d))) return static_cast<int>(d);
  }
  bad(std::string(name) + " must be an integer");
}

double number_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) bad(std::string(name) + " must be a number");
  return v.get<double>();
}

std::string string_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_string()) bad(std::string(name) + " must be a string");
  return v.get<std::string>();
}

json widget_entry(const WidgetCollection& c, WidgetTable table, std::size_t i) {
  json w;
  w["id"] = widget_id_of(c, table, i);
  w["table"] = std::string(to_string(table));
  switch (table) {
    case WidgetTable::Parameter: {
      const auto& p = c.pwidgets[i];
      w["kind"] = std::string(to_string(p.kind()));
      w["name"] = p.name;
      w["geometry"] = {{"x", p.geometry.x}, {"y", p.geometry.y}};
      w["config"] = config_to_json(p.config);
      w["target"] = p.target;
      w["list_index"] = p.list_index;
      const ParameterDef* def = c.find_parameter(p.target, p.list_index);
      w["value"] = def ? value_to_json(def->value) : json(nullptr);
      break;
    }
    case WidgetTable::Data: {
      const auto& d = c.dwidgets[i];
      w["kind"] = std::string(to_string(d.kind()));
      w["name"] = d.name;
      w["geometry"] = {{"x", d.geometry.x}, {"y", d.geometry.y}};
      w["config"] = config_to_json(d.config);
      w["target"] = d.target;
      break;
    }
    case WidgetTable::Comment: {
      const auto& m = c.comments[i];
      w["kind"] = "COMMENT";
      w["name"] = m.name;
      w["geometry"] = {{"x", m.geometry.x}, {"y", m.geometry.y}};
      w["body"] = m.body;
      break;
    }
  }
  return w;
}

}  // namespace

std::vector<std::uint8_t> encode_image_frame(std::uint32_t widget_id, const Image8& img) {
  if (img.width > 0xFFFF || img.height > 0xFFFF) throw Error("frame too large");
  if (img.width < 0 || img.height < 0 || (img.channels != 1 && img.channels != 3)) throw Error("bad frame", "channels");
  const std::size_t payload = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) *
                              static_cast<std::size_t>(img.channels);
  if (img.data.size() != payload) throw Error("bad frame", "buffer size");
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderSize + payload);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kFrameVersion);
  put_le(out, widget_id, 4);
  put_le(out, static_cast<std::uint64_t>(img.width), 2);
  put_le(out, static_cast<std::uint64_t>(img.height), 2);
  out.push_back(static_cast<std::uint8_t>(img.channels));
  out.push_back(0);
  out.push_back(0);
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

ImageFrame decode_image_frame(std::span<const std::uint8_t> b) {
  if (b.size() < kFrameHeaderSize) throw Error("bad frame", "short header");
  if (std::memcmp(b.data(), kMagic, 4) != 0) throw Error("bad frame", "magic");
  if (b[4] != kFrameVersion) throw Error("bad frame", "version");
  ImageFrame f;
  f.widget_id = static_cast<std::uint32_t>(get_le(b, 5, 4));
  const int w = static_cast<int>(get_le(b, 9, 2));
  const int h = static_cast<int>(get_le(b, 11, 2));
  const int ch = b[13];
  if (ch != 1 && ch != 3) throw Error("bad frame", "channels");
  if (b[14] != 0 || b[15] != 0) throw Error("bad frame", "reserved");
  const std::size_t payload = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(ch);
  if (b.size() != kFrameHeaderSize + payload) throw Error("bad frame", "payload size");
  f.image = Image8(w, h, ch);
  std::copy(b.begin() + kFrameHeaderSize, b.end(), f.image.data.begin());
  return f;
}

Input parse_client_message(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("invalid JSON");
  if (!j.is_object()) bad("expected an object");
  const std::string type = string_field(j, "type");
  if (type == "action") {
    const std::string cmd = string_field(j, "cmd");
    const auto c = command_from_string(cmd);
    if (!c) throw Error("bad command", cmd);
    return *c;
  }
  if (type == "set_param") {
    SetParam p;
    p.widget_id = int_field(j, "widget_id");
    const json& v = field(j, "value");
    if (v.is_number())
      p.value.value = v.get<double>();
    else if (v.is_string())
      p.value.value = v.get<std::string>();
    else
      bad("value must be a number or a string");
    if (j.contains("item")) p.value.item = string_field(j, "item");
    return p;
  }
  if (type == "pointer") {
    Pointer p;
    p.widget_id = int_field(j, "widget_id");
    const auto kind = pointer_kind_from_string(string_field(j, "kind"));
    if (!kind) bad("kind must be press, move or release");
    p.event.kind = *kind;
    p.event.button = j.contains("button") ? int_field(j, "button") : 1;
    p.event.pos = {number_field(j, "x_px"), number_field(j, "y_px")};
    return p;
  }
  if (type == "set_geometry") return SetGeometry{int_field(j, "widget_id"), Geometry{int_field(j, "x"), int_field(j, "y")}};
  if (type == "select_context") return SelectContext{string_field(j, "name")};
  bad("unknown type " + type);
}

json client_message(const Input& input) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Command>) {
          return {{"type", "action"}, {"cmd", std::string(to_string(v))}};
        } else if constexpr (std::is_same_v<T, SetParam>) {
          json j{{"type", "set_param"}, {"widget_id", v.widget_id}};
          std::visit([&](const auto& x) { j["value"] = x; }, v.value.value);
          if (!v.value.item.empty()) j["item"] = v.value.item;
          return j;
        } else if constexpr (std::is_same_v<T, Pointer>) {
          return {{"type", "pointer"},     {"widget_id", v.widget_id}, {"kind", std::string(to_string(v.event.kind))},
                  {"button", v.event.button}, {"x_px", v.event.pos.x},  {"y_px", v.event.pos.y}};
        } else if constexpr (std::is_same_v<T, SetGeometry>) {
          return {{"type", "set_geometry"}, {"widget_id", v.widget_id}, {"x", v.geometry.x}, {"y", v.geometry.y}};
        } else if constexpr (std::is_same_v<T, SelectContext>) {
          return {{"type", "select_context"}, {"name", v.name}};
        } else {
          throw Error("bad_message", "input has no wire form");
        }
      },
      input);
}

json layout_message(const Layout& layout) {
  const auto& c = layout.collection;
  json widgets = json::array();
  for (std::size_t i = 0; i < c.pwidgets.size(); ++i) widgets.push_back(widget_entry(c, WidgetTable::Parameter, i));
  for (std::size_t i = 0; i < c.dwidgets.size(); ++i) widgets.push_back(widget_entry(c, WidgetTable::Data, i));
  for (std::size_t i = 0; i < c.comments.size(); ++i) widgets.push_back(widget_entry(c, WidgetTable::Comment, i));
  return {{"type", "layout"},
          {"context", c.context.name},
          {"app_name", c.context.app_name},
          {"contexts", layout.contexts},
          {"unresolved", layout.unresolved},
          {"widgets", std::move(widgets)}};
}

json frame_meta_message(const Frame& frame) {
  json texts = json::array(), images = json::array(), params = json::array();
  for (const auto& [id, t] : frame.texts) texts.push_back({{"id", id}, {"text", t}});
  for (const auto& [id, img] : frame.images) images.push_back(id);
  for (const auto& [id, v] : frame.params) params.push_back({{"id", id}, {"value", value_to_json(v)}});
  return {{"type", "frame_meta"}, {"step", frame.step}, {"texts", texts}, {"images", images}, {"params", params}};
}

json error_message(std::string_view code, std::string_view detail) {
  return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

json report_message(const json& report) {
  json j = report;
  j["type"] = "report";
  return j;
}

}  // namespace simdeck::protocol
