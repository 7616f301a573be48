#include "simdeck/model.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "simdeck/error.hpp"

namespace simdeck {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<std::string_view, 9> kWidgetKindNames = {
    "SLIDER", "DICTSLIDER", "TEXT_IN", "LISTSEL", "CHECKBOX", "RADIOBUTTON", "BUTTON", "IMAGE", "TEXT_OUT"};

std::string record_name(std::string_view table, std::string_view name) {
  return std::string(table) + ":" + std::string(name);
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

double as_double(const Number& n) {
  return std::visit([](auto v) { return static_cast<double>(v); }, n);
}

const Number* KeyedGroup::find(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

Number* KeyedGroup::find(std::string_view key) {
  for (auto& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

double KeyedGroup::get(std::string_view key) const {
  const Number* n = find(key);
  if (!n) throw Error("unknown item", std::string(key));
  return as_double(*n);
}

void KeyedGroup::set(std::string_view key, Number value) {
  if (Number* n = find(key)) {
    *n = value;
  } else {
    entries.push_back({std::string(key), value});
  }
}

ParamKind kind_of(const ParamValue& v) { return static_cast<ParamKind>(v.index()); }

std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::Int: return "int";
    case ParamKind::Float: return "float";
    case ParamKind::String: return "string";
    case ParamKind::KeyedGroup: return "keyed_group";
  }
  return "?";
}

std::optional<ParamKind> param_kind_from_string(std::string_view s) {
  if (s == "int") return ParamKind::Int;
  if (s == "float") return ParamKind::Float;
  if (s == "string") return ParamKind::String;
  if (s == "keyed_group") return ParamKind::KeyedGroup;
  return std::nullopt;
}

std::string_view to_string(ValueType t) {
  switch (t) {
    case ValueType::Int: return "int";
    case ValueType::Float: return "float";
    case ValueType::String: return "string";
  }
  return "?";
}

std::optional<ValueType> value_type_from_string(std::string_view s) {
  if (s == "int") return ValueType::Int;
  if (s == "float") return ValueType::Float;
  if (s == "string") return ValueType::String;
  return std::nullopt;
}

ParamKind param_kind_for(ValueType t) {
  switch (t) {
    case ValueType::Int: return ParamKind::Int;
    case ValueType::Float: return ParamKind::Float;
    case ValueType::String: return ParamKind::String;
  }
  return ParamKind::String;
}

std::string_view to_string(DataKind k) { return k == DataKind::Image ? "image" : "text"; }

std::optional<DataKind> data_kind_from_string(std::string_view s) {
  if (s == "image") return DataKind::Image;
  if (s == "text") return DataKind::Text;
  return std::nullopt;
}

std::string_view to_string(WidgetKind k) { return kWidgetKindNames[static_cast<std::size_t>(k)]; }

std::optional<WidgetKind> widget_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kWidgetKindNames.size(); ++i)
    if (kWidgetKindNames[i] == s) return static_cast<WidgetKind>(i);
  return std::nullopt;
}

std::string_view to_string(Justification j) {
  switch (j) {
    case Justification::Left: return "just_left";
    case Justification::Right: return "just_right";
    case Justification::Center: return "just_center";
  }
  return "just_center";
}

std::optional<Justification> justification_from_string(std::string_view s) {
  if (s == "just_left") return Justification::Left;
  if (s == "just_right") return Justification::Right;
  if (s == "just_center") return Justification::Center;
  return std::nullopt;
}

std::string_view to_string(WidgetTable t) {
  switch (t) {
    case WidgetTable::Parameter: return "tb_parameterwidget";
    case WidgetTable::Data: return "tb_datawidget";
    case WidgetTable::Comment: return "tb_commentwidget";
  }
  return "?";
}

WidgetKind ParameterWidgetDef::kind() const { return static_cast<WidgetKind>(config.index()); }

WidgetKind DataWidgetDef::kind() const {
  return std::holds_alternative<ImageConfig>(config) ? WidgetKind::Image : WidgetKind::TextOut;
}

// ---------------------------------------------------------------------------

ParameterDef* WidgetCollection::find_parameter(std::string_view name, int list_index) {
  for (auto& p : parameters)
    if (p.name == name && p.list_index == list_index) return &p;
  return nullptr;
}

const ParameterDef* WidgetCollection::find_parameter(std::string_view name, int list_index) const {
  return const_cast<WidgetCollection*>(this)->find_parameter(name, list_index);
}

const DataArrayDef* WidgetCollection::find_data(std::string_view name) const {
  for (const auto& d : data)
    if (d.name == name) return &d;
  return nullptr;
}

ParameterWidgetDef* WidgetCollection::find_pwidget(std::string_view name) {
  for (auto& w : pwidgets)
    if (w.name == name) return &w;
  return nullptr;
}

const ParameterWidgetDef* WidgetCollection::find_pwidget(std::string_view name) const {
  return const_cast<WidgetCollection*>(this)->find_pwidget(name);
}

DataWidgetDef* WidgetCollection::find_dwidget(std::string_view name) {
  for (auto& w : dwidgets)
    if (w.name == name) return &w;
  return nullptr;
}

const DataWidgetDef* WidgetCollection::find_dwidget(std::string_view name) const {
  return const_cast<WidgetCollection*>(this)->find_dwidget(name);
}

CommentWidgetDef* WidgetCollection::find_comment(std::string_view name) {
  for (auto& c : comments)
    if (c.name == name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool param_kind_compatible(const ParameterWidgetDef& w, ParamKind k) {
  return std::visit(overloaded{
                        [&](const SliderConfig& c) { return k == param_kind_for(c.type) && c.type != ValueType::String; },
                        [&](const DictSliderConfig&) { return k == ParamKind::KeyedGroup; },
                        [&](const ListSelConfig& c) { return k == param_kind_for(c.type); },
                        [&](const auto&) { return k == ParamKind::String; },
                    },
                    w.config);
}

void check_range(std::vector<std::string>& out, double min, double max, int nticks, double increment) {
  if (!(max > min)) out.emplace_back("range");
  if (!(increment > 0.0)) out.emplace_back("increment");
  if (nticks < 2) out.emplace_back("nticks");
}

}  // namespace

std::vector<std::string> widget_value_violations(const ParameterWidgetDef& w, const ParameterDef& p) {
  std::vector<std::string> out;
  if (!param_kind_compatible(w, p.kind) || kind_of(p.value) != p.kind) {
    out.emplace_back("kind mismatch");
    return out;
  }
  std::visit(overloaded{
                 [&](const SliderConfig& c) {
                   check_range(out, c.min, c.max, c.nticks, c.increment);
                   const double v = p.kind == ParamKind::Int ? static_cast<double>(std::get<std::int64_t>(p.value))
                                                             : std::get<double>(p.value);
                   if (!in_range(v, c.min, c.max)) out.emplace_back("value out of range");
                 },
                 [&](const DictSliderConfig& c) {
                   if (c.items.empty()) {
                     out.emplace_back("no items");
                     return;
                   }
                   const auto& group = std::get<KeyedGroup>(p.value);
                   for (const auto& item : c.items) {
                     check_range(out, item.min, item.max, item.nticks, item.increment);
                     const Number* n = group.find(item.key);
                     if (!n) {
                       out.emplace_back("missing item");
                       continue;
                     }
                     const bool want_int = item.type == ValueType::Int;
                     if (want_int != std::holds_alternative<std::int64_t>(*n)) out.emplace_back("item kind");
                     if (!in_range(as_double(*n), item.min, item.max)) out.emplace_back("value out of range");
                   }
                   if (c.selected < 0 || c.selected >= static_cast<int>(c.items.size()))
                     out.emplace_back("selected index");
                 },
                 [&](const CheckboxConfig& c) {
                   const auto& bits = std::get<std::string>(p.value);
                   if (bits.size() != c.items.size() ||
                       bits.find_first_not_of("01") != std::string::npos)
                     out.emplace_back("encoding length");
                 },
                 [&](const auto&) {},
             },
             w.config);
  return out;
}

std::vector<Violation> validate_collection(const WidgetCollection& coll) {
  std::vector<Violation> out;
  auto add = [&](std::string_view table, std::string_view name, std::string rule) {
    out.push_back({record_name(table, name), std::move(rule)});
  };

  if (coll.context.name.empty()) add("tb_simulation", "", "empty name");

  std::set<std::pair<std::string, int>> param_keys;
  for (const auto& p : coll.parameters) {
    if (p.name.empty()) add("tb_parameter", p.name, "empty name");
    if (kind_of(p.value) != p.kind) add("tb_parameter", p.name, "value kind");
    if (p.list_index < -1) add("tb_parameter", p.name, "list index");
    if (!param_keys.emplace(p.name, p.list_index).second) add("tb_parameter", p.name, "duplicate name");
    if (const auto* g = std::get_if<KeyedGroup>(&p.value)) {
      std::set<std::string> keys;
      for (const auto& e : g->entries)
        if (!keys.insert(e.key).second) add("tb_parameter", p.name, "duplicate key");
    }
  }

  std::set<std::string> data_names;
  for (const auto& d : coll.data) {
    if (d.name.empty()) add("tb_dataarray", d.name, "empty name");
    if (!data_names.insert(d.name).second) add("tb_dataarray", d.name, "duplicate name");
  }

  std::set<std::string> names;
  for (const auto& w : coll.pwidgets) {
    if (w.name.empty()) add("tb_parameterwidget", w.name, "empty name");
    if (!names.insert(w.name).second) add("tb_parameterwidget", w.name, "duplicate name");
    if (w.list_index < -1) add("tb_parameterwidget", w.name, "list index");
    const ParameterDef* p = coll.find_parameter(w.target, w.list_index);
    if (!p) {
      add("tb_parameterwidget", w.name, "dangling target");
      continue;
    }
    for (auto& rule : widget_value_violations(w, *p)) add("tb_parameterwidget", w.name, std::move(rule));
  }

  names.clear();
  for (const auto& w : coll.dwidgets) {
    if (w.name.empty()) add("tb_datawidget", w.name, "empty name");
    if (!names.insert(w.name).second) add("tb_datawidget", w.name, "duplicate name");
    const DataArrayDef* d = coll.find_data(w.target);
    if (!d) {
      add("tb_datawidget", w.name, "dangling target");
    } else if ((w.kind() == WidgetKind::Image) != (d->kind == DataKind::Image)) {
      add("tb_datawidget", w.name, "kind mismatch");
    }
    if (const auto* img = std::get_if<ImageConfig>(&w.config)) {
      if (!(img->hi > img->lo)) add("tb_datawidget", w.name, "image range");
      if (!(img->scale > 0.0)) add("tb_datawidget", w.name, "scale");
    }
  }

  names.clear();
  for (const auto& c : coll.comments) {
    if (c.name.empty()) add("tb_commentwidget", c.name, "empty name");
    if (!names.insert(c.name).second) add("tb_commentwidget", c.name, "duplicate name");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Upserts

namespace {

template <class Def>
UpsertOutcome upsert_into(std::vector<Def>& table, Def w, UpsertPolicy policy, bool same_kind_required) {
  auto it = std::find_if(table.begin(), table.end(), [&](const Def& e) { return e.name == w.name; });
  if (it == table.end()) {
    w.geometry = Geometry{};
    table.push_back(std::move(w));
    return UpsertOutcome::Created;
  }
  if constexpr (requires { w.kind(); }) {
    if (same_kind_required && it->kind() != w.kind())
      throw Error("kind conflict", w.name + " is " + std::string(to_string(it->kind())));
  }
  if (policy == UpsertPolicy::PreserveState) w.geometry = it->geometry;
  if (*it == w) return UpsertOutcome::Unchanged;
  *it = std::move(w);
  return UpsertOutcome::Updated;
}

}  // namespace

UpsertOutcome upsert_widget(WidgetCollection& coll, ParameterWidgetDef w, UpsertPolicy policy) {
  return upsert_into(coll.pwidgets, std::move(w), policy, true);
}

UpsertOutcome upsert_widget(WidgetCollection& coll, DataWidgetDef w, UpsertPolicy policy) {
  return upsert_into(coll.dwidgets, std::move(w), policy, true);
}

UpsertOutcome upsert_widget(WidgetCollection& coll, CommentWidgetDef w, UpsertPolicy policy) {
  return upsert_into(coll.comments, std::move(w), policy, false);
}

UpsertOutcome upsert_parameter(WidgetCollection& coll, ParameterDef p, UpsertPolicy policy) {
  ParameterDef* existing = coll.find_parameter(p.name, p.list_index);
  if (!existing) {
    coll.parameters.push_back(std::move(p));
    return UpsertOutcome::Created;
  }
  if (policy == UpsertPolicy::PreserveState && existing->kind == p.kind) {
    if (p.kind == ParamKind::KeyedGroup) {
      const auto& old_group = std::get<KeyedGroup>(existing->value);
      auto& new_group = std::get<KeyedGroup>(p.value);
      for (auto& e : new_group.entries) {
        const Number* old = old_group.find(e.key);
        if (old && old->index() == e.value.index()) e.value = *old;
      }
    } else {
      p.value = existing->value;
    }
  }
  if (*existing == p) return UpsertOutcome::Unchanged;
  *existing = std::move(p);
  return UpsertOutcome::Updated;
}

UpsertOutcome upsert_data_array(WidgetCollection& coll, DataArrayDef d) {
  for (auto& e : coll.data) {
    if (e.name != d.name) continue;
    if (e == d) return UpsertOutcome::Unchanged;
    e = std::move(d);
    return UpsertOutcome::Updated;
  }
  coll.data.push_back(std::move(d));
  return UpsertOutcome::Created;
}

// ---------------------------------------------------------------------------
// Bindings

bool BindingTable::is_bound(WidgetTable table, std::string_view widget) const {
  for (const auto& b : bindings)
    if (b.table == table && b.widget == widget) return b.resolved;
  return false;
}

namespace {

bool field_accepts(const ParameterWidgetDef& w, const FieldDescriptor& f) {
  return std::visit(overloaded{
                        [&](const SliderConfig&) { return f.type == FieldType::Int || f.type == FieldType::Float; },
                        [&](const DictSliderConfig&) { return f.type == FieldType::KeyedGroup; },
                        [&](const ListSelConfig& c) {
                          switch (c.type) {
                            case ValueType::Int: return f.type == FieldType::Int || f.type == FieldType::Float;
                            case ValueType::Float: return f.type == FieldType::Float;
                            case ValueType::String: return f.type == FieldType::String;
                          }
                          return false;
                        },
                        [&](const auto&) { return f.type == FieldType::String; },
                    },
                    w.config);
}

}  // namespace

BindingTable resolve_bindings(const WidgetCollection& coll, const SimRegistry& registry) {
  BindingTable table;
  auto finish = [&](Binding b) {
    if (!b.resolved) table.unresolved.push_back(b.widget);
    table.bindings.push_back(std::move(b));
  };

  for (const auto& w : coll.pwidgets) {
    Binding b{WidgetTable::Parameter, w.name, w.target, false, {}};
    const auto it = registry.find(w.target);
    if (it == registry.end() || it->second.role != FieldRole::Parameter) {
      b.reason = "no such parameter";
    } else if (!field_accepts(w, it->second)) {
      b.reason = "type mismatch";
    } else if (w.list_index >= 0 && (!it->second.list_size || *it->second.list_size <= static_cast<std::size_t>(w.list_index))) {
      b.reason = "list index";
    } else if (w.list_index < 0 && it->second.list_size) {
      b.reason = "field is a list";
    } else {
      b.resolved = true;
    }
    if (b.resolved) {
      if (const auto* ds = std::get_if<DictSliderConfig>(&w.config)) {
        const auto& keys = it->second.keys;
        for (const auto& item : ds->items)
          if (std::find(keys.begin(), keys.end(), item.key) == keys.end())
            table.unresolved.push_back(w.name + "/" + item.key);
      }
    }
    finish(std::move(b));
  }

  for (const auto& w : coll.dwidgets) {
    Binding b{WidgetTable::Data, w.name, w.target, false, {}};
    const auto it = registry.find(w.target);
    const FieldType want = w.kind() == WidgetKind::Image ? FieldType::Image : FieldType::Text;
    if (it == registry.end() || it->second.role != FieldRole::Data) {
      b.reason = "no such data field";
    } else if (it->second.type != want) {
      b.reason = "type mismatch";
    } else {
      b.resolved = true;
    }
    finish(std::move(b));
  }
  return table;
}

}  // namespace simdeck
