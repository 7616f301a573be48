#include "simdeck/directive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "simdeck/error.hpp"
#include "simdeck/model_json.hpp"
#include "simdeck/text.hpp"

namespace simdeck {

namespace {

struct KeywordInfo {
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<KeywordInfo, 11> kKeywords = {{
    {"SIMULATION", 1},
    {"SLIDER", 7},
    {"DICTSLIDER", 4},
    {"DICTSLIDERITEM", 5},
    {"TEXT_IN", 5},
    {"LISTSEL", 7},
    {"CHECKBOX", 4},
    {"RADIOBUTTON", 4},
    {"BUTTON", 3},
    {"IMAGE", 5},
    {"TEXT_OUT", 4},
}};

std::optional<DirectiveKeyword> keyword_from(std::string_view s) {
  for (std::size_t i = 0; i < kKeywords.size(); ++i)
    if (kKeywords[i].name == s) return static_cast<DirectiveKeyword>(i);
  return std::nullopt;
}

/// Strips leading whitespace and comment markers until the directive prefix
/// (or anything else) is reached.
std::optional<std::string_view> directive_body(std::string_view line) {
  constexpr std::array<std::string_view, 6> markers = {"//", "/*", "--", "*", ";", "%"};
  line = text::trim(line);
  for (;;) {
    if (line.starts_with(kDirectivePrefix)) return line.substr(kDirectivePrefix.size());
    bool stripped = false;
    for (auto m : markers) {
      if (line.starts_with(m)) {
        line = text::trim(line.substr(m.size()));
        stripped = true;
        break;
      }
    }
    // A lone '#' comment marker ("# #@IVISIT:..."); the prefix itself starts with '#'.
    if (!stripped && line.starts_with('#') && !line.starts_with(kDirectivePrefix)) {
      line = text::trim(line.substr(1));
      stripped = true;
    }
    if (!stripped || line.empty()) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Field parsers. Each throws ParseError tagged with the directive's line.

class FieldReader {
 public:
  explicit FieldReader(const Directive& d) : d_(d) {
    if (d.fields.size() != directive_arity(d.keyword))
      fail("wrong arity", std::string(to_string(d.keyword)) + " expects " + std::to_string(directive_arity(d.keyword)) +
                              " fields, got " + std::to_string(d.fields.size()));
  }

  [[noreturn]] void fail(const std::string& code, const std::string& detail = {}) const {
    throw ParseError(code, d_.line_no, detail);
  }

  const std::string& raw(std::size_t i) const { return d_.fields[i]; }

  std::string name(std::size_t i) const {
    if (raw(i).empty()) fail("bad option", "empty name");
    return raw(i);
  }

  double real(std::string_view s) const {
    const auto v = text::parse_double(s);
    if (!v || !std::isfinite(*v)) fail("unparseable number", std::string(s));
    return *v;
  }

  std::int64_t integer(std::string_view s) const {
    const auto v = text::parse_int(s);
    if (!v) fail("unparseable number", std::string(s));
    return *v;
  }

  std::vector<std::string_view> list(std::size_t i, bool allow_quotes = true) const {
    std::string_view s = raw(i);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail("bad list", std::string(s));
    s = s.substr(1, s.size() - 2);
    if (text::trim(s).empty()) return {};
    auto items = text::split(s, ',');
    if (!allow_quotes)
      for (auto item : items)
        if (item.find_first_of("\"'") != std::string_view::npos) fail("quotation marks", std::string(item));
    return items;
  }

  std::vector<std::string> items(std::size_t i) const {
    std::vector<std::string> out;
    for (auto s : list(i, false)) {
      if (s.empty()) fail("bad list", "empty item");
      out.emplace_back(s);
    }
    if (out.empty()) fail("bad list", "no items");
    return out;
  }

  std::vector<std::int64_t> ints(std::size_t i, std::size_t n, const char* code = "bad list") const {
    const auto parts = list(i);
    if (parts.size() != n) fail(code, raw(i));
    std::vector<std::int64_t> out;
    for (auto p : parts) out.push_back(integer(p));
    return out;
  }

  RangeList range(std::size_t i) const {
    const auto parts = list(i);
    if (parts.size() != 4) fail("rangelist arity", raw(i));
    RangeList r{real(parts[0]), real(parts[1]), static_cast<int>(integer(parts[2])), real(parts[3])};
    if (!(r.max > r.min) || !(r.increment > 0.0) || r.nticks < 2) fail("bad range", raw(i));
    return r;
  }

  ValueType type(std::size_t i, bool numeric_only) const {
    const auto t = value_type_from_string(raw(i));
    if (!t || (numeric_only && *t == ValueType::String)) fail("bad type", raw(i));
    return *t;
  }

  int index(std::size_t i) const {
    const auto v = integer(raw(i));
    if (v < -1) fail("bad option", "list index " + raw(i));
    return static_cast<int>(v);
  }

  /// Typed initial value; ints must be integral.
  ParamValue typed(std::string_view s, ValueType t) const {
    switch (t) {
      case ValueType::Int: {
        if (auto i = text::parse_int(s)) return *i;
        const double v = real(s);
        if (v != std::floor(v)) fail("unparseable number", std::string(s));
        return static_cast<std::int64_t>(v);
      }
      case ValueType::Float:
        return real(s);
      case ValueType::String:
        return std::string(s);
    }
    fail("bad type");
  }

 private:
  const Directive& d_;
};

std::string join_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out + "]";
}

std::string num(double v) { return text::format_double(v); }
std::string num(std::int64_t v) { return text::format_int(v); }
std::string num(int v) { return text::format_int(v); }

std::string range_text(double min, double max, int nticks, double inc) {
  return "[" + num(min) + "," + num(max) + "," + num(nticks) + "," + num(inc) + "]";
}

std::string line(DirectiveKeyword k, std::initializer_list<std::string> fields) {
  std::string out = std::string(kDirectivePrefix) + std::string(to_string(k));
  for (const auto& f : fields) out += " & " + f;
  return out;
}

}  // namespace

std::string_view to_string(DirectiveKeyword k) { return kKeywords[static_cast<std::size_t>(k)].name; }

std::size_t directive_arity(DirectiveKeyword k) { return kKeywords[static_cast<std::size_t>(k)].arity; }

std::vector<Directive> scan_source(std::string_view source) {
  std::vector<Directive> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const auto nl = source.find('\n', pos);
    const auto line = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? source.size() + 1 : nl + 1;

    const auto body = directive_body(line);
    if (!body) continue;
    auto parts = text::split(*body, '&');
    const auto kw = keyword_from(parts.front());
    if (!kw) throw ParseError("unknown keyword", line_no, std::string(parts.front()));
    if (*kw == DirectiveKeyword::DictSliderItem &&
        (out.empty() || (out.back().keyword != DirectiveKeyword::DictSlider &&
                         out.back().keyword != DirectiveKeyword::DictSliderItem)))
      throw ParseError("orphan item", line_no, "DICTSLIDERITEM without preceding DICTSLIDER");

    Directive d{*kw, {}, line_no};
    for (std::size_t i = 1; i < parts.size(); ++i) d.fields.emplace_back(parts[i]);
    out.push_back(std::move(d));
  }
  return out;
}

WidgetSpec parse_directive(const Directive& d) {
  const FieldReader f(d);
  switch (d.keyword) {
    case DirectiveKeyword::Simulation:
      return ContextSpec{f.name(0)};

    case DirectiveKeyword::Slider: {
      const auto size = f.ints(1, 2);
      const auto r = f.range(2);
      const auto type = f.type(5, true);
      const auto init = f.typed(f.raw(6), type);
      const double v = std::holds_alternative<double>(init) ? std::get<double>(init)
                                                             : static_cast<double>(std::get<std::int64_t>(init));
      if (v < r.min || v > r.max) f.fail("bad range", "initial value outside [min,max]");
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, SliderConfig{static_cast<int>(size[0]), static_cast<int>(size[1]), r.min, r.max,
                                              r.nticks, r.increment, type},
                  f.name(3), f.index(4)};
      s.parameter = {s.widget.target, param_kind_for(type), init, s.widget.list_index};
      return s;
    }

    case DirectiveKeyword::DictSlider: {
      const auto size = f.ints(1, 5);
      if (size[3] < 0 || size[3] > 2) f.fail("bad option", "display mode " + std::to_string(size[3]));
      const auto selected = std::max<std::int64_t>(0, f.integer(f.raw(3)));
      ParamWidgetSpec s;
      s.widget = {f.name(0), {},
                  DictSliderConfig{static_cast<int>(size[0]), static_cast<int>(size[1]), static_cast<int>(size[2]),
                                   static_cast<int>(size[3]), static_cast<int>(size[4]), static_cast<int>(selected), {}},
                  f.name(2), -1};
      s.parameter = {s.widget.target, ParamKind::KeyedGroup, KeyedGroup{}, -1};
      return s;
    }

    case DirectiveKeyword::DictSliderItem: {
      const auto r = f.range(1);
      const auto type = f.type(3, true);
      const auto init = f.typed(f.raw(4), type);
      Number n = std::holds_alternative<double>(init) ? Number{std::get<double>(init)}
                                                      : Number{std::get<std::int64_t>(init)};
      if (as_double(n) < r.min || as_double(n) > r.max) f.fail("bad range", "initial value outside [min,max]");
      return DictSliderItemSpec{{f.name(0), r.min, r.max, r.nticks, r.increment, f.name(2), type}, n};
    }

    case DirectiveKeyword::TextIn: {
      const auto size = f.ints(1, 2);
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, TextInConfig{static_cast<int>(size[0]), static_cast<int>(size[1])}, f.name(2), f.index(3)};
      s.parameter = {s.widget.target, ParamKind::String, f.raw(4), s.widget.list_index};
      return s;
    }

    case DirectiveKeyword::ListSel: {
      const auto size = f.ints(1, 2);
      auto items = f.items(2);
      const auto type = f.type(5, false);
      for (const auto& item : items) f.typed(item, type);
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, ListSelConfig{static_cast<int>(size[0]), static_cast<int>(size[1]), items, type},
                  f.name(3), f.index(4)};
      s.parameter = {s.widget.target, param_kind_for(type), f.typed(f.raw(6), type), s.widget.list_index};
      return s;
    }

    case DirectiveKeyword::Checkbox: {
      auto items = f.items(1);
      const std::string& bits = f.raw(3);
      if (bits.size() != items.size() || bits.find_first_not_of("01") != std::string::npos)
        f.fail("encoding length", "'" + bits + "' for " + std::to_string(items.size()) + " items");
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, CheckboxConfig{std::move(items)}, f.name(2), -1};
      s.parameter = {s.widget.target, ParamKind::String, bits, -1};
      return s;
    }

    case DirectiveKeyword::RadioButton: {
      auto items = f.items(1);
      const std::string& init = f.raw(3);
      if (std::find(items.begin(), items.end(), init) == items.end()) f.fail("unknown item", init);
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, RadioButtonConfig{std::move(items)}, f.name(2), -1};
      s.parameter = {s.widget.target, ParamKind::String, init, -1};
      return s;
    }

    case DirectiveKeyword::Button: {
      const auto parts = f.list(1, false);
      if (parts.size() != 2) f.fail("bad list", f.raw(1));
      ParamWidgetSpec s;
      s.widget = {f.name(0), {}, ButtonConfig{std::string(parts[0]), std::string(parts[1])}, f.name(2), -1};
      s.parameter = {s.widget.target, ParamKind::String, std::string("0"), -1};
      return s;
    }

    case DirectiveKeyword::Image: {
      const double scale = f.real(f.raw(1));
      const auto lohi = f.list(2);
      if (lohi.size() != 2) f.fail("bad list", f.raw(2));
      const double lo = f.real(lohi[0]);
      const double hi = f.real(lohi[1]);
      if (!(scale > 0.0) || !(hi > lo)) f.fail("bad range", f.raw(1) + " " + f.raw(2));
      DataWidgetSpec s;
      s.widget = {f.name(0), {}, ImageConfig{scale, lo, hi, f.type(4, true)}, f.name(3)};
      s.data = {s.widget.target, DataKind::Image};
      return s;
    }

    case DirectiveKeyword::TextOut: {
      const auto size = f.ints(1, 2);
      Justification just = Justification::Center;
      const std::string& opts = f.raw(2);
      if (opts != "None") {
        std::vector<std::string_view> names;
        if (opts.starts_with('['))
          names = f.list(2);
        else
          names.push_back(opts);
        for (auto n : names) {
          const auto j = justification_from_string(n);
          if (!j) f.fail("bad option", std::string(n));
          just = *j;
        }
      }
      DataWidgetSpec s;
      s.widget = {f.name(0), {}, TextOutConfig{static_cast<int>(size[0]), static_cast<int>(size[1]), just}, f.name(3)};
      s.data = {s.widget.target, DataKind::Text};
      return s;
    }
  }
  throw ParseError("unknown keyword", d.line_no);
}

std::vector<WidgetSpec> parse_directives(std::span<const Directive> directives) {
  std::vector<WidgetSpec> out;
  int open_dictslider_line = 0;
  auto close_dictslider = [&] {
    if (!open_dictslider_line) return;
    const auto& s = std::get<ParamWidgetSpec>(out.back());
    if (std::get<DictSliderConfig>(s.widget.config).items.empty())
      throw ParseError("dictslider without items", open_dictslider_line);
    open_dictslider_line = 0;
  };

  for (const auto& d : directives) {
    auto spec = parse_directive(d);
    if (auto* item = std::get_if<DictSliderItemSpec>(&spec)) {
      if (!open_dictslider_line) throw ParseError("orphan item", d.line_no);
      auto& s = std::get<ParamWidgetSpec>(out.back());
      auto& cfg = std::get<DictSliderConfig>(s.widget.config);
      auto& group = std::get<KeyedGroup>(s.parameter.value);
      if (group.find(item->item.key)) throw ParseError("duplicate key", d.line_no, item->item.key);
      cfg.items.push_back(item->item);
      group.entries.push_back({item->item.key, item->init});
      continue;
    }
    close_dictslider();
    if (d.keyword == DirectiveKeyword::DictSlider) open_dictslider_line = d.line_no;
    out.push_back(std::move(spec));
  }
  close_dictslider();
  for (auto& spec : out) {
    if (auto* s = std::get_if<ParamWidgetSpec>(&spec)) {
      if (auto* cfg = std::get_if<DictSliderConfig>(&s->widget.config))
        cfg->selected = std::min<int>(cfg->selected, static_cast<int>(cfg->items.size()) - 1);
    }
  }
  return out;
}

std::string serialize_directive(const WidgetSpec& spec) {
  if (const auto* c = std::get_if<ContextSpec>(&spec)) return line(DirectiveKeyword::Simulation, {c->name});

  if (const auto* it = std::get_if<DictSliderItemSpec>(&spec)) {
    const auto& i = it->item;
    const std::string init = std::holds_alternative<std::int64_t>(it->init) ? num(std::get<std::int64_t>(it->init))
                                                                             : num(std::get<double>(it->init));
    return line(DirectiveKeyword::DictSliderItem,
                {i.label, range_text(i.min, i.max, i.nticks, i.increment), i.key, std::string(to_string(i.type)), init});
  }

  if (const auto* d = std::get_if<DataWidgetSpec>(&spec)) {
    const auto& w = d->widget;
    if (const auto* img = std::get_if<ImageConfig>(&w.config))
      return line(DirectiveKeyword::Image, {w.name, num(img->scale), "[" + num(img->lo) + "," + num(img->hi) + "]",
                                            w.target, std::string(to_string(img->type))});
    const auto& t = std::get<TextOutConfig>(w.config);
    return line(DirectiveKeyword::TextOut, {w.name, "[" + num(t.columns) + "," + num(t.rows) + "]",
                                            std::string(to_string(t.justification)), w.target});
  }

  const auto& s = std::get<ParamWidgetSpec>(spec);
  const auto& w = s.widget;
  const std::string value = value_to_text(s.parameter.value);
  switch (w.kind()) {
    case WidgetKind::Slider: {
      const auto& c = std::get<SliderConfig>(w.config);
      return line(DirectiveKeyword::Slider,
                  {w.name, "[" + num(c.width) + "," + num(c.height) + "]", range_text(c.min, c.max, c.nticks, c.increment),
                   w.target, num(w.list_index), std::string(to_string(c.type)), value});
    }
    case WidgetKind::DictSlider: {
      const auto& c = std::get<DictSliderConfig>(w.config);
      const auto& group = std::get<KeyedGroup>(s.parameter.value);
      std::string out = line(DirectiveKeyword::DictSlider,
                             {w.name,
                              "[" + num(c.width) + "," + num(c.columns) + "," + num(c.rows) + "," + num(c.display_mode) +
                                  "," + num(c.font_size) + "]",
                              w.target, num(c.selected)});
      for (const auto& item : c.items) {
        const Number* n = group.find(item.key);
        out += "\n" + serialize_directive(DictSliderItemSpec{item, n ? *n : Number{item.min}});
      }
      return out;
    }
    case WidgetKind::TextIn: {
      const auto& c = std::get<TextInConfig>(w.config);
      return line(DirectiveKeyword::TextIn,
                  {w.name, "[" + num(c.columns) + "," + num(c.rows) + "]", w.target, num(w.list_index), value});
    }
    case WidgetKind::ListSel: {
      const auto& c = std::get<ListSelConfig>(w.config);
      return line(DirectiveKeyword::ListSel, {w.name, "[" + num(c.columns) + "," + num(c.rows) + "]", join_list(c.items),
                                              w.target, num(w.list_index), std::string(to_string(c.type)), value});
    }
    case WidgetKind::Checkbox:
      return line(DirectiveKeyword::Checkbox, {w.name, join_list(std::get<CheckboxConfig>(w.config).items), w.target, value});
    case WidgetKind::RadioButton:
      return line(DirectiveKeyword::RadioButton,
                  {w.name, join_list(std::get<RadioButtonConfig>(w.config).items), w.target, value});
    case WidgetKind::Button: {
      const auto& c = std::get<ButtonConfig>(w.config);
      return line(DirectiveKeyword::Button, {w.name, "[" + c.label_text + "," + c.button_text + "]", w.target});
    }
    default:
      break;
  }
  throw Error("bad spec", "unserializable widget");
}

std::optional<std::string> context_of(std::span<const WidgetSpec> specs) {
  for (const auto& s : specs)
    if (const auto* c = std::get_if<ContextSpec>(&s)) return c->name;
  return std::nullopt;
}

MergeReport merge_into_collection(std::span<const WidgetSpec> specs, WidgetCollection& coll, MergeOptions options) {
  const auto policy = options.preserve_state ? UpsertPolicy::PreserveState : UpsertPolicy::Overwrite;
  WidgetCollection next = coll;
  MergeReport report;
  auto count = [&](UpsertOutcome o) {
    switch (o) {
      case UpsertOutcome::Created: ++report.created; break;
      case UpsertOutcome::Updated: ++report.updated; break;
      case UpsertOutcome::Unchanged: ++report.unchanged; break;
    }
  };

  for (const auto& spec : specs) {
    if (const auto* c = std::get_if<ContextSpec>(&spec)) {
      next.context.name = c->name;
    } else if (const auto* p = std::get_if<ParamWidgetSpec>(&spec)) {
      if (const auto* existing = next.find_pwidget(p->widget.name); existing && existing->kind() != p->widget.kind())
        throw Error("kind conflict", p->widget.name);
      upsert_parameter(next, p->parameter, policy);
      count(upsert_widget(next, p->widget, policy));
      ParameterDef* param = next.find_parameter(p->parameter.name, p->parameter.list_index);
      if (!widget_value_violations(p->widget, *param).empty()) param->value = p->parameter.value;
    } else if (const auto* d = std::get_if<DataWidgetSpec>(&spec)) {
      if (const auto* existing = next.find_dwidget(d->widget.name); existing && existing->kind() != d->widget.kind())
        throw Error("kind conflict", d->widget.name);
      upsert_data_array(next, d->data);
      count(upsert_widget(next, d->widget, policy));
    }
  }
  report.context = next.context.name;
  coll = std::move(next);
  return report;
}

}  // namespace simdeck
