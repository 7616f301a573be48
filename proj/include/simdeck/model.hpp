#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace simdeck {

inline constexpr std::string_view kDefaultContext = "N.N.";

// ---------------------------------------------------------------------------
// Parameter values

using Number = std::variant<std::int64_t, double>;

double as_double(const Number& n);

struct KeyedEntry {
  std::string key;
  Number value;

  bool operator==(const KeyedEntry&) const = default;
};

/// Ordered label -> number map backing a DICTSLIDER. Order is declaration order.
struct KeyedGroup {
  std::vector<KeyedEntry> entries;

  const Number* find(std::string_view key) const;
  Number* find(std::string_view key);
  /// Throws Error("unknown item") when the key is absent.
  double get(std::string_view key) const;
  /// Replaces an existing entry or appends a new one.
  void set(std::string_view key, Number value);

  bool operator==(const KeyedGroup&) const = default;
};

enum class ParamKind { Int, Float, String, KeyedGroup };

using ParamValue = std::variant<std::int64_t, double, std::string, KeyedGroup>;

ParamKind kind_of(const ParamValue& v);
std::string_view to_string(ParamKind k);
std::optional<ParamKind> param_kind_from_string(std::string_view s);

/// Declared base type of a directive variable ("int", "float", "string").
enum class ValueType { Int, Float, String };

std::string_view to_string(ValueType t);
std::optional<ValueType> value_type_from_string(std::string_view s);
ParamKind param_kind_for(ValueType t);

// ---------------------------------------------------------------------------
// Definitions (one struct per stored table)

struct SimulationContext {
  std::string name{kDefaultContext};
  std::string app_name;

  bool operator==(const SimulationContext&) const = default;
};

struct ParameterDef {
  std::string name;
  ParamKind kind = ParamKind::Float;
  ParamValue value = 0.0;
  int list_index = -1;  ///< -1 scalar, >= 0 element of a list-valued field

  bool operator==(const ParameterDef&) const = default;
};

enum class DataKind { Image, Text };

std::string_view to_string(DataKind k);
std::optional<DataKind> data_kind_from_string(std::string_view s);

struct DataArrayDef {
  std::string name;
  DataKind kind = DataKind::Text;

  bool operator==(const DataArrayDef&) const = default;
};

struct Geometry {
  int x = 0;
  int y = 0;

  bool operator==(const Geometry&) const = default;
};

enum class WidgetKind { Slider, DictSlider, TextIn, ListSel, Checkbox, RadioButton, Button, Image, TextOut };

/// Directive keyword spelling: "SLIDER", "DICTSLIDER", ..., "TEXT_OUT".
std::string_view to_string(WidgetKind k);
std::optional<WidgetKind> widget_kind_from_string(std::string_view s);

struct SliderConfig {
  int width = 200;
  int height = 1;  // unused by any UI, kept so records round-trip
  double min = 0.0;
  double max = 1.0;
  int nticks = 2;
  double increment = 1.0;
  ValueType type = ValueType::Float;

  bool operator==(const SliderConfig&) const = default;
};

struct DictSliderItem {
  std::string label;
  double min = 0.0;
  double max = 1.0;
  int nticks = 2;
  double increment = 1.0;
  std::string key;
  ValueType type = ValueType::Float;

  bool operator==(const DictSliderItem&) const = default;
};

struct DictSliderConfig {
  int width = 200;
  int columns = 20;
  int rows = -1;
  int display_mode = 0;  ///< 0, 1 or 2; presentation only
  int font_size = 10;
  int selected = 0;      ///< index of the item the slider initially controls
  std::vector<DictSliderItem> items;

  bool operator==(const DictSliderConfig&) const = default;
};

struct TextInConfig {
  int columns = 20;
  int rows = 1;

  bool operator==(const TextInConfig&) const = default;
};

struct ListSelConfig {
  int columns = 20;
  int rows = 5;
  std::vector<std::string> items;
  ValueType type = ValueType::String;

  bool operator==(const ListSelConfig&) const = default;
};

struct CheckboxConfig {
  std::vector<std::string> items;

  bool operator==(const CheckboxConfig&) const = default;
};

struct RadioButtonConfig {
  std::vector<std::string> items;

  bool operator==(const RadioButtonConfig&) const = default;
};

struct ButtonConfig {
  std::string label_text;
  std::string button_text;

  bool operator==(const ButtonConfig&) const = default;
};

using ParamWidgetConfig = std::variant<SliderConfig, DictSliderConfig, TextInConfig, ListSelConfig,
                                       CheckboxConfig, RadioButtonConfig, ButtonConfig>;

enum class Justification { Left, Right, Center };

std::string_view to_string(Justification j);
std::optional<Justification> justification_from_string(std::string_view s);

struct ImageConfig {
  double scale = 1.0;
  double lo = 0.0;
  double hi = 255.0;
  ValueType type = ValueType::Int;

  bool operator==(const ImageConfig&) const = default;
};

struct TextOutConfig {
  int columns = 20;
  int rows = 5;
  Justification justification = Justification::Center;

  bool operator==(const TextOutConfig&) const = default;
};

using DataWidgetConfig = std::variant<ImageConfig, TextOutConfig>;

struct ParameterWidgetDef {
  std::string name;
  Geometry geometry;
  ParamWidgetConfig config;
  std::string target;
  int list_index = -1;

  WidgetKind kind() const;
  bool operator==(const ParameterWidgetDef&) const = default;
};

struct DataWidgetDef {
  std::string name;
  Geometry geometry;
  DataWidgetConfig config;
  std::string target;

  WidgetKind kind() const;
  bool operator==(const DataWidgetDef&) const = default;
};

struct CommentWidgetDef {
  std::string name;
  Geometry geometry;
  std::string body;

  bool operator==(const CommentWidgetDef&) const = default;
};

enum class WidgetTable { Parameter, Data, Comment };

std::string_view to_string(WidgetTable t);

/// Everything stored for one simulation context.
struct WidgetCollection {
  SimulationContext context;
  std::vector<ParameterDef> parameters;
  std::vector<DataArrayDef> data;
  std::vector<ParameterWidgetDef> pwidgets;
  std::vector<DataWidgetDef> dwidgets;
  std::vector<CommentWidgetDef> comments;

  ParameterDef* find_parameter(std::string_view name, int list_index);
  const ParameterDef* find_parameter(std::string_view name, int list_index) const;
  const DataArrayDef* find_data(std::string_view name) const;
  ParameterWidgetDef* find_pwidget(std::string_view name);
  const ParameterWidgetDef* find_pwidget(std::string_view name) const;
  DataWidgetDef* find_dwidget(std::string_view name);
  const DataWidgetDef* find_dwidget(std::string_view name) const;
  CommentWidgetDef* find_comment(std::string_view name);

  bool operator==(const WidgetCollection&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string record;  ///< e.g. "tb_parameterwidget:Decay Factor"
  std::string rule;    ///< e.g. "dangling target"

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_collection(const WidgetCollection& coll);

/// Rules a parameter value must satisfy for the widget that edits it
/// (range, encoding length, item presence). Empty when compatible.
std::vector<std::string> widget_value_violations(const ParameterWidgetDef& w, const ParameterDef& p);

// ---------------------------------------------------------------------------
// Upserts

enum class UpsertPolicy { PreserveState, Overwrite };
enum class UpsertOutcome { Created, Updated, Unchanged };

/// Matches by name within the widget's table. A same-named widget of a
/// different kind throws Error("kind conflict"). New widgets land at (0,0).
UpsertOutcome upsert_widget(WidgetCollection& coll, ParameterWidgetDef w, UpsertPolicy policy);
UpsertOutcome upsert_widget(WidgetCollection& coll, DataWidgetDef w, UpsertPolicy policy);
UpsertOutcome upsert_widget(WidgetCollection& coll, CommentWidgetDef w, UpsertPolicy policy);

/// Under PreserveState an existing value of the same kind is kept; keyed
/// groups keep values for surviving keys and adopt the new key order.
UpsertOutcome upsert_parameter(WidgetCollection& coll, ParameterDef p, UpsertPolicy policy);
UpsertOutcome upsert_data_array(WidgetCollection& coll, DataArrayDef d);

// ---------------------------------------------------------------------------
// Bindings against a hosted simulation

enum class FieldRole { Parameter, Data };
enum class FieldType { Int, Float, String, KeyedGroup, Image, Text };

struct FieldDescriptor {
  FieldRole role = FieldRole::Parameter;
  FieldType type = FieldType::Float;
  std::optional<std::size_t> list_size;  ///< set for list-valued fields
  std::vector<std::string> keys;         ///< keyed groups only
};

using SimRegistry = std::map<std::string, FieldDescriptor, std::less<>>;

struct Binding {
  WidgetTable table = WidgetTable::Parameter;
  std::string widget;
  std::string target;
  bool resolved = false;
  std::string reason;  ///< empty when resolved
};

struct BindingTable {
  std::vector<Binding> bindings;
  std::vector<std::string> unresolved;  ///< widget names, or "widget/key" for dictslider items

  bool is_bound(WidgetTable table, std::string_view widget) const;
};

BindingTable resolve_bindings(const WidgetCollection& coll, const SimRegistry& registry);

}  // namespace simdeck
