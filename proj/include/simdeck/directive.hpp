#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simdeck/model.hpp"

// In-source widget directives:
//
//   #@IVISIT:SLIDER & Decay Factor & [200,1] & [0,1,5,0.01] & decay & -1 & float & 0.9
//
// Lines are matched after leading whitespace and host-language comment
// markers, so the same block works inside '#', '//' or '--' comments.
namespace simdeck {

inline constexpr std::string_view kDirectivePrefix = "#@IVISIT:";

enum class DirectiveKeyword {
  Simulation,
  Slider,
  DictSlider,
  DictSliderItem,
  TextIn,
  ListSel,
  Checkbox,
  RadioButton,
  Button,
  Image,
  TextOut
};

std::string_view to_string(DirectiveKeyword k);

/// Number of '&'-separated fields following the keyword.
std::size_t directive_arity(DirectiveKeyword k);

struct Directive {
  DirectiveKeyword keyword = DirectiveKeyword::Simulation;
  std::vector<std::string> fields;  ///< trimmed, keyword excluded
  int line_no = 0;                  ///< 1-based

  bool operator==(const Directive&) const = default;
};

struct RangeList {
  double min = 0.0;
  double max = 1.0;
  int nticks = 2;
  double increment = 1.0;  ///< called "scale" for dictslider items; same meaning

  bool operator==(const RangeList&) const = default;
};

struct ContextSpec {
  std::string name;

  bool operator==(const ContextSpec&) const = default;
};

struct ParamWidgetSpec {
  ParameterWidgetDef widget;
  ParameterDef parameter;

  bool operator==(const ParamWidgetSpec&) const = default;
};

struct DataWidgetSpec {
  DataWidgetDef widget;
  DataArrayDef data;

  bool operator==(const DataWidgetSpec&) const = default;
};

/// Only produced by parse_directive for a lone DICTSLIDERITEM; parse_directives
/// folds these into the preceding dictslider.
struct DictSliderItemSpec {
  DictSliderItem item;
  Number init;

  bool operator==(const DictSliderItemSpec&) const = default;
};

using WidgetSpec = std::variant<ContextSpec, ParamWidgetSpec, DataWidgetSpec, DictSliderItemSpec>;

/// Directives in source order. Throws ParseError("orphan item") for a
/// DICTSLIDERITEM not preceded by a DICTSLIDER or another item, and
/// ParseError("unknown keyword") for unrecognized keywords.
std::vector<Directive> scan_source(std::string_view source);

/// Throws ParseError with codes: "wrong arity", "rangelist arity",
/// "unparseable number", "bad type", "bad list", "bad range",
/// "encoding length", "quotation marks", "unknown item", "bad option".
WidgetSpec parse_directive(const Directive& d);

/// Parses every directive and attaches DICTSLIDERITEMs to their dictslider.
std::vector<WidgetSpec> parse_directives(std::span<const Directive> directives);

inline std::vector<WidgetSpec> parse_source(std::string_view source) { return parse_directives(scan_source(source)); }

/// Canonical directive text; dictsliders produce one line per item after the
/// DICTSLIDER line. Reparsing yields an equal spec.
std::string serialize_directive(const WidgetSpec& spec);

struct MergeOptions {
  bool preserve_state = true;
};

struct MergeReport {
  int created = 0;
  int updated = 0;
  int unchanged = 0;
  std::string context;

  bool operator==(const MergeReport&) const = default;
};

/// Applies specs in order. All-or-nothing: on Error("kind conflict") the
/// collection is left untouched.
MergeReport merge_into_collection(std::span<const WidgetSpec> specs, WidgetCollection& coll, MergeOptions options = {});

/// Context named by the first SIMULATION directive, if any.
std::optional<std::string> context_of(std::span<const WidgetSpec> specs);

}  // namespace simdeck
