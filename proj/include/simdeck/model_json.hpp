#pragma once

#include <nlohmann/json.hpp>

#include "simdeck/model.hpp"

// JSON forms of the model records. The store keeps widget configs and keyed
// groups in this form; the wire protocol embeds it in layout messages.
namespace simdeck {

nlohmann::json config_to_json(const ParamWidgetConfig& c);
ParamWidgetConfig param_config_from_json(WidgetKind kind, const nlohmann::json& j);

nlohmann::json config_to_json(const DataWidgetConfig& c);
DataWidgetConfig data_config_from_json(WidgetKind kind, const nlohmann::json& j);

nlohmann::json value_to_json(const ParamValue& v);
/// Throws Error("bad value") when j does not hold a value of `kind`.
ParamValue value_from_json(ParamKind kind, const nlohmann::json& j);

/// Canonical text used in the store's value column: decimal ints, shortest
/// round-trip doubles, raw strings, JSON for keyed groups.
std::string value_to_text(const ParamValue& v);
ParamValue value_from_text(ParamKind kind, std::string_view text);

nlohmann::json collection_to_json(const WidgetCollection& c);
WidgetCollection collection_from_json(const nlohmann::json& j);

}  // namespace simdeck
