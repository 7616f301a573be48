#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "simdeck/image.hpp"
#include "simdeck/model.hpp"

// Engine-side value semantics of the parameter widgets.
namespace simdeck {

/// Nearest point of the lattice min + k*increment inside [min,max]; exact
/// ties go to the larger value.
double slider_quantize(double raw, double min, double max, double increment);

std::string checkbox_encode(const std::vector<std::string>& selected, const std::vector<std::string>& items);
/// Throws Error("encoding length") unless bits is one '0'/'1' per item.
std::vector<std::string> checkbox_decode(std::string_view bits, const std::vector<std::string>& items);

/// What the UI sends for a widget: a number (sliders) or text, plus the
/// dictslider item key when relevant.
struct UiValue {
  std::variant<double, std::string> value;
  std::string item;
};

/// A typed assignment into a simulation parameter. key is set for keyed
/// group members; list_index >= 0 addresses one element of a list field.
struct ParamWrite {
  std::string target;
  int list_index = -1;
  std::optional<std::string> key;
  ParamValue value;

  bool operator==(const ParamWrite&) const = default;
};

struct WidgetState {
  ParameterWidgetDef def;
  ParamValue current;
  std::string selected_item_key;  ///< dictslider only
  bool clicked = false;           ///< button only

  WidgetState(ParameterWidgetDef d, ParamValue v);
};

/// Converts a UI interaction into a write and updates state.current.
/// Buttons only latch the click and return nullopt.
/// Errors: "type conversion", "unknown item", "encoding length"; on error
/// nothing changes.
std::optional<ParamWrite> apply_param_widget(WidgetState& state, const UiValue& ui);

/// "1" when clicked since the previous call, else "0"; clears the latch.
std::string button_read_and_reset(WidgetState& state);

/// round(255 * clamp((v - lo) / (hi - lo), 0, 1)) per sample, half-up.
/// NaN maps to 0. Throws Error("bad range") unless hi > lo.
Image8 image_normalize(const ImageBuffer& buf, double lo, double hi);

}  // namespace simdeck
