#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

// Click/drag state machine turning raw pointer events into action commands.
namespace simdeck {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

enum class PointerKind { Press, Move, Release };

std::string_view to_string(PointerKind k);
std::optional<PointerKind> pointer_kind_from_string(std::string_view s);

struct PointerEvent {
  PointerKind kind = PointerKind::Press;
  int button = 1;
  Point pos;

  bool operator==(const PointerEvent&) const = default;
};

enum class ActionType { Click, Drag };
enum class CoordinateMode { Pixel, Data };

struct AutomatonConfig {
  std::string action_param;  ///< text parameter naming the active action
  std::map<std::string, ActionType, std::less<>> action_types;
  int button_no = 1;
  CoordinateMode coordinate_mode = CoordinateMode::Data;
};

enum class AutomatonMode { Idle, Drag };

struct AutomatonState {
  AutomatonMode mode = AutomatonMode::Idle;
  Point pos_init;
  Point pos_prev;
  std::string drag_action;  ///< action locked in at drag_init
};

enum class Phase { Click, DragInit, DragMove, DragFinish };

std::string_view to_string(Phase p);

struct ActionCommand {
  std::string action;
  Phase phase = Phase::Click;
  Point pos;
  Point pos_init;
  Point pos_prev;

  bool operator==(const ActionCommand&) const = default;
};

/// One transition. Emits only on (IDLE,press,click), (IDLE,press,drag),
/// (DRAG,move) and (DRAG,release); everything else, other buttons and
/// unknown action names included, leaves the state unchanged.
std::optional<ActionCommand> feed(AutomatonState& state, const AutomatonConfig& config, std::string_view active_action,
                                  const PointerEvent& evt);

}  // namespace simdeck
