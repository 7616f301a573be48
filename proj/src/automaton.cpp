#include "simdeck/automaton.hpp"

namespace simdeck {

std::string_view to_string(PointerKind k) {
  switch (k) {
    case PointerKind::Press: return "press";
    case PointerKind::Move: return "move";
    case PointerKind::Release: return "release";
  }
  return "?";
}

std::optional<PointerKind> pointer_kind_from_string(std::string_view s) {
  if (s == "press") return PointerKind::Press;
  if (s == "move") return PointerKind::Move;
  if (s == "release") return PointerKind::Release;
  return std::nullopt;
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Click: return "click";
    case Phase::DragInit: return "drag_init";
    case Phase::DragMove: return "drag_move";
    case Phase::DragFinish: return "drag_finish";
  }
  return "?";
}

std::optional<ActionCommand> feed(AutomatonState& state, const AutomatonConfig& config, std::string_view active_action,
                                  const PointerEvent& evt) {
  if (evt.button != config.button_no) return std::nullopt;

  if (state.mode == AutomatonMode::Idle) {
    if (evt.kind != PointerKind::Press) return std::nullopt;
    const auto it = config.action_types.find(active_action);
    if (it == config.action_types.end()) return std::nullopt;
    if (it->second == ActionType::Click) return ActionCommand{std::string(active_action), Phase::Click, evt.pos, evt.pos, evt.pos};
    state = {AutomatonMode::Drag, evt.pos, evt.pos, std::string(active_action)};
    return ActionCommand{state.drag_action, Phase::DragInit, evt.pos, evt.pos, evt.pos};
  }

  switch (evt.kind) {
    case PointerKind::Press:
      return std::nullopt;
    case PointerKind::Move: {
      ActionCommand cmd{state.drag_action, Phase::DragMove, evt.pos, state.pos_init, state.pos_prev};
      state.pos_prev = evt.pos;
      return cmd;
    }
    case PointerKind::Release: {
      ActionCommand cmd{state.drag_action, Phase::DragFinish, evt.pos, state.pos_init, state.pos_prev};
      state = AutomatonState{};
      return cmd;
    }
  }
  return std::nullopt;
}

}  // namespace simdeck
