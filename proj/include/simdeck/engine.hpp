#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "simdeck/automaton.hpp"
#include "simdeck/image.hpp"
#include "simdeck/model.hpp"
#include "simdeck/render.hpp"
#include "simdeck/store.hpp"
#include "simdeck/widget.hpp"

namespace simdeck {

// ---------------------------------------------------------------------------
// Field registry: the hosted simulation exposes its members by name.

class FieldRegistry {
 public:
  void param(const std::string& name, std::int64_t& field);
  void param(const std::string& name, double& field);
  void param(const std::string& name, std::string& field);
  void param(const std::string& name, std::vector<std::int64_t>& field);
  void param(const std::string& name, std::vector<double>& field);
  void param(const std::string& name, std::vector<std::string>& field);
  void param(const std::string& name, KeyedGroup& field);
  void data(const std::string& name, std::string& text);
  void data(const std::string& name, ImageBuffer& image);
  void data(const std::string& name, Image8& image);

  SimRegistry describe() const;
  bool has_param(std::string_view name) const { return params_.count(name) != 0; }
  bool has_data(std::string_view name) const { return data_.count(name) != 0; }

  /// Errors: "no such parameter", "list index", "type conversion".
  void apply(const ParamWrite& write);
  void apply(const ParameterDef& def) { apply(ParamWrite{def.name, def.list_index, std::nullopt, def.value}); }
  ParamValue read(std::string_view name, int list_index = -1) const;

  std::optional<std::string> text(std::string_view name) const;
  /// Display-ready pixels for an image field, normalized with [lo,hi].
  std::optional<Image8> image(std::string_view name, double lo, double hi) const;

 private:
  using ParamPtr = std::variant<std::int64_t*, double*, std::string*, std::vector<std::int64_t>*, std::vector<double>*,
                                std::vector<std::string>*, KeyedGroup*>;
  using DataPtr = std::variant<std::string*, ImageBuffer*, Image8*>;
  void add_param(const std::string& name, ParamPtr p);
  void add_data(const std::string& name, DataPtr p);

  std::map<std::string, ParamPtr, std::less<>> params_;
  std::map<std::string, DataPtr, std::less<>> data_;
};

// ---------------------------------------------------------------------------
// Pointer bindings made by the simulation during bind().

struct RawHandlers {
  std::function<void(Point)> on_press;
  std::function<void(Point)> on_move;
  std::function<void(Point)> on_release;
  int button_no = 1;
  CoordinateMode coordinate_mode = CoordinateMode::Pixel;
  const AxisLayout* axis = nullptr;  ///< required in data mode
};

using ActionHandler = std::function<void(const ActionCommand&)>;

class Binder {
 public:
  /// Feeds pointer events of an IMAGE widget through a click/drag automaton.
  /// In data mode, positions go through *axis (owned by the simulation,
  /// read at event time). Errors: "unknown widget", "bad axis", "bad binding".
  void bind_automaton(const std::string& image_widget, AutomatonConfig config, const AxisLayout* axis,
                      ActionHandler handler);
  void bind_raw(const std::string& image_widget, RawHandlers handlers);

 private:
  friend class Engine;
  struct AutomatonBinding {
    AutomatonConfig config;
    const AxisLayout* axis;
    ActionHandler handler;
    AutomatonState state;
  };
  using Entry = std::variant<AutomatonBinding, RawHandlers>;

  Binder(const WidgetCollection& coll, const FieldRegistry& fields) : coll_(coll), fields_(fields) {}
  void check_widget(const std::string& name, CoordinateMode mode, const AxisLayout* axis) const;

  const WidgetCollection& coll_;
  const FieldRegistry& fields_;
  std::map<std::string, Entry, std::less<>> entries_;
};

// ---------------------------------------------------------------------------
// Hosted simulation contract

class Simulation {
 public:
  virtual ~Simulation() = default;
  virtual std::string name() const = 0;
  /// Directive block describing the widgets ("Parse" re-reads this).
  virtual std::string directives() const = 0;
  virtual void declare(FieldRegistry& fields) = 0;
  virtual void init() = 0;
  virtual void step() = 0;
  /// Runs after init, once the layout is known.
  virtual void bind(Binder&) {}
  /// Publish a frame only every k-th step while running.
  virtual int frame_interval() const { return 1; }
  /// Minimum spacing between step starts requested by the simulation.
  virtual int delay_ms() const { return 0; }
};

// ---------------------------------------------------------------------------
// Frames and layout snapshots (immutable once published)

struct Frame {
  std::uint64_t step = 0;
  std::vector<std::pair<int, std::string>> texts;  ///< (widget id, text)
  std::vector<std::pair<int, Image8>> images;      ///< (widget id, pixels)
  std::vector<std::pair<int, ParamValue>> params;  ///< current parameter widget values
};

struct Layout {
  WidgetCollection collection;
  std::vector<std::string> unresolved;
  std::vector<std::string> contexts;
};

/// Widget ids are 1-based positions across pwidgets, then dwidgets, then
/// comments of a collection.
struct WidgetRef {
  WidgetTable table;
  std::size_t index;
};
std::optional<WidgetRef> resolve_widget_id(const WidgetCollection& coll, int id);
int widget_id_of(const WidgetCollection& coll, WidgetTable table, std::size_t index);

// ---------------------------------------------------------------------------
// Inputs

enum class Command { Init, Step, Run, Stop, Cont, Parse, Save, Quit };
std::optional<Command> command_from_string(std::string_view s);
std::string_view to_string(Command c);

struct SetParam {
  int widget_id = 0;
  UiValue value;
};
struct Pointer {
  int widget_id = 0;
  PointerEvent event;
};
struct SetGeometry {
  int widget_id = 0;
  Geometry geometry;
};
struct SelectContext {
  std::string name;
};
struct SetDelay {
  int ms = 0;
};

using Input = std::variant<Command, SetParam, Pointer, SetGeometry, SelectContext, SetDelay>;

struct EngineEvent {
  enum class Kind { Frame, Layout, Report, Error, Quit } kind;
  std::shared_ptr<const Frame> frame;
  std::shared_ptr<const Layout> layout;
  nlohmann::json report;
  std::string code;
  std::string detail;
};

struct EngineOptions {
  std::size_t queue_capacity = 256;  ///< beyond this, pointer moves coalesce
  bool preserve_state_on_parse = true;
};

/// Owns the hosted simulation and its widget collection. Everything that
/// touches simulation state runs on one control context: either the
/// caller of execute()/pump() (headless) or the thread started by start().
class Engine {
 public:
  /// Loads the directive context from the store when present; otherwise
  /// the collection starts empty in "N.N." until parse.
  Engine(std::unique_ptr<Simulation> sim, Store store, EngineOptions options = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Thread-safe enqueue.
  void post(Input input);

  /// Applies one input immediately on the calling thread. Throws Error
  /// ("not initialized", "bad command", "unknown widget", ...). Only for use
  /// when the loop thread is not running.
  void execute(const Input& input);
  /// Drains the queue synchronously; errors become Error events.
  void pump();

  void start();
  /// Asks the loop to quit and joins it.
  void shutdown();
  /// Blocks until a quit command has been processed.
  void wait_quit();

  using Listener = std::function<void(const EngineEvent&)>;
  int subscribe(Listener listener);
  void unsubscribe(int id);

  std::shared_ptr<const Frame> last_frame() const;
  std::shared_ptr<const Layout> layout() const;
  std::uint64_t step_count() const { return step_count_.load(); }
  bool running() const { return running_.load(); }
  bool initialized() const { return initialized_.load(); }
  int effective_delay_ms() const;

  /// Loop-context accessors for tests and tools.
  const WidgetCollection& collection() const { return coll_; }
  Simulation& simulation() { return *sim_; }
  FieldRegistry& fields() { return fields_; }
  Store& store() { return store_; }

 private:
  void handle(const Input& input);
  void handle_command(Command c);
  void do_init();
  void do_step();
  void do_parse();
  void do_save();
  void do_select(const std::string& name);
  void apply_set_param(const SetParam& p);
  void apply_pointer(const Pointer& p);
  void apply_geometry(const SetGeometry& g);
  void adopt_collection(WidgetCollection coll);
  void push_values_to_fields();
  void publish_frame();
  void publish_layout();
  void emit(const EngineEvent& e);
  void emit_error(const std::string& code, const std::string& detail);
  void loop();
  bool pop(Input& out);

  std::unique_ptr<Simulation> sim_;
  Store store_;
  EngineOptions options_;
  FieldRegistry fields_;
  WidgetCollection coll_;
  std::vector<WidgetState> states_;  // parallel to coll_.pwidgets
  BindingTable bindings_;
  std::unique_ptr<Binder> binder_;
  int set_delay_ms_ = 0;

  std::atomic<std::uint64_t> step_count_{0};
  std::atomic<bool> running_{false};
  std::atomic<bool> initialized_{false};
  bool quit_ = false;

  mutable std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<Input> queue_;
  bool quit_requested_ = false;

  mutable std::mutex publish_mutex_;
  std::shared_ptr<const Frame> frame_;
  std::shared_ptr<const Layout> layout_;
  std::map<int, Listener> listeners_;
  int next_listener_ = 1;
  std::condition_variable quit_cv_;
  bool quit_done_ = false;

  std::thread thread_;
};

}  // namespace simdeck
