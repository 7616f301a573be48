#include "simdeck/engine.hpp"

#include <algorithm>

#include "simdeck/directive.hpp"
#include "simdeck/error.hpp"

namespace simdeck {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::Init, "init"}, {Command::Step, "step"}, {Command::Run, "run"},   {Command::Stop, "stop"},
    {Command::Cont, "cont"}, {Command::Parse, "parse"}, {Command::Save, "save"}, {Command::Quit, "quit"},
};

ParamValue default_value(const ParameterWidgetDef& w) {
  if (const auto* s = std::get_if<SliderConfig>(&w.config)) {
    if (s->type == ValueType::Int) return static_cast<std::int64_t>(s->min);
    return s->min;
  }
  if (std::holds_alternative<DictSliderConfig>(w.config)) return KeyedGroup{};
  return std::string{};
}

bool is_move(const Input& in, int widget_id) {
  const auto* p = std::get_if<Pointer>(&in);
  return p && p->event.kind == PointerKind::Move && p->widget_id == widget_id;
}

}  // namespace

std::optional<Command> command_from_string(std::string_view s) {
  for (const auto& [c, n] : kCommandNames)
    if (n == s) return c;
  return std::nullopt;
}

std::string_view to_string(Command c) {
  for (const auto& [k, n] : kCommandNames)
    if (k == c) return n;
  return "?";
}

std::optional<WidgetRef> resolve_widget_id(const WidgetCollection& coll, int id) {
  if (id < 1) return std::nullopt;
  auto i = static_cast<std::size_t>(id - 1);
  if (i < coll.pwidgets.size()) return WidgetRef{WidgetTable::Parameter, i};
  i -= coll.pwidgets.size();
  if (i < coll.dwidgets.size()) return WidgetRef{WidgetTable::Data, i};
  i -= coll.dwidgets.size();
  if (i < coll.comments.size()) return WidgetRef{WidgetTable::Comment, i};
  return std::nullopt;
}

int widget_id_of(const WidgetCollection& coll, WidgetTable table, std::size_t index) {
  std::size_t base = 0;
  if (table != WidgetTable::Parameter) base += coll.pwidgets.size();
  if (table == WidgetTable::Comment) base += coll.dwidgets.size();
  return static_cast<int>(base + index + 1);
}

// ---------------------------------------------------------------------------
// Binder

void Binder::check_widget(const std::string& name, CoordinateMode mode, const AxisLayout* axis) const {
  const auto* w = coll_.find_dwidget(name);
  if (!w || w->kind() != WidgetKind::Image) throw Error("unknown widget", name);
  if (!fields_.has_data(w->target)) throw Error("bad binding", name + " shows an undeclared field");
  if (mode == CoordinateMode::Data) {
    if (!axis) throw Error("bad axis", name + ": data coordinates need an axis");
  }
}

void Binder::bind_automaton(const std::string& image_widget, AutomatonConfig config, const AxisLayout* axis,
                            ActionHandler handler) {
  check_widget(image_widget, config.coordinate_mode, axis);
  if (!handler) throw Error("bad binding", image_widget + ": no handler");
  if (!fields_.has_param(config.action_param)) throw Error("bad binding", "no action parameter " + config.action_param);
  entries_.insert_or_assign(image_widget, AutomatonBinding{std::move(config), axis, std::move(handler), {}});
}

void Binder::bind_raw(const std::string& image_widget, RawHandlers handlers) {
  check_widget(image_widget, handlers.coordinate_mode, handlers.axis);
  entries_.insert_or_assign(image_widget, std::move(handlers));
}

// ---------------------------------------------------------------------------
// Engine

Engine::Engine(std::unique_ptr<Simulation> sim, Store store, EngineOptions options)
    : sim_(std::move(sim)), store_(std::move(store)), options_(options) {
  sim_->declare(fields_);
  const auto specs = parse_source(sim_->directives());
  const auto ctx = context_of(specs);
  const std::string name = ctx && store_.has_context(*ctx) ? *ctx : std::string(kDefaultContext);
  adopt_collection(store_.load_collection(name));
  publish_layout();
}

Engine::~Engine() { shutdown(); }

void Engine::post(Input input) {
  {
    std::lock_guard lk(queue_mutex_);
    const auto* ptr = std::get_if<Pointer>(&input);
    const bool coalesce = ptr && ptr->event.kind == PointerKind::Move && queue_.size() >= options_.queue_capacity &&
                          !queue_.empty() && is_move(queue_.back(), ptr->widget_id);
    if (coalesce)
      queue_.back() = std::move(input);
    else
      queue_.push_back(std::move(input));
  }
  queue_cv_.notify_one();
}

bool Engine::pop(Input& out) {
  std::lock_guard lk(queue_mutex_);
  if (queue_.empty()) return false;
  out = std::move(queue_.front());
  queue_.pop_front();
  return true;
}

void Engine::execute(const Input& input) { handle(input); }

void Engine::pump() {
  Input in;
  while (!quit_ && pop(in)) {
    try {
      handle(in);
    } catch (const Error& e) {
      emit_error(e.code(), e.what());
    }
  }
}

void Engine::start() {
  if (thread_.joinable()) return;
  thread_ = std::thread([this] { loop(); });
}

void Engine::shutdown() {
  if (!thread_.joinable()) return;
  {
    std::lock_guard lk(queue_mutex_);
    quit_requested_ = true;
  }
  queue_cv_.notify_one();
  thread_.join();
}

void Engine::wait_quit() {
  std::unique_lock lk(publish_mutex_);
  quit_cv_.wait(lk, [&] { return quit_done_; });
}

int Engine::subscribe(Listener listener) {
  std::lock_guard lk(publish_mutex_);
  const int id = next_listener_++;
  listeners_.emplace(id, std::move(listener));
  return id;
}

void Engine::unsubscribe(int id) {
  std::lock_guard lk(publish_mutex_);
  listeners_.erase(id);
}

std::shared_ptr<const Frame> Engine::last_frame() const {
  std::lock_guard lk(publish_mutex_);
  return frame_;
}

std::shared_ptr<const Layout> Engine::layout() const {
  std::lock_guard lk(publish_mutex_);
  return layout_;
}

int Engine::effective_delay_ms() const { return std::max(set_delay_ms_, sim_->delay_ms()); }

void Engine::loop() {
  auto next_step = Clock::now();
  while (!quit_) {
    Input in;
    bool have = false;
    {
      std::unique_lock lk(queue_mutex_);
      auto ready = [&] { return !queue_.empty() || quit_requested_; };
      if (running_)
        queue_cv_.wait_until(lk, next_step, ready);
      else
        queue_cv_.wait(lk, ready);
      if (!queue_.empty()) {
        in = std::move(queue_.front());
        queue_.pop_front();
        have = true;
      } else if (quit_requested_) {
        lk.unlock();
        handle_command(Command::Quit);
        break;
      }
    }
    if (have) {
      const bool was_running = running_;
      try {
        handle(in);
      } catch (const Error& e) {
        emit_error(e.code(), e.what());
      }
      if (running_ && !was_running) next_step = Clock::now();
      continue;
    }
    if (running_ && Clock::now() >= next_step) {
      const auto started = Clock::now();
      try {
        do_step();
        if (step_count_ % static_cast<std::uint64_t>(std::max(1, sim_->frame_interval())) == 0) publish_frame();
      } catch (const Error& e) {
        running_ = false;
        emit_error(e.code(), e.what());
      } catch (const std::exception& e) {
        running_ = false;
        emit_error("step failed", e.what());
      }
      next_step = started + std::chrono::milliseconds(effective_delay_ms());
    }
  }
}

void Engine::handle(const Input& input) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Command>) {
          handle_command(v);
        } else if constexpr (std::is_same_v<T, SetParam>) {
          apply_set_param(v);
          if (!running_) publish_frame();
        } else if constexpr (std::is_same_v<T, Pointer>) {
          apply_pointer(v);
          if (!running_) publish_frame();
        } else if constexpr (std::is_same_v<T, SetGeometry>) {
          apply_geometry(v);
          publish_layout();
        } else if constexpr (std::is_same_v<T, SelectContext>) {
          do_select(v.name);
        } else if constexpr (std::is_same_v<T, SetDelay>) {
          set_delay_ms_ = std::max(0, v.ms);
        }
      },
      input);
}

void Engine::handle_command(Command c) {
  switch (c) {
    case Command::Init:
      do_init();
      return;
    case Command::Step:
      do_step();
      publish_frame();
      return;
    case Command::Run:
    case Command::Cont:
      if (!initialized_) throw Error("not initialized");
      running_ = true;
      return;
    case Command::Stop:
      running_ = false;
      return;
    case Command::Parse:
      do_parse();
      return;
    case Command::Save:
      do_save();
      return;
    case Command::Quit: {
      running_ = false;
      publish_frame();
      quit_ = true;
      emit({EngineEvent::Kind::Quit, nullptr, nullptr, {}, {}, {}});
      std::lock_guard lk(publish_mutex_);
      quit_done_ = true;
      quit_cv_.notify_all();
      return;
    }
  }
  throw Error("bad command");
}

void Engine::do_init() {
  initialized_ = false;
  running_ = false;
  push_values_to_fields();
  sim_->init();
  step_count_ = 0;
  for (auto& s : states_) s.clicked = false;
  auto binder = std::unique_ptr<Binder>(new Binder(coll_, fields_));
  sim_->bind(*binder);
  binder_ = std::move(binder);
  initialized_ = true;
  publish_frame();
}

void Engine::do_step() {
  if (!initialized_) throw Error("not initialized");
  for (std::size_t i = 0; i < states_.size(); ++i) {
    auto& s = states_[i];
    if (!std::holds_alternative<ButtonConfig>(s.def.config)) continue;
    const auto v = button_read_and_reset(s);
    if (bindings_.is_bound(WidgetTable::Parameter, s.def.name))
      fields_.apply(ParamWrite{s.def.target, s.def.list_index, std::nullopt, v});
  }
  sim_->step();
  ++step_count_;
}

void Engine::do_parse() {
  const auto specs = parse_source(sim_->directives());
  WidgetCollection next = coll_;
  if (const auto ctx = context_of(specs); ctx && *ctx != coll_.context.name && store_.has_context(*ctx))
    next = store_.load_collection(*ctx);
  const auto report = merge_into_collection(specs, next, {options_.preserve_state_on_parse});
  next.context.app_name = sim_->name();
  adopt_collection(std::move(next));
  publish_layout();
  emit({EngineEvent::Kind::Report,
        nullptr,
        nullptr,
        {{"action", "parse"},
         {"context", report.context},
         {"created", report.created},
         {"updated", report.updated},
         {"unchanged", report.unchanged}},
        {},
        {}});
}

void Engine::do_save() {
  store_.save_collection(coll_);
  publish_layout();
  emit({EngineEvent::Kind::Report, nullptr, nullptr, {{"action", "save"}, {"context", coll_.context.name}}, {}, {}});
}

void Engine::do_select(const std::string& name) {
  if (!store_.has_context(name)) throw Error("no such context", name);
  adopt_collection(store_.load_collection(name));
  publish_layout();
  publish_frame();
}

void Engine::adopt_collection(WidgetCollection coll) {
  coll_ = std::move(coll);
  states_.clear();
  for (const auto& w : coll_.pwidgets) {
    const ParameterDef* p = coll_.find_parameter(w.target, w.list_index);
    states_.emplace_back(w, p ? p->value : default_value(w));
  }
  bindings_ = resolve_bindings(coll_, fields_.describe());
  push_values_to_fields();
}

void Engine::push_values_to_fields() {
  for (const auto& p : coll_.parameters) {
    if (!fields_.has_param(p.name)) continue;
    bool bound = false;
    for (const auto& w : coll_.pwidgets)
      if (w.target == p.name && w.list_index == p.list_index && bindings_.is_bound(WidgetTable::Parameter, w.name))
        bound = true;
    if (!bound) continue;
    try {
      fields_.apply(p);
    } catch (const Error&) {
      // Type-incompatible stored values leave the simulation default in place.
    }
  }
  for (const auto& s : states_)
    if (std::holds_alternative<ButtonConfig>(s.def.config) && bindings_.is_bound(WidgetTable::Parameter, s.def.name))
      fields_.apply(ParamWrite{s.def.target, s.def.list_index, std::nullopt, std::string("0")});
}

void Engine::apply_set_param(const SetParam& sp) {
  const auto ref = resolve_widget_id(coll_, sp.widget_id);
  if (!ref || ref->table != WidgetTable::Parameter) throw Error("unknown widget", std::to_string(sp.widget_id));
  auto& state = states_[ref->index];
  WidgetState trial = state;
  const auto write = apply_param_widget(trial, sp.value);
  const bool bound = bindings_.is_bound(WidgetTable::Parameter, state.def.name);
  if (write && bound) fields_.apply(*write);
  state = std::move(trial);
  if (!write) return;
  ParameterDef* p = coll_.find_parameter(write->target, write->list_index);
  if (!p) return;
  if (write->key) {
    if (auto* g = std::get_if<KeyedGroup>(&p->value)) {
      if (const auto* i = std::get_if<std::int64_t>(&write->value)) g->set(*write->key, *i);
      else if (const auto* d = std::get_if<double>(&write->value)) g->set(*write->key, *d);
    }
  } else if (kind_of(write->value) == p->kind) {
    p->value = write->value;
  }
}

void Engine::apply_pointer(const Pointer& ptr) {
  const auto ref = resolve_widget_id(coll_, ptr.widget_id);
  if (!ref) throw Error("unknown widget", std::to_string(ptr.widget_id));
  if (ref->table != WidgetTable::Data || !binder_) return;
  const auto& name = coll_.dwidgets[ref->index].name;
  const auto it = binder_->entries_.find(name);
  if (it == binder_->entries_.end()) return;

  auto transform = [](Point p, CoordinateMode mode, const AxisLayout* axis) {
    return mode == CoordinateMode::Data ? data_from_pixel(p, *axis) : p;
  };
  if (auto* a = std::get_if<Binder::AutomatonBinding>(&it->second)) {
    PointerEvent evt = ptr.event;
    if (evt.button != a->config.button_no) return;
    evt.pos = transform(evt.pos, a->config.coordinate_mode, a->axis);
    std::string action;
    if (const auto v = fields_.read(a->config.action_param); std::holds_alternative<std::string>(v))
      action = std::get<std::string>(v);
    if (const auto cmd = feed(a->state, a->config, action, evt)) a->handler(*cmd);
    return;
  }
  const auto& raw = std::get<RawHandlers>(it->second);
  if (ptr.event.button != raw.button_no) return;
  const Point pos = transform(ptr.event.pos, raw.coordinate_mode, raw.axis);
  switch (ptr.event.kind) {
    case PointerKind::Press:
      if (raw.on_press) raw.on_press(pos);
      break;
    case PointerKind::Move:
      if (raw.on_move) raw.on_move(pos);
      break;
    case PointerKind::Release:
      if (raw.on_release) raw.on_release(pos);
      break;
  }
}

void Engine::apply_geometry(const SetGeometry& g) {
  const auto ref = resolve_widget_id(coll_, g.widget_id);
  if (!ref) throw Error("unknown widget", std::to_string(g.widget_id));
  switch (ref->table) {
    case WidgetTable::Parameter:
      coll_.pwidgets[ref->index].geometry = g.geometry;
      states_[ref->index].def.geometry = g.geometry;
      break;
    case WidgetTable::Data:
      coll_.dwidgets[ref->index].geometry = g.geometry;
      break;
    case WidgetTable::Comment:
      coll_.comments[ref->index].geometry = g.geometry;
      break;
  }
}

void Engine::publish_frame() {
  auto f = std::make_shared<Frame>();
  f->step = step_count_;
  if (initialized_) {
    for (std::size_t i = 0; i < coll_.dwidgets.size(); ++i) {
      const auto& w = coll_.dwidgets[i];
      const int id = widget_id_of(coll_, WidgetTable::Data, i);
      if (const auto* img = std::get_if<ImageConfig>(&w.config)) {
        if (auto pixels = fields_.image(w.target, img->lo, img->hi)) f->images.emplace_back(id, std::move(*pixels));
      } else if (auto t = fields_.text(w.target)) {
        f->texts.emplace_back(id, std::move(*t));
      }
    }
  }
  for (std::size_t i = 0; i < states_.size(); ++i)
    f->params.emplace_back(widget_id_of(coll_, WidgetTable::Parameter, i), states_[i].current);
  {
    std::lock_guard lk(publish_mutex_);
    frame_ = f;
  }
  emit({EngineEvent::Kind::Frame, f, nullptr, {}, {}, {}});
}

void Engine::publish_layout() {
  auto l = std::make_shared<Layout>();
  l->collection = coll_;
  l->unresolved = bindings_.unresolved;
  l->contexts = store_.list_contexts();
  {
    std::lock_guard lk(publish_mutex_);
    layout_ = l;
  }
  emit({EngineEvent::Kind::Layout, nullptr, l, {}, {}, {}});
}

void Engine::emit(const EngineEvent& e) {
  std::vector<Listener> targets;
  {
    std::lock_guard lk(publish_mutex_);
    for (const auto& [id, l] : listeners_) targets.push_back(l);
  }
  for (const auto& l : targets) l(e);
}

void Engine::emit_error(const std::string& code, const std::string& detail) {
  emit({EngineEvent::Kind::Error, nullptr, nullptr, {}, code, detail});
}

}  // namespace simdeck
