#include <cmath>
#include <cstdio>
#include <limits>

#include "simdeck/demo_sims.hpp"
#include "simdeck/text.hpp"

namespace simdeck::demos {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

// ---------------------------------------------------------------------------
// Scope variant

LifScope::LifScope() : scope(400, 200, 0.0, 100.0, -0.2, 2.2) {}

std::string LifScope::directives() const {
  return R"(
#@IVISIT:SIMULATION & lif_scope
#@IVISIT:SLIDER & I0 & [200,1] & [0,3,7,0.01] & I0 & -1 & float & 1.5
#@IVISIT:SLIDER & sigma & [200,1] & [0,2,5,0.01] & sigma & -1 & float & 0.3
#@IVISIT:SLIDER & theta & [200,1] & [0.1,2,5,0.01] & theta & -1 & float & 1
#@IVISIT:SLIDER & dt [msec] & [200,1] & [0.01,1,5,0.01] & dt & -1 & float & 0.1
#@IVISIT:SLIDER & Steps per frame & [200,1] & [1,100,5,1] & substeps & -1 & int & 10
#@IVISIT:IMAGE & Scope & 1.0 & [0,255] & im_scope & int
#@IVISIT:TEXT_OUT & Results & [30,5] & just_left & str_results
)";
}

void LifScope::declare(FieldRegistry& f) {
  f.param("I0", I0);
  f.param("sigma", sigma);
  f.param("theta", theta);
  f.param("dt", dt);
  f.param("tau", tau);
  f.param("substeps", substeps);
  f.param("seed", seed);
  f.data("im_scope", im_scope);
  f.data("str_results", str_results);
}

LifParams LifScope::params() const { return LifParams{tau, I0, sigma, theta, v_spike, dt}; }

void LifScope::init() {
  state = LifState{};
  rng_.seed(static_cast<std::uint64_t>(seed));
  spikes = 0;
  last_spike_t.reset();
  last_isi.reset();
  scope.clear();
  im_scope = scope.image();
  report();
}

void LifScope::step() {
  const LifParams p = params();
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::int64_t k = 0; k < std::max<std::int64_t>(1, substeps); ++k) {
    const double v_old = state.v;
    const LifStep r = lif_step(state, p, p.sigma * gauss(rng_));
    const double t = r.next.t;
    scope.set_data(t, r.v_pre_reset, v_old, 128);
    scope.set_data(t, r.v_pre_reset, kNaN, 255);
    if (r.spike != 0.0) {
      scope.set_data(t, r.spike, r.v_pre_reset, 255);
      ++spikes;
      if (last_spike_t) last_isi = t - *last_spike_t;
      last_spike_t = t;
    }
    state = r.next;
  }
  im_scope = scope.image();
  report();
}

void LifScope::report() {
  str_results = "t=" + fixed(state.t) + " ms\nv=" + fixed(state.v) + "\nspikes=" + text::format_int(spikes) +
                "\nisi=" + (last_isi ? fixed(*last_isi) + " ms" : std::string("-"));
}

// ---------------------------------------------------------------------------
// Plot variant

LifPlot::LifPlot() {
  lif_pars.set("I0", 1.5);
  lif_pars.set("sigma", 0.3);
  lif_pars.set("theta", 1.0);
  lif_pars.set("tau", 10.0);
  lif_pars.set("dt", 0.1);
}

std::string LifPlot::directives() const {
  return R"(
#@IVISIT:SIMULATION & lif_plot
#@IVISIT:DICTSLIDER & LIF Parameters & [200,20,-1,2,10] & lif_pars & 0
#@IVISIT:DICTSLIDERITEM & I0 & [0,3,7,0.01] & I0 & float & 1.5
#@IVISIT:DICTSLIDERITEM & sigma & [0,2,5,0.01] & sigma & float & 0.3
#@IVISIT:DICTSLIDERITEM & theta & [0.1,2,5,0.01] & theta & float & 1
#@IVISIT:DICTSLIDERITEM & tau [msec] & [1,50,5,0.5] & tau & float & 10
#@IVISIT:DICTSLIDERITEM & dt [msec] & [0.01,1,5,0.01] & dt & float & 0.1
#@IVISIT:SLIDER & Display every & [200,1] & [1,100,5,1] & disp_skip & -1 & int & 10
#@IVISIT:IMAGE & Voltage & 1.0 & [0,255] & im_plot & int
#@IVISIT:TEXT_OUT & Results & [30,4] & just_left & str_results
)";
}

void LifPlot::declare(FieldRegistry& f) {
  f.param("lif_pars", lif_pars);
  f.param("disp_skip", disp_skip);
  f.param("seed", seed);
  f.data("im_plot", im_plot);
  f.data("str_results", str_results);
}

LifParams LifPlot::params() const {
  LifParams p;
  p.I0 = lif_pars.get("I0");
  p.sigma = lif_pars.get("sigma");
  p.theta = lif_pars.get("theta");
  p.tau = lif_pars.get("tau");
  p.dt = lif_pars.get("dt");
  return p;
}

void LifPlot::init() {
  state = LifState{};
  rng_.seed(static_cast<std::uint64_t>(seed));
  ts.assign(1, 0.0);
  vs.assign(1, 0.0);
  spike_ts.clear();
  n = 0;
  redraw();
}

void LifPlot::step() {
  const LifParams p = params();
  std::normal_distribution<double> gauss(0.0, 1.0);
  const LifStep r = lif_step(state, p, p.sigma * gauss(rng_));
  state = r.next;
  ++n;
  // Spike steps show the spike height, then the trace resumes from reset.
  ts.push_back(state.t);
  vs.push_back(r.spike != 0.0 ? r.spike : state.v);
  if (r.spike != 0.0) spike_ts.push_back(state.t);
  const double t_lo = state.t - window_ms;
  std::size_t drop = 0;
  while (drop < ts.size() && ts[drop] < t_lo) ++drop;
  ts.erase(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(drop));
  vs.erase(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(drop));
  if (n % std::max<std::int64_t>(1, disp_skip) == 0) redraw();
}

void LifPlot::redraw() {
  const double t_hi = std::max(window_ms, state.t);
  Figure fig(400, 250, t_hi - window_ms, t_hi, -0.2, 2.2);
  fig.set_title("v(t)");
  fig.plot_line(ts, vs, kBlue);
  fig.plot_line({t_hi - window_ms, t_hi}, {params().theta, params().theta}, kGray);
  im_plot = fig.render().image;
  std::size_t recent = 0;
  for (double t : spike_ts)
    if (t >= t_hi - window_ms) ++recent;
  str_results = "step=" + text::format_int(n) + "\nt=" + fixed(state.t) + " ms\nspikes=" +
                text::format_int(static_cast<std::int64_t>(spike_ts.size())) +
                "\nrate=" + fixed(1000.0 * static_cast<double>(recent) / window_ms, 1) + " Hz";
}

}  // namespace simdeck::demos
