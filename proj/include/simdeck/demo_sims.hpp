#pragma once

#include <cstdint>
#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "simdeck/engine.hpp"
#include "simdeck/numerics.hpp"
#include "simdeck/render.hpp"

// Concrete demo simulations. Exposed so tests can inspect their state.
namespace simdeck::demos {

class Decay : public Simulation {
 public:
  std::string name() const override { return "decay"; }
  std::string directives() const override;
  void declare(FieldRegistry& f) override;
  void init() override;
  void step() override;
  int delay_ms() const override { return static_cast<int>(delay); }

  double decay = 0.9;
  std::int64_t delay = 0;
  double x = 100.0;
  std::int64_t n = 0;
  std::string str_results;

 private:
  void report();
};

/// Leaky integrate-and-fire neuron drawn on a sweep scope.
class LifScope : public Simulation {
 public:
  LifScope();
  std::string name() const override { return "lif_scope"; }
  std::string directives() const override;
  void declare(FieldRegistry& f) override;
  void init() override;
  void step() override;

  // Parameters
  double I0 = 1.5, sigma = 0.3, theta = 1.0, dt = 0.1, tau = 10.0, v_spike = 2.0;
  std::int64_t substeps = 10;  ///< Euler steps per engine step
  std::int64_t seed = 42;

  // State
  LifState state;
  std::int64_t spikes = 0;
  std::optional<double> last_spike_t;
  std::optional<double> last_isi;
  Scope scope;
  Image8 im_scope;
  std::string str_results;

 private:
  LifParams params() const;
  void report();
  std::mt19937_64 rng_;
};

/// LIF neuron with a keyed parameter group and a line plot refreshed every
/// disp_skip steps.
class LifPlot : public Simulation {
 public:
  LifPlot();
  std::string name() const override { return "lif_plot"; }
  std::string directives() const override;
  void declare(FieldRegistry& f) override;
  void init() override;
  void step() override;
  int frame_interval() const override { return static_cast<int>(std::max<std::int64_t>(1, disp_skip)); }

  KeyedGroup lif_pars;
  std::int64_t disp_skip = 10;
  std::int64_t seed = 42;
  double window_ms = 100.0;

  LifState state;
  std::vector<double> ts, vs, spike_ts;
  std::int64_t n = 0;
  Image8 im_plot;
  std::string str_results;

 private:
  LifParams params() const;
  void redraw();
  std::mt19937_64 rng_;
};

/// Interactive 2-D point set edited through the click/drag automaton.
class DataGen : public Simulation {
 public:
  DataGen();
  std::string name() const override { return "datagen"; }
  std::string directives() const override;
  void declare(FieldRegistry& f) override;
  void init() override;
  void step() override;
  void bind(Binder& b) override;

  std::string str_action = "New";
  std::string str_class = "+1";
  KeyedGroup gen_pars;  ///< N, sigma_x, sigma_y, rho
  std::string str_clear = "0";
  std::int64_t seed = 7;

  std::vector<Point> X;
  std::vector<double> T;
  Image8 im_data;
  std::string str_results;

  const AxisLayout& axis() const { return axis_; }

 protected:
  virtual void on_action(const ActionCommand& cmd);
  virtual void redraw();
  virtual std::string summary() const;
  void add_points(Point center);
  std::optional<std::size_t> nearest(Point p) const;
  Figure base_figure() const;
  void draw_points(Figure& fig) const;

  AxisLayout axis_;
  std::mt19937_64 rng_;
  std::optional<std::size_t> dragged_;
};

/// DataGen plus least-squares and kernel classifiers with a rendered
/// decision boundary.
class Classifiers : public DataGen {
 public:
  Classifiers();
  std::string name() const override { return "classifiers"; }
  std::string directives() const override;
  void declare(FieldRegistry& f) override;
  void init() override;
  void step() override;

  std::string str_classifier = "least_squares";
  std::string str_kernel = "tanh";
  double kernel_sigma = 1.0;
  double log_lambda = -3.0;

  std::optional<ClassifierModel> model;
  std::string fit_error;
  int train_errors = 0;
  std::optional<double> test_value;  ///< y at the last Test click
  static constexpr int kGrid = 101;

  double lambda() const;
  void refit();

 protected:
  void on_action(const ActionCommand& cmd) override;
  void redraw() override;
  std::string summary() const override;
};

}  // namespace simdeck::demos
