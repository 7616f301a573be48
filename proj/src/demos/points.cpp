#include <cmath>
#include <cstdio>

#include "simdeck/demo_sims.hpp"
#include "simdeck/error.hpp"
#include "simdeck/text.hpp"

namespace simdeck::demos {

namespace {

constexpr int kSize = 400;
constexpr double kRange = 3.0;

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Widgets shared by the point-editing demos.
std::string point_directives(const std::string& sim, const std::string& actions) {
  return "#@IVISIT:SIMULATION & " + sim + "\n#@IVISIT:RADIOBUTTON & Action & [" + actions +
         "] & str_action & New\n" + R"(#@IVISIT:RADIOBUTTON & Class & [+1,-1] & str_class & +1
#@IVISIT:DICTSLIDER & Data Generation & [200,20,-1,2,10] & gen_pars & 0
#@IVISIT:DICTSLIDERITEM & N & [1,100,5,1] & N & int & 10
#@IVISIT:DICTSLIDERITEM & sigma_x & [0.01,2,5,0.01] & sigma_x & float & 0.3
#@IVISIT:DICTSLIDERITEM & sigma_y & [0.01,2,5,0.01] & sigma_y & float & 0.3
#@IVISIT:DICTSLIDERITEM & rho & [-0.95,0.95,5,0.05] & rho & float & 0
#@IVISIT:BUTTON & Clear & [Data,Clear] & str_clear
#@IVISIT:IMAGE & Data & 1.0 & [0,255] & im_data & int
#@IVISIT:TEXT_OUT & Results & [30,5] & just_left & str_results
)";
}

Eigen::MatrixXd to_matrix(const std::vector<Point>& pts) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    X(static_cast<Eigen::Index>(i), 0) = pts[i].x;
    X(static_cast<Eigen::Index>(i), 1) = pts[i].y;
  }
  return X;
}

}  // namespace

// ---------------------------------------------------------------------------
// DataGen

DataGen::DataGen() {
  gen_pars.set("N", std::int64_t{10});
  gen_pars.set("sigma_x", 0.3);
  gen_pars.set("sigma_y", 0.3);
  gen_pars.set("rho", 0.0);
  axis_ = Figure(kSize, kSize, -kRange, kRange, -kRange, kRange).axis();
}

std::string DataGen::directives() const { return point_directives("datagen", "New,Delete,Move"); }

void DataGen::declare(FieldRegistry& f) {
  f.param("str_action", str_action);
  f.param("str_class", str_class);
  f.param("gen_pars", gen_pars);
  f.param("str_clear", str_clear);
  f.param("seed", seed);
  f.data("im_data", im_data);
  f.data("str_results", str_results);
}

void DataGen::init() {
  rng_.seed(static_cast<std::uint64_t>(seed));
  X.clear();
  T.clear();
  dragged_.reset();
  redraw();
}

void DataGen::step() {
  if (str_clear == "1") {
    X.clear();
    T.clear();
    dragged_.reset();
    redraw();
  }
}

void DataGen::bind(Binder& b) {
  AutomatonConfig cfg;
  cfg.action_param = "str_action";
  for (const auto& [name, type] : std::initializer_list<std::pair<const char*, ActionType>>{
           {"Test", ActionType::Click}, {"New", ActionType::Click}, {"Delete", ActionType::Click},
           {"Move", ActionType::Drag}})
    cfg.action_types.emplace(name, type);
  cfg.coordinate_mode = CoordinateMode::Data;
  b.bind_automaton("Data", std::move(cfg), &axis_, [this](const ActionCommand& c) { on_action(c); });
}

void DataGen::add_points(Point c) {
  const auto N = static_cast<std::int64_t>(std::llround(gen_pars.get("N")));
  const double sx = gen_pars.get("sigma_x"), sy = gen_pars.get("sigma_y"), rho = gen_pars.get("rho");
  const double t = str_class == "-1" ? -1.0 : 1.0;
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::int64_t i = 0; i < N; ++i) {
    // Cholesky factor of [[sx^2, rho sx sy], [rho sx sy, sy^2]].
    const double z1 = g(rng_), z2 = g(rng_);
    X.push_back({c.x + sx * z1, c.y + sy * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2)});
    T.push_back(t);
  }
}

std::optional<std::size_t> DataGen::nearest(Point p) const {
  if (X.empty()) return std::nullopt;
  return nearest_neighbor(to_matrix(X), Eigen::Vector2d(p.x, p.y));
}

void DataGen::on_action(const ActionCommand& c) {
  if (c.action == "New") {
    add_points(c.pos);
  } else if (c.action == "Delete") {
    if (const auto i = nearest(c.pos)) {
      X.erase(X.begin() + static_cast<std::ptrdiff_t>(*i));
      T.erase(T.begin() + static_cast<std::ptrdiff_t>(*i));
    }
  } else if (c.action == "Move") {
    if (c.phase == Phase::DragInit) dragged_ = nearest(c.pos);
    if (dragged_ && *dragged_ < X.size()) X[*dragged_] = c.pos;
    if (c.phase == Phase::DragFinish) dragged_.reset();
  } else {
    return;
  }
  redraw();
}

Figure DataGen::base_figure() const {
  Figure fig(kSize, kSize, axis_);
  fig.set_title(name());
  return fig;
}

void DataGen::draw_points(Figure& fig) const {
  std::vector<double> px, py, nx, ny;
  for (std::size_t i = 0; i < X.size(); ++i) {
    auto& xs = T[i] > 0 ? px : nx;
    auto& ys = T[i] > 0 ? py : ny;
    xs.push_back(X[i].x);
    ys.push_back(X[i].y);
  }
  fig.plot_scatter(px, py, Marker::Circle, kRed, 4);
  fig.plot_scatter(nx, ny, Marker::Cross, kBlue, 4);
}

std::string DataGen::summary() const {
  std::size_t pos = 0;
  for (double t : T) pos += t > 0;
  return "N=" + std::to_string(X.size()) + " (+1: " + std::to_string(pos) + ", -1: " + std::to_string(X.size() - pos) +
         ")";
}

void DataGen::redraw() {
  Figure fig = base_figure();
  draw_points(fig);
  im_data = fig.render().image;
  str_results = summary();
}

// ---------------------------------------------------------------------------
// Classifiers

Classifiers::Classifiers() = default;

std::string Classifiers::directives() const {
  return point_directives("classifiers", "Test,New,Delete,Move") + R"(
#@IVISIT:LISTSEL & Classifier & [20,2] & [least_squares,kernel_mlp] & str_classifier & -1 & string & least_squares
#@IVISIT:LISTSEL & Kernel & [20,3] & [linear,tanh,gauss] & str_kernel & -1 & string & tanh
#@IVISIT:SLIDER & Kernel sigma & [200,1] & [0.1,10,5,0.1] & kernel_sigma & -1 & float & 1
#@IVISIT:SLIDER & log lambda & [200,1] & [-6,2,9,0.1] & log_lambda & -1 & float & -3
)";
}

void Classifiers::declare(FieldRegistry& f) {
  DataGen::declare(f);
  f.param("str_classifier", str_classifier);
  f.param("str_kernel", str_kernel);
  f.param("kernel_sigma", kernel_sigma);
  f.param("log_lambda", log_lambda);
}

double Classifiers::lambda() const { return std::pow(10.0, log_lambda); }

void Classifiers::init() {
  model.reset();
  test_value.reset();
  DataGen::init();
}

void Classifiers::step() {
  DataGen::step();
  // Parameter edits reach the fields directly, so every step refreshes.
  redraw();
}

void Classifiers::refit() {
  model.reset();
  fit_error.clear();
  train_errors = 0;
  if (X.empty()) {
    fit_error = "no data";
    return;
  }
  const Eigen::MatrixXd Xm = to_matrix(X);
  const Eigen::VectorXd Tv = Eigen::Map<const Eigen::VectorXd>(T.data(), static_cast<Eigen::Index>(T.size()));
  try {
    if (str_classifier == "kernel_mlp")
      model = fit_kernel_mlp(Xm, Tv, kernel_from_string(str_kernel), kernel_sigma, lambda());
    else
      model = least_squares_model(Xm, Tv, lambda());
    train_errors = count_errors(*model, Xm, Tv);
  } catch (const Error& e) {
    fit_error = e.code();
  }
}

void Classifiers::on_action(const ActionCommand& c) {
  if (c.action == "Test") {
    redraw();
    test_value.reset();
    if (model) test_value = model->discriminant(Eigen::Vector2d(c.pos.x, c.pos.y));
    str_results = summary();
    return;
  }
  DataGen::on_action(c);
}

void Classifiers::redraw() {
  refit();
  Figure fig = base_figure();
  if (model) {
    ImageBuffer grid(kGrid, kGrid, 1);
    for (int j = 0; j < kGrid; ++j) {
      const double y = axis_.y_min + (axis_.y_max - axis_.y_min) * j / (kGrid - 1);
      for (int i = 0; i < kGrid; ++i) {
        const double x = axis_.x_min + (axis_.x_max - axis_.x_min) * i / (kGrid - 1);
        grid.at(i, j) = model->discriminant(Eigen::Vector2d(x, y));
      }
    }
    for (const auto& line : contour_zero(grid, axis_)) fig.plot_polyline(line, kCyan);
  }
  draw_points(fig);
  im_data = fig.render().image;
  str_results = summary();
}

std::string Classifiers::summary() const {
  std::string s = DataGen::summary() + "\nclassifier=" + str_classifier;
  if (str_classifier == "kernel_mlp") s += " (" + str_kernel + ")";
  s += "\nlambda=" + text::format_double(lambda());
  if (!fit_error.empty())
    s += "\nfit: " + fit_error;
  else
    s += "\nerrors=" + std::to_string(train_errors);
  if (test_value) s += "\ntest y=" + fixed(*test_value) + " class " + (*test_value >= 0 ? "+1" : "-1");
  return s;
}

}  // namespace simdeck::demos
