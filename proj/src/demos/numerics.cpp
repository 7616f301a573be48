#include "simdeck/numerics.hpp"

#include <cmath>
#include <limits>

#include "simdeck/error.hpp"

namespace simdeck {

double decay_step(double x, double decay) { return decay * x; }

LifStep lif_step(const LifState& s, const LifParams& p, double noise) {
  const double I = p.I0 + noise;
  LifStep out;
  out.next.t = s.t + p.dt;
  out.next.v = s.v + (I - s.v) / p.tau * p.dt;
  out.v_pre_reset = out.next.v;
  if (out.next.v >= p.theta) {
    out.spike = p.v_spike;
    out.next.v = 0.0;
  }
  return out;
}

Eigen::MatrixXd build_design_matrix(const Eigen::MatrixXd& X) {
  if (X.rows() == 0) throw Error("empty data");
  Eigen::MatrixXd phi(X.rows(), X.cols() + 1);
  phi.col(0).setOnes();
  phi.rightCols(X.cols()) = X;
  return phi;
}

namespace {

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  // Relative pivot threshold scaled to the matrix size.
  qr.setThreshold(std::numeric_limits<double>::epsilon() * static_cast<double>(A.rows()) * 16);
  if (qr.rank() < A.rows()) throw Error("singular; increase lambda");
  Eigen::VectorXd x = qr.solve(b);
  // One step of iterative refinement keeps residuals near machine precision.
  x += qr.solve(b - A * x);
  if (!x.allFinite()) throw Error("singular; increase lambda");
  return x;
}

}  // namespace

Eigen::VectorXd fit_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, double lambda) {
  const Eigen::MatrixXd phi = build_design_matrix(X);
  Eigen::MatrixXd A = phi.transpose() * phi;
  A.diagonal().array() += lambda;
  return solve_checked(A, phi.transpose() * T);
}

KernelKind kernel_from_string(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "tanh") return KernelKind::Tanh;
  if (name == "gauss") return KernelKind::Gauss;
  throw Error("bad kernel", std::string(name));
}

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Tanh: return "tanh";
    case KernelKind::Gauss: return "gauss";
  }
  return "?";
}

double kernel_activation(double a, KernelKind kind, double sigma) {
  switch (kind) {
    case KernelKind::Linear: return a;
    case KernelKind::Tanh: return std::tanh(a / sigma);
    case KernelKind::Gauss: return 1.0 - std::exp(-a * a / (2.0 * sigma));
  }
  throw Error("bad kernel");
}

double kernel_activation(double a, std::string_view kind, double sigma) {
  return kernel_activation(a, kernel_from_string(kind), sigma);
}

double ClassifierModel::discriminant(const Eigen::VectorXd& x) const {
  Eigen::VectorXd f(x.size() + 1);
  f(0) = 1.0;
  f.tail(x.size()) = x;
  if (kind == Kind::LeastSquares) return w.dot(f);
  const Eigen::VectorXd a = phi * f;
  return w.dot(a.unaryExpr([&](double v) { return kernel_activation(v, kernel, sigma); }));
}

ClassifierModel least_squares_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, double lambda) {
  ClassifierModel m;
  m.kind = ClassifierModel::Kind::LeastSquares;
  m.w = fit_least_squares(X, T, lambda);
  m.lambda = lambda;
  return m;
}

ClassifierModel fit_kernel_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, KernelKind kind, double sigma,
                               double lambda) {
  if (kind != KernelKind::Linear && !(sigma > 0.0)) throw Error("bad kernel", "sigma must be positive");
  ClassifierModel m;
  m.kind = ClassifierModel::Kind::KernelMlp;
  m.phi = build_design_matrix(X);
  m.kernel = kind;
  m.sigma = sigma;
  m.lambda = lambda;
  Eigen::MatrixXd H = (m.phi * m.phi.transpose()).unaryExpr([&](double a) { return kernel_activation(a, kind, sigma); });
  H.diagonal().array() += lambda;
  m.w = solve_checked(H.transpose(), T);
  return m;
}

std::size_t nearest_neighbor(const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
  if (X.rows() == 0) throw Error("empty data");
  std::size_t best = 0;
  double best_d = (X.row(0).transpose() - x).squaredNorm();
  for (Eigen::Index i = 1; i < X.rows(); ++i) {
    const double d = (X.row(i).transpose() - x).squaredNorm();
    if (d < best_d) best_d = d, best = static_cast<std::size_t>(i);
  }
  return best;
}

int count_errors(const ClassifierModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& T) {
  int errors = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double predicted = model.discriminant(X.row(i).transpose()) >= 0.0 ? 1.0 : -1.0;
    if (predicted != T(i)) ++errors;
  }
  return errors;
}

}  // namespace simdeck
