#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

// Numerics behind the demo simulations.
namespace simdeck {

double decay_step(double x, double decay);

struct LifParams {
  double tau = 10.0;  ///< ms
  double I0 = 0.5;
  double sigma = 0.0;
  double theta = 1.0;
  double v_spike = 2.0;
  double dt = 0.1;  ///< ms
};

struct LifState {
  double v = 0.0;
  double t = 0.0;
};

struct LifStep {
  LifState next;
  double spike = 0.0;        ///< v_spike on a spike step, else 0
  double v_pre_reset = 0.0;  ///< voltage after the Euler update, before reset
};

/// Euler update with input I0 + noise, then threshold and reset to 0.
LifStep lif_step(const LifState& s, const LifParams& p, double noise);

/// N x (D+1), column 0 all ones. Throws Error("empty data") for N = 0.
Eigen::MatrixXd build_design_matrix(const Eigen::MatrixXd& X);

/// Ridge-regularized least squares on the design matrix. Throws
/// Error("singular; increase lambda") for a rank-deficient system.
Eigen::VectorXd fit_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, double lambda);

enum class KernelKind { Linear, Tanh, Gauss };

/// Throws Error("bad kernel") for unknown names.
KernelKind kernel_from_string(std::string_view name);
std::string_view to_string(KernelKind k);

/// linear: a; tanh: tanh(a/sigma); gauss: 1 - exp(-a^2 / (2 sigma)).
double kernel_activation(double a, KernelKind kind, double sigma);
/// String form; throws Error("bad kernel").
double kernel_activation(double a, std::string_view kind, double sigma);

struct ClassifierModel {
  enum class Kind { LeastSquares, KernelMlp } kind = Kind::LeastSquares;
  Eigen::VectorXd w;
  Eigen::MatrixXd phi;  ///< training design matrix (kernel model only)
  KernelKind kernel = KernelKind::Linear;
  double sigma = 1.0;
  double lambda = 0.0;

  /// y(x) for a raw input x (length D).
  double discriminant(const Eigen::VectorXd& x) const;
};

ClassifierModel least_squares_model(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, double lambda);

/// w solves (h(K) + lambda I) w = T with K = Phi Phi^T, h applied
/// elementwise. Throws "singular; increase lambda", "bad kernel".
ClassifierModel fit_kernel_mlp(const Eigen::MatrixXd& X, const Eigen::VectorXd& T, KernelKind kind, double sigma,
                               double lambda);

/// Row of X closest to x; ties resolve to the lowest index.
/// Throws Error("empty data").
std::size_t nearest_neighbor(const Eigen::MatrixXd& X, const Eigen::VectorXd& x);

/// Misclassified rows; y = 0 counts as class +1.
int count_errors(const ClassifierModel& model, const Eigen::MatrixXd& X, const Eigen::VectorXd& T);

}  // namespace simdeck
