#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "randsg/oracle.hpp"
#include "randsg/rng.hpp"
#include "randsg/types.hpp"

namespace randsg {

/// f(x) = 1/2 x'Ax + b'x + c with symmetric positive-semidefinite A.
struct QuadraticProblem {
  Matrix A;
  Vector b;
  double c = 0.0;
  Vector spectrum;  ///< Eigenvalues of A, as supplied or computed.
  double L = 0.0;   ///< Largest eigenvalue.
  std::optional<double> f_star;
  std::optional<Vector> x_star;

  /// Builds from an explicit matrix; A must be symmetric to 1e-12 and PSD.
  static QuadraticProblem from_matrix(Matrix A, Vector b, double c);

  int dim() const { return static_cast<int>(A.rows()); }
  double value(const Vector& x) const { return 0.5 * x.dot(A * x) + b.dot(x) + c; }
  Vector grad(const Vector& x) const { return A * x + b; }
  double trace() const { return A.trace(); }
  /// Closed-form Gaussian smoothing: f_mu = f + (mu^2/2) tr A.
  double smoothed_value(const Vector& x, double mu) const { return value(x) + 0.5 * mu * mu * trace(); }
  /// Gaussian smoothing leaves the gradient of a quadratic unchanged.
  Vector smoothed_grad(const Vector& x) const { return grad(x); }
  /// f_mu* = f* + (mu^2/2) tr A.
  std::optional<double> smoothed_f_star(double mu) const;

  ProblemSpec spec() const;
};

/// Random-rotation quadratic Q diag(spectrum) Q' with b = 0 and c = 0, so
/// f* = 0 at the origin. With rotate = false, Q = I.
QuadraticProblem make_quadratic(std::span<const double> spectrum, RngStream& rng, bool rotate = true);

/// Least squares over a sparse-uniform feature distribution:
/// u_i = B_i U_i with B_i ~ Bernoulli(sparsity), U_i ~ Uniform(0, 1), and
/// label v = <x_bar, u> + noise_sd * N(0, 1). The population objective is
/// f(x) = E(<x, u> - v)^2 = (x - x_bar)' M (x - x_bar) + noise_sd^2 with
/// M = E[u u'].
struct LeastSquaresProblem {
  int n = 0;
  double sparsity = 1.0;
  Vector x_bar;
  double noise_sd = 0.0;
  Matrix second_moment;
  double L = 0.0;  ///< 2 lambda_max(M).

  double value(const Vector& x) const;
  Vector population_gradient(const Vector& x) const;
  /// One fresh (u, v) draw: ((<x,u> - v)^2, 2(<x,u> - v) u).
  std::pair<double, Vector> sample_loss(const Vector& x, RngStream& rng) const;
  ProblemSpec spec() const;
};

LeastSquaresProblem make_least_squares(int n, double sparsity, double noise_sd, RngStream& rng);

/// Nonconvex regularized sigmoid loss over a seeded dataset of m samples:
/// f(x) = (1/m) sum_i [1 - tanh(v_i <x, u_i>)] + lambda_reg ||x||^2.
/// Features are N(0,1) with probability `sparsity` and 0 otherwise; labels
/// are sign(<w, u>) for a hidden w, flipped with probability `label_flip`.
struct SigmoidSvmProblem {
  int n = 0;
  double lambda_reg = 0.0;
  double sparsity = 1.0;
  double label_flip = 0.0;
  Matrix features;  ///< m x n
  Vector labels;    ///< m entries in {-1, +1}
  double L = 0.0;

  int samples() const { return static_cast<int>(features.rows()); }
  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;
  /// Draws one sample index uniformly; unbiased for value and grad.
  std::pair<double, Vector> sample_loss(const Vector& x, RngStream& rng) const;
  ProblemSpec spec() const;
};

/// L is certified by sup|d^2/da^2 (1 - tanh a)| * lambda_max(U'U/m) + 2 lambda_reg,
/// where sup|2 tanh(a) sech^2(a)| = 4 / (3 sqrt 3).
SigmoidSvmProblem make_sigmoid_svm(int n, int samples, double sparsity, double lambda_reg, double label_flip,
                                   RngStream& rng);

/// Largest spectral norm of the SVM Hessian over the given points.
double svm_sampled_hessian_norm(const SigmoidSvmProblem& p, std::span<const Vector> points);

/// Minimum margins (right side minus left side) of the smoothness
/// inequalities over random pairs. Convex margins are present only for
/// convex-flagged problems.
struct SmoothnessReport {
  int pairs = 0;
  double lipschitz_margin = 0.0;  ///< L||y-x|| - ||grad f(y) - grad f(x)||
  double upper_margin = 0.0;      ///< (L/2)||y-x||^2 - |f(y) - f(x) - <grad f(x), y-x>|
  std::optional<double> convex_gap_margin;       ///< f(y)-f(x)-<g(x),y-x> - ||g(y)-g(x)||^2/(2L)
  std::optional<double> convex_monotone_margin;  ///< <g(y)-g(x), y-x> - ||g(y)-g(x)||^2/L
  double min_margin() const;
};

/// Pairs are x ~ radius N(0, I), y = x + radius N(0, I).
SmoothnessReport validate_smoothness(const ProblemSpec& problem, int pairs, RngStream& rng, double radius = 1.0);

}  // namespace randsg
