#pragma once

#include <span>
#include <vector>

#include "randsg/oracle.hpp"
#include "randsg/rng.hpp"
#include "randsg/types.hpp"

namespace randsg {

struct SmoothingConfig {
  double mu = 0.0;
  int n = 0;
  void validate() const;
};

/// f_mu(x) = E_u[f(x + mu u)] for standard Gaussian u, estimated by Monte Carlo.
struct SmoothedFunctionHandle {
  ProblemSpec base;
  SmoothingConfig config;
  int mc_samples = 10000;
  void validate() const;
};

/// Monte Carlo mean with its standard error.
struct McScalar {
  double mean = 0.0;
  double std_error = 0.0;
};

struct McVector {
  Vector mean;
  Vector std_error;  ///< Per coordinate.
  /// Norm of the per-coordinate standard errors.
  double norm_error() const { return std_error.norm(); }
};

/// Two-point estimator ((F_shifted - F_base) / mu) * u.
Vector gmu_estimator(double F_shifted, double F_base, const Vector& u, double mu);

McScalar smoothed_value(const SmoothedFunctionHandle& handle, const Vector& x, RngStream& rng);
McVector smoothed_gradient(const SmoothedFunctionHandle& handle, const Vector& x, RngStream& rng);

struct SmoothingPointCheck {
  double value_gap = 0.0;     ///< |f_mu(x) - f(x)| (estimated)
  double value_bound = 0.0;   ///< mu^2 L n / 2
  double value_mc_error = 0.0;
  double grad_gap = 0.0;      ///< ||grad f_mu(x) - grad f(x)|| (estimated)
  double grad_bound = 0.0;    ///< (mu/2) L (n+3)^{3/2}
  double grad_mc_error = 0.0;

  double value_margin() const { return value_bound + value_mc_error - value_gap; }
  double grad_margin() const { return grad_bound + grad_mc_error - grad_gap; }
};

struct SmoothingBoundReport {
  std::vector<SmoothingPointCheck> points;
  double min_margin() const;
  bool all_hold() const { return min_margin() >= 0.0; }
};

/// Checks |f_mu - f| <= mu^2 L n / 2 and ||grad f_mu - grad f|| <= (mu/2) L (n+3)^{3/2}
/// at each point, with 4 Monte Carlo standard errors of slack.
SmoothingBoundReport check_smoothing_bounds(const SmoothedFunctionHandle& handle,
                                            std::span<const Vector> test_points, RngStream& rng);

struct SecondMomentCheck {
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double rhs = 0.0;
  bool holds() const { return lhs <= rhs + 4.0 * lhs_std_error; }
};

/// Empirical (1/mu^2) E[(F(x+mu u, xi) - F(x, xi))^2 ||u||^2] against
/// (mu^2/2) L^2 (n+6)^3 + 2(n+4) (||grad f(x)||^2 + sigma^2).
/// With sigma > 0 each sample shares one bounded-variance draw xi between
/// the two evaluations; sigma = 0 is the deterministic inequality.
SecondMomentCheck second_moment_bound_check(const SmoothedFunctionHandle& handle, const Vector& x,
                                            double sigma, int samples, RngStream& rng);

}  // namespace randsg
