#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "randsg/rng.hpp"
#include "randsg/types.hpp"

namespace randsg {

/// An L-smooth objective f on R^n with whatever ground truth is known.
struct ProblemSpec {
  std::string name;
  int n = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;  ///< May be empty.
  double lipschitz_L = 0.0;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  bool is_convex = false;

  bool has_grad() const { return static_cast<bool>(grad); }
  /// Throws InputError unless n >= 1, L > 0 and `value` is set.
  void validate() const;
};

enum class NoiseKind { none, bounded_variance, light_tail };

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& s);

/// Gradient-noise model.
///
/// bounded_variance: isotropic Gaussian with per-coordinate variance
///   sigma^2/n, so E||G - grad f||^2 = sigma^2 exactly.
/// light_tail: uniform on the sphere of radius sigma, so ||G - grad f|| = sigma
///   surely and E[exp(||G - grad f||^2 / sigma^2)] = e.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel bounded_variance(double sigma) { return {NoiseKind::bounded_variance, sigma}; }
  static NoiseModel light_tail(double sigma) { return {NoiseKind::light_tail, sigma}; }

  void validate() const;
  /// Effective sigma: 0 for kind none.
  double effective_sigma() const { return kind == NoiseKind::none ? 0.0 : sigma; }
};

/// One realization of the random input xi.
///
/// The stochastic objective is F(x, xi) = f(x) + <shift, x> + value_shift and
/// its gradient is G(x, xi) = grad f(x) + shift. Two evaluations sharing a draw
/// therefore see the same noise on both the function and its gradient.
struct NoiseDraw {
  Vector shift;
  double value_shift = 0.0;
};

NoiseDraw draw_noise(const NoiseModel& noise, int n, double value_noise_sd, RngStream& rng);

/// Value-noise standard deviation sigma * mu / sqrt(2(n+4)) used by default
/// for zeroth-order oracles; keeps the two-point estimator within the sigma^2
/// budget even when its two evaluations draw independent noise.
double default_value_noise_sd(const NoiseModel& noise, int n, double mu);

/// Stochastic first-order oracle. Configuration is immutable; the call counter
/// is atomic so one instance may serve concurrent workers.
class FirstOrderOracle {
 public:
  FirstOrderOracle(ProblemSpec problem, NoiseModel noise);

  FirstOrderOracle(const FirstOrderOracle&) = delete;
  FirstOrderOracle& operator=(const FirstOrderOracle&) = delete;

  /// G(x, xi) with a fresh xi drawn from `rng`.
  Vector query(const Vector& x, RngStream& rng) const;
  /// G(x, xi) for a caller-supplied xi.
  Vector query(const Vector& x, const NoiseDraw& xi) const;
  /// F(x, xi) with a fresh xi; one call.
  double query_value(const Vector& x, RngStream& rng) const;

  NoiseDraw draw(RngStream& rng) const;

  long long call_count() const { return calls_.load(std::memory_order_relaxed); }
  void reset_accounting() { calls_.store(0, std::memory_order_relaxed); }

  const ProblemSpec& problem() const { return problem_; }
  const NoiseModel& noise() const { return noise_; }
  int dim() const { return problem_.n; }

 private:
  void check_point(const Vector& x) const;

  ProblemSpec problem_;
  NoiseModel noise_;
  mutable std::atomic<long long> calls_{0};
};

/// Stochastic zeroth-order oracle returning F(x, xi).
class ZerothOrderOracle {
 public:
  ZerothOrderOracle(ProblemSpec problem, NoiseModel noise, double value_noise_sd = 0.0);

  ZerothOrderOracle(const ZerothOrderOracle&) = delete;
  ZerothOrderOracle& operator=(const ZerothOrderOracle&) = delete;

  double query(const Vector& x, RngStream& rng) const;
  double query(const Vector& x, const NoiseDraw& xi) const;

  NoiseDraw draw(RngStream& rng) const;

  long long call_count() const { return calls_.load(std::memory_order_relaxed); }
  void reset_accounting() { calls_.store(0, std::memory_order_relaxed); }

  const ProblemSpec& problem() const { return problem_; }
  const NoiseModel& noise() const { return noise_; }
  double value_noise_sd() const { return value_noise_sd_; }
  int dim() const { return problem_.n; }

 private:
  void check_point(const Vector& x) const;

  ProblemSpec problem_;
  NoiseModel noise_;
  double value_noise_sd_;
  mutable std::atomic<long long> calls_{0};
};

struct ParameterEstimate {
  double L_hat = 0.0;
  double sigma_hat = 0.0;
};

/// Estimates L as the largest secant slope between per-point averaged
/// gradients and sigma as the pooled standard deviation of the draws around
/// their per-point means.
ParameterEstimate estimate_parameters(const FirstOrderOracle& oracle,
                                      std::span<const Vector> trial_points,
                                      int draws_per_point, RngStream& rng);

}  // namespace randsg
