#include "randsg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "randsg/errors.hpp"

namespace randsg {

void SmoothingConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("smoothing parameter mu must be positive");
  if (n < 1) throw InputError("smoothing dimension must be >= 1");
}

void SmoothedFunctionHandle::validate() const {
  base.validate();
  config.validate();
  if (config.n != base.n) throw InputError("smoothing config dimension differs from problem dimension");
  if (mc_samples < 1) throw InputError("mc_samples must be >= 1");
}

Vector gmu_estimator(double F_shifted, double F_base, const Vector& u, double mu) {
  if (!(mu > 0.0)) throw InputError("gmu_estimator: mu must be positive");
  return ((F_shifted - F_base) / mu) * u;
}

namespace {

void check_dim(const SmoothedFunctionHandle& h, const Vector& x) {
  if (x.size() != h.base.n) throw InputError("point dimension mismatch");
}

// Welford accumulators.
struct ScalarAcc {
  long k = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double v) {
    ++k;
    const double d = v - mean;
    mean += d / k;
    m2 += d * (v - mean);
  }
  McScalar result() const {
    const double var = k > 1 ? m2 / (k - 1) : 0.0;
    return {mean, std::sqrt(var / k)};
  }
};

struct VectorAcc {
  long k = 0;
  Vector mean, m2;
  explicit VectorAcc(int n) : mean(Vector::Zero(n)), m2(Vector::Zero(n)) {}
  void add(const Vector& v) {
    ++k;
    const Vector d = v - mean;
    mean += d / static_cast<double>(k);
    m2 += d.cwiseProduct(v - mean);
  }
  McVector result() const {
    Vector var = k > 1 ? Vector(m2 / static_cast<double>(k - 1)) : Vector(Vector::Zero(mean.size()));
    return {mean, (var / static_cast<double>(k)).cwiseSqrt()};
  }
};

}  // namespace

McScalar smoothed_value(const SmoothedFunctionHandle& handle, const Vector& x, RngStream& rng) {
  handle.validate();
  check_dim(handle, x);
  const double mu = handle.config.mu;
  ScalarAcc acc;
  for (int i = 0; i < handle.mc_samples; ++i) {
    const Vector u = rng.normal_vector(handle.base.n);
    acc.add(handle.base.value(x + mu * u));
  }
  return acc.result();
}

McVector smoothed_gradient(const SmoothedFunctionHandle& handle, const Vector& x, RngStream& rng) {
  handle.validate();
  check_dim(handle, x);
  const double mu = handle.config.mu;
  const double fx = handle.base.value(x);
  VectorAcc acc(handle.base.n);
  for (int i = 0; i < handle.mc_samples; ++i) {
    const Vector u = rng.normal_vector(handle.base.n);
    acc.add(gmu_estimator(handle.base.value(x + mu * u), fx, u, mu));
  }
  return acc.result();
}

double SmoothingBoundReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min({m, p.value_margin(), p.grad_margin()});
  return m;
}

SmoothingBoundReport check_smoothing_bounds(const SmoothedFunctionHandle& handle,
                                            std::span<const Vector> test_points, RngStream& rng) {
  handle.validate();
  if (!handle.base.has_grad())
    throw CapabilityError("check_smoothing_bounds requires the problem gradient");
  const double mu = handle.config.mu;
  const double L = handle.base.lipschitz_L;
  const double n = handle.base.n;

  SmoothingBoundReport report;
  for (const Vector& x : test_points) {
    check_dim(handle, x);
    const McScalar fv = smoothed_value(handle, x, rng);
    const McVector gv = smoothed_gradient(handle, x, rng);
    SmoothingPointCheck c;
    c.value_gap = std::fabs(fv.mean - handle.base.value(x));
    c.value_bound = 0.5 * mu * mu * L * n;
    c.value_mc_error = 4.0 * fv.std_error;
    c.grad_gap = (gv.mean - handle.base.grad(x)).norm();
    c.grad_bound = 0.5 * mu * L * std::pow(n + 3.0, 1.5);
    c.grad_mc_error = 4.0 * gv.norm_error();
    report.points.push_back(c);
  }
  return report;
}

SecondMomentCheck second_moment_bound_check(const SmoothedFunctionHandle& handle, const Vector& x,
                                            double sigma, int samples, RngStream& rng) {
  handle.validate();
  check_dim(handle, x);
  if (!handle.base.has_grad()) throw CapabilityError("second_moment_bound_check requires the gradient");
  if (samples < 2) throw InputError("second_moment_bound_check needs at least 2 samples");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");

  const int n = handle.base.n;
  const double mu = handle.config.mu;
  const double L = handle.base.lipschitz_L;
  const NoiseModel noise = sigma > 0.0 ? NoiseModel::bounded_variance(sigma) : NoiseModel::none();
  const double fx = handle.base.value(x);

  ScalarAcc acc;
  for (int i = 0; i < samples; ++i) {
    const Vector u = rng.normal_vector(n);
    const NoiseDraw xi = draw_noise(noise, n, 0.0, rng);
    const Vector y = x + mu * u;
    // The xi-dependent part of F is linear: <shift, y> - <shift, x> = mu <shift, u>.
    const double diff = handle.base.value(y) - fx + mu * xi.shift.dot(u);
    acc.add(diff * diff * u.squaredNorm() / (mu * mu));
  }
  const McScalar r = acc.result();
  const double g2 = handle.base.grad(x).squaredNorm();
  SecondMomentCheck out;
  out.lhs = r.mean;
  out.lhs_std_error = r.std_error;
  out.rhs = 0.5 * mu * mu * L * L * std::pow(n + 6.0, 3) + 2.0 * (n + 4) * (g2 + sigma * sigma);
  return out;
}

}  // namespace randsg
