#include "randsg/oracle.hpp"

#include <cmath>
#include <string>

#include "randsg/errors.hpp"

namespace randsg {

void ProblemSpec::validate() const {
  if (n < 1) throw InputError("problem dimension must be >= 1");
  if (!(lipschitz_L >= 0.0) || !std::isfinite(lipschitz_L))
    throw InputError("problem '" + name + "': lipschitz_L must be nonnegative and finite");
  if (!value) throw InputError("problem '" + name + "': value function missing");
  if (x_star && x_star->size() != n) throw InputError("problem '" + name + "': x_star dimension mismatch");
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::bounded_variance: return "bounded_variance";
    case NoiseKind::light_tail: return "light_tail";
  }
  return "?";
}

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "none") return NoiseKind::none;
  if (s == "bounded_variance") return NoiseKind::bounded_variance;
  if (s == "light_tail") return NoiseKind::light_tail;
  throw InputError("unknown noise kind '" + s + "'");
}

void NoiseModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be finite and >= 0");
  if (kind == NoiseKind::none && sigma != 0.0) throw InputError("noise kind none requires sigma = 0");
}

NoiseDraw draw_noise(const NoiseModel& noise, int n, double value_noise_sd, RngStream& rng) {
  NoiseDraw xi{Vector::Zero(n), 0.0};
  switch (noise.kind) {
    case NoiseKind::none:
      return xi;
    case NoiseKind::bounded_variance:
      xi.shift = rng.normal_vector(n) * (noise.sigma / std::sqrt(static_cast<double>(n)));
      break;
    case NoiseKind::light_tail: {
      Vector u = rng.normal_vector(n);
      double norm = u.norm();
      while (norm == 0.0) {
        u = rng.normal_vector(n);
        norm = u.norm();
      }
      xi.shift = u * (noise.sigma / norm);
      break;
    }
  }
  if (value_noise_sd > 0.0) xi.value_shift = value_noise_sd * rng.normal();
  return xi;
}

double default_value_noise_sd(const NoiseModel& noise, int n, double mu) {
  return noise.effective_sigma() * mu / std::sqrt(2.0 * (n + 4));
}

FirstOrderOracle::FirstOrderOracle(ProblemSpec problem, NoiseModel noise)
    : problem_(std::move(problem)), noise_(noise) {
  problem_.validate();
  noise_.validate();
}

void FirstOrderOracle::check_point(const Vector& x) const {
  if (x.size() != problem_.n)
    throw InputError("query point has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(problem_.n));
  if (!problem_.has_grad())
    throw CapabilityError("problem '" + problem_.name + "' provides no gradient");
}

NoiseDraw FirstOrderOracle::draw(RngStream& rng) const {
  return draw_noise(noise_, problem_.n, 0.0, rng);
}

Vector FirstOrderOracle::query(const Vector& x, RngStream& rng) const {
  check_point(x);
  return query(x, draw(rng));
}

Vector FirstOrderOracle::query(const Vector& x, const NoiseDraw& xi) const {
  check_point(x);
  calls_.fetch_add(1, std::memory_order_relaxed);
  Vector g = problem_.grad(x);
  if (noise_.kind != NoiseKind::none) g += xi.shift;
  return g;
}

double FirstOrderOracle::query_value(const Vector& x, RngStream& rng) const {
  if (x.size() != problem_.n) throw InputError("query point dimension mismatch");
  const NoiseDraw xi = draw(rng);
  calls_.fetch_add(1, std::memory_order_relaxed);
  double v = problem_.value(x);
  if (noise_.kind != NoiseKind::none) v += xi.shift.dot(x) + xi.value_shift;
  return v;
}

ZerothOrderOracle::ZerothOrderOracle(ProblemSpec problem, NoiseModel noise, double value_noise_sd)
    : problem_(std::move(problem)), noise_(noise), value_noise_sd_(value_noise_sd) {
  problem_.validate();
  noise_.validate();
  if (!(value_noise_sd_ >= 0.0)) throw InputError("value noise sd must be >= 0");
  if (noise_.kind == NoiseKind::none) value_noise_sd_ = 0.0;
}

void ZerothOrderOracle::check_point(const Vector& x) const {
  if (x.size() != problem_.n)
    throw InputError("query point has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(problem_.n));
}

NoiseDraw ZerothOrderOracle::draw(RngStream& rng) const {
  return draw_noise(noise_, problem_.n, value_noise_sd_, rng);
}

double ZerothOrderOracle::query(const Vector& x, RngStream& rng) const {
  check_point(x);
  return query(x, draw(rng));
}

double ZerothOrderOracle::query(const Vector& x, const NoiseDraw& xi) const {
  check_point(x);
  calls_.fetch_add(1, std::memory_order_relaxed);
  double v = problem_.value(x);
  if (noise_.kind != NoiseKind::none) v += xi.shift.dot(x) + xi.value_shift;
  return v;
}

ParameterEstimate estimate_parameters(const FirstOrderOracle& oracle,
                                      std::span<const Vector> trial_points,
                                      int draws_per_point, RngStream& rng) {
  if (trial_points.size() < 2) throw InputError("estimate_parameters needs at least 2 trial points");
  if (draws_per_point < 2) throw InputError("estimate_parameters needs draws_per_point >= 2");

  const int n = oracle.dim();
  std::vector<Vector> means;
  means.reserve(trial_points.size());
  double sq_dev = 0.0;
  for (const Vector& x : trial_points) {
    std::vector<Vector> draws;
    draws.reserve(draws_per_point);
    Vector mean = Vector::Zero(n);
    for (int k = 0; k < draws_per_point; ++k) {
      draws.push_back(oracle.query(x, rng));
      mean += draws.back();
    }
    mean /= draws_per_point;
    for (const Vector& g : draws) sq_dev += (g - mean).squaredNorm();
    means.push_back(std::move(mean));
  }

  ParameterEstimate est;
  for (std::size_t i = 0; i < trial_points.size(); ++i) {
    for (std::size_t j = i + 1; j < trial_points.size(); ++j) {
      const double dx = (trial_points[i] - trial_points[j]).norm();
      if (dx == 0.0) throw DegenerateInputError("coincident trial points in estimate_parameters");
      est.L_hat = std::max(est.L_hat, (means[i] - means[j]).norm() / dx);
    }
  }
  const double dof = static_cast<double>(trial_points.size()) * (draws_per_point - 1);
  est.sigma_hat = std::sqrt(sq_dev / dof);
  return est;
}

}  // namespace randsg
