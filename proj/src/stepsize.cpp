#include "randsg/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "randsg/errors.hpp"

namespace randsg {

const char* to_string(StepsizeKind kind) {
  switch (kind) {
    case StepsizeKind::constant: return "constant";
    case StepsizeKind::increasing: return "increasing";
    case StepsizeKind::decreasing: return "decreasing";
    case StepsizeKind::custom: return "custom";
  }
  return "?";
}

StepsizeKind stepsize_kind_from_string(const std::string& s) {
  if (s == "constant") return StepsizeKind::constant;
  if (s == "increasing") return StepsizeKind::increasing;
  if (s == "decreasing") return StepsizeKind::decreasing;
  if (s == "custom") return StepsizeKind::custom;
  throw InputError("unknown stepsize policy '" + s + "'");
}

StepsizePlan StepsizePlan::custom(std::vector<double> gammas) {
  if (gammas.empty()) throw InputError("stepsize plan needs at least one stepsize");
  for (double g : gammas)
    if (!(g > 0.0) || !std::isfinite(g)) throw InputError("stepsizes must be positive and finite");
  StepsizePlan p;
  p.kind = StepsizeKind::custom;
  p.gammas = std::move(gammas);
  return p;
}

namespace {

void check_common(double L, double D_tilde, double sigma, int N) {
  if (!(L > 0.0)) throw InputError("L must be positive");
  if (!(D_tilde > 0.0)) throw InputError("D_tilde must be positive");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
  if (N < 1) throw InputError("N must be >= 1");
}

// min{a, D / (sigma * denom)} with sigma = 0 meaning the second term is +inf.
double capped(double a, double D_tilde, double sigma, double denom) {
  if (sigma == 0.0) return a;
  return std::min(a, D_tilde / (sigma * denom));
}

StepsizePlan make(StepsizeKind kind, double L, double D_tilde, double sigma, std::vector<double> g) {
  StepsizePlan p;
  p.kind = kind;
  p.gammas = std::move(g);
  p.L = L;
  p.D_tilde = D_tilde;
  p.sigma = sigma;
  return p;
}

}  // namespace

StepsizePlan constant_plan_first_order(double L, double D_tilde, double sigma, int N) {
  check_common(L, D_tilde, sigma, N);
  const double g = capped(1.0 / L, D_tilde, sigma, std::sqrt(static_cast<double>(N)));
  return make(StepsizeKind::constant, L, D_tilde, sigma, std::vector<double>(N, g));
}

StepsizePlan increasing_plan(double L, double D_tilde, double sigma, int N) {
  check_common(L, D_tilde, sigma, N);
  std::vector<double> g(N);
  for (int k = 1; k <= N; ++k)
    g[k - 1] = capped(1.0 / L, D_tilde, sigma, static_cast<double>(N) / std::sqrt(static_cast<double>(k)));
  return make(StepsizeKind::increasing, L, D_tilde, sigma, std::move(g));
}

StepsizePlan decreasing_plan(double L, double D_tilde, double sigma, int N) {
  check_common(L, D_tilde, sigma, N);
  std::vector<double> g(N);
  for (int k = 1; k <= N; ++k)
    g[k - 1] = capped(1.0 / L, D_tilde, sigma, std::pow(static_cast<double>(k) * N, 0.25));
  return make(StepsizeKind::decreasing, L, D_tilde, sigma, std::move(g));
}

StepsizePlan constant_plan_zeroth_order(double L, double D_tilde, double sigma, int N, int n) {
  check_common(L, D_tilde, sigma, N);
  if (n < 1) throw InputError("dimension n must be >= 1");
  const double s = std::sqrt(n + 4.0);
  const double g = capped(1.0 / (4.0 * L * s), D_tilde, sigma, std::sqrt(static_cast<double>(N))) / s;
  return make(StepsizeKind::constant, L, D_tilde, sigma, std::vector<double>(N, g));
}

TerminationDistribution TerminationDistribution::from_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw InputError("termination distribution needs N >= 1");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidityError("termination weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ValidityError("termination weights sum to zero");

  TerminationDistribution d;
  const std::size_t N = weights.size();
  d.probs.resize(N);
  d.cdf.resize(N);
  // Identical weights normalize to exactly 1/N.
  const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; });
  double acc = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    d.probs[k] = uniform ? 1.0 / static_cast<double>(N) : weights[k] / total;
    acc += d.probs[k];
    d.cdf[k] = acc;
  }
  d.cdf.back() = 1.0;
  return d;
}

TerminationDistribution termination_distribution_first_order(const StepsizePlan& plan, double L) {
  if (!(L > 0.0)) throw InputError("L must be positive");
  if (plan.gammas.empty()) throw InputError("empty stepsize plan");
  std::vector<double> w(plan.gammas.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double g = plan.gammas[k];
    if (!(g < 2.0 / L))
      throw ValidityError("stepsize gamma_" + std::to_string(k + 1) + " = " + std::to_string(g) +
                          " violates the first-order termination-weight precondition gamma_k < 2/L = " +
                          std::to_string(2.0 / L));
    w[k] = 2.0 * g - L * g * g;
  }
  return TerminationDistribution::from_weights(w);
}

TerminationDistribution termination_distribution_zeroth_order(const StepsizePlan& plan, double L, int n) {
  if (!(L > 0.0)) throw InputError("L must be positive");
  if (n < 1) throw InputError("dimension n must be >= 1");
  if (plan.gammas.empty()) throw InputError("empty stepsize plan");
  const double cap = 1.0 / (2.0 * (n + 4) * L);
  std::vector<double> w(plan.gammas.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double g = plan.gammas[k];
    if (!(g < cap))
      throw ValidityError("stepsize gamma_" + std::to_string(k + 1) + " = " + std::to_string(g) +
                          " violates the zeroth-order termination-weight precondition gamma_k < 1/(2(n+4)L) = " +
                          std::to_string(cap));
    w[k] = g - 2.0 * L * (n + 4) * g * g;
  }
  return TerminationDistribution::from_weights(w);
}

int sample_R_from_uniform(const TerminationDistribution& dist, double u) {
  // R = k for cdf[k-1] < u <= cdf[k]: a draw on a boundary goes to the lower index.
  const auto it = std::lower_bound(dist.cdf.begin(), dist.cdf.end(), u);
  auto idx = static_cast<int>(it - dist.cdf.begin());
  if (idx >= dist.N()) idx = dist.N() - 1;
  // Skip zero-mass entries that share the boundary value.
  while (idx + 1 < dist.N() && dist.probs[idx] == 0.0) ++idx;
  return idx + 1;
}

int sample_R(const TerminationDistribution& dist, RngStream& rng) {
  if (dist.probs.empty()) throw InputError("empty termination distribution");
  return sample_R_from_uniform(dist, rng.uniform());
}

}  // namespace randsg
