#include "randsg/rsgf.hpp"

#include <cmath>
#include <string>

#include "randsg/errors.hpp"
#include "randsg/smoothing.hpp"

namespace randsg {

void RsgfConfig::validate(double L, std::optional<double> D_f) const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("RSGF mu must be positive");
  if (n < 1) throw InputError("RSGF dimension must be >= 1");
  if (plan.N() != dist.N()) throw InputError("RSGF plan and termination distribution lengths differ");
  const double cap = 1.0 / (2.0 * (n + 4) * L);
  for (int k = 0; k < plan.N(); ++k)
    if (!(plan.gammas[k] < cap))
      throw ValidityError("RSGF stepsize gamma_" + std::to_string(k + 1) +
                          " violates gamma_k < 1/(2(n+4)L) = " + std::to_string(cap));
  if (D_f && mu > choose_mu(*D_f, n, plan.N()))
    throw ValidityError("RSGF mu exceeds D_f / ((n+4) sqrt(2N))");
}

double choose_mu(double D_f, int n, int N) {
  if (!(D_f > 0.0)) throw InputError("choose_mu: D_f must be positive");
  if (n < 1 || N < 1) throw InputError("choose_mu: n and N must be >= 1");
  return D_f / ((n + 4) * std::sqrt(2.0 * N));
}

double heuristic_Df(double f_x1, double L_hat) {
  if (!(L_hat > 0.0)) throw InputError("heuristic_Df: L_hat must be positive");
  if (f_x1 < 0.0) throw InputError("heuristic_Df assumes a nonnegative objective");
  return std::sqrt(2.0 * f_x1 / L_hat);
}

RsgfConfig make_rsgf_config(double L, double D_tilde, double sigma, int N, int n, double mu) {
  RsgfConfig c;
  c.mu = mu;
  c.n = n;
  c.plan = constant_plan_zeroth_order(L, D_tilde, sigma, N, n);
  c.dist = termination_distribution_zeroth_order(c.plan, L, n);
  return c;
}

Vector sample_gmu(const ZerothOrderOracle& oracle, const Vector& x, double mu, bool common_random_numbers,
                  RngStream& rng) {
  const Vector u = rng.normal_vector(oracle.dim());
  const Vector shifted = x + mu * u;
  double f_shifted, f_base;
  if (common_random_numbers) {
    const NoiseDraw xi = oracle.draw(rng);
    f_shifted = oracle.query(shifted, xi);
    f_base = oracle.query(x, xi);
  } else {
    f_shifted = oracle.query(shifted, rng);
    f_base = oracle.query(x, rng);
  }
  return gmu_estimator(f_shifted, f_base, u, mu);
}

RunResult rsgf_run_fixed_R(const ZerothOrderOracle& oracle, const Vector& x1, const RsgfConfig& config,
                           int R, RngStream& rng, RunOptions options) {
  const auto start = std::chrono::steady_clock::now();
  if (x1.size() != oracle.dim() || config.n != oracle.dim()) throw InputError("RSGF dimension mismatch");
  config.validate(oracle.problem().lipschitz_L);
  const int N = config.plan.N();
  if (R < 1 || R > N) throw InputError("R must lie in [1, N]");

  RunResult out;
  out.R = R;
  out.N = N;
  out.seed = rng.seed();
  out.stream_id = rng.stream_id();

  const int last = options.full_horizon ? N : R;
  Vector x = x1;
  if (options.retain_trajectory) {
    out.trajectory.emplace();
    out.trajectory->reserve(last);
    out.trajectory->push_back(x);
  }
  for (int k = 1; k < last; ++k) {
    const Vector g = sample_gmu(oracle, x, config.mu, config.common_random_numbers, rng);
    x -= config.plan.gammas[k - 1] * g;
    out.oracle_calls += 2;
    check_finite(x, k + 1);
    if (options.retain_trajectory) out.trajectory->push_back(x);
    if (k + 1 == R) out.x_out = x;
  }
  if (R == 1) out.x_out = x1;
  out.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

RunResult rsgf_run(const ZerothOrderOracle& oracle, const Vector& x1, const RsgfConfig& config,
                   RngStream& rng, RunOptions options) {
  if (config.plan.N() != config.dist.N()) throw InputError("RSGF plan and distribution lengths differ");
  const int R = sample_R(config.dist, rng);
  return rsgf_run_fixed_R(oracle, x1, config, R, rng, options);
}

namespace {

Estimate replicate(const ProblemSpec& problem, const NoiseModel& noise, const RsgfConfig& config,
                   const Vector& x1, int runs, const RngStream& rng, unsigned threads,
                   const std::function<double(const Vector&)>& metric) {
  if (runs < 1) throw InputError("runs must be >= 1");
  const ZerothOrderOracle oracle(problem, noise, default_value_noise_sd(noise, problem.n, config.mu));
  std::vector<double> values(runs);
  parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t i) {
    RngStream r = rng.derive(i);
    values[i] = metric(rsgf_run(oracle, x1, config, r).x_out);
  });
  return mean_estimate(values);
}

}  // namespace

Estimate rsgf_expected_sq_gradnorm(const ProblemSpec& problem, const NoiseModel& noise,
                                   const RsgfConfig& config, const Vector& x1, int runs,
                                   const RngStream& rng, unsigned threads) {
  if (!problem.has_grad()) throw CapabilityError("rsgf_expected_sq_gradnorm requires the true gradient");
  return replicate(problem, noise, config, x1, runs, rng, threads,
                   [&](const Vector& x) { return problem.grad(x).squaredNorm(); });
}

Estimate rsgf_expected_fgap(const ProblemSpec& problem, const NoiseModel& noise, const RsgfConfig& config,
                            const Vector& x1, int runs, const RngStream& rng, unsigned threads) {
  if (!problem.f_star) throw CapabilityError("rsgf_expected_fgap requires f_star");
  const double f_star = *problem.f_star;
  return replicate(problem, noise, config, x1, runs, rng, threads,
                   [&](const Vector& x) { return problem.value(x) - f_star; });
}

}  // namespace randsg
