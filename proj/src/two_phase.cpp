#include "randsg/two_phase.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "randsg/errors.hpp"

namespace randsg {

const char* to_string(Selection s) {
  return s == Selection::gradient_norm ? "gradient_norm" : "function_value";
}

Selection selection_from_string(const std::string& s) {
  if (s == "gradient_norm") return Selection::gradient_norm;
  if (s == "function_value") return Selection::function_value;
  throw InputError("unknown selection rule '" + s + "'");
}

void TwoPhaseConfig::validate() const {
  if (S < 1 || N < 1 || T < 1) throw InputError("two-phase S, N and T must all be >= 1");
}

std::size_t argmin_lowest(const std::vector<double>& scores) {
  if (scores.empty()) throw InputError("argmin over an empty list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[best]) best = i;
  return best;
}

namespace {

constexpr std::uint64_t kRecycleStream = 0xffffffffffffffffULL;

RngStream post_stream(const RngStream& rng, const TwoPhaseConfig& config, std::size_t s) {
  return config.recycle_xi ? rng.derive(kRecycleStream) : rng.derive(2 * s + 1);
}

void finish(TwoPhaseResult& out, const RngStream& rng) {
  out.chosen = argmin_lowest(out.selection_scores);
  out.x_star_bar = out.candidates[out.chosen];
  out.seed = rng.seed();
  out.stream_id = rng.stream_id();
}

void check_common(const TwoPhaseConfig& config, int dim, const Vector& x1, const StepsizePlan& plan,
                  const TerminationDistribution& dist) {
  config.validate();
  if (x1.size() != dim) throw InputError("initial point dimension mismatch");
  if (plan.N() != config.N || dist.N() != config.N)
    throw InputError("two-phase N = " + std::to_string(config.N) + " differs from the plan/distribution length");
}

}  // namespace

TwoPhaseResult run_two_phase(const FirstOrderOracle& oracle, const Vector& x1, const TwoPhaseConfig& config,
                             const StepsizePlan& plan, const TerminationDistribution& dist,
                             const RngStream& rng) {
  if (config.order != OracleOrder::first)
    throw InputError("two-phase config requests a zeroth-order run but got a first-order oracle");
  check_common(config, oracle.dim(), x1, plan, dist);

  TwoPhaseResult out;
  for (int s = 0; s < config.S; ++s) {
    RngStream r = rng.derive(2 * static_cast<std::uint64_t>(s));
    RunResult run = rsg_run(oracle, x1, plan, dist, r);
    out.optimization_calls += run.oracle_calls;
    out.R.push_back(run.R);
    out.candidates.push_back(std::move(run.x_out));
  }
  for (int s = 0; s < config.S; ++s) {
    RngStream r = post_stream(rng, config, s);
    const Vector& x = out.candidates[s];
    if (config.selection == Selection::gradient_norm) {
      Vector g = Vector::Zero(oracle.dim());
      for (int k = 0; k < config.T; ++k) g += oracle.query(x, r);
      out.selection_scores.push_back((g / config.T).norm());
    } else {
      double f = 0.0;
      for (int k = 0; k < config.T; ++k) f += oracle.query_value(x, r);
      out.selection_scores.push_back(f / config.T);
    }
    out.post_calls += config.T;
  }
  finish(out, rng);
  return out;
}

TwoPhaseResult run_two_phase(const ZerothOrderOracle& oracle, const Vector& x1, const TwoPhaseConfig& config,
                             const StepsizePlan& plan, const TerminationDistribution& dist,
                             std::optional<double> mu, const RngStream& rng) {
  if (config.order != OracleOrder::zeroth)
    throw InputError("two-phase config requests a first-order run but got a zeroth-order oracle");
  if (!mu) throw InputError("zeroth-order two-phase run requires mu");
  check_common(config, oracle.dim(), x1, plan, dist);

  RsgfConfig rc;
  rc.mu = *mu;
  rc.plan = plan;
  rc.dist = dist;
  rc.n = oracle.dim();
  rc.common_random_numbers = config.common_random_numbers;

  TwoPhaseResult out;
  for (int s = 0; s < config.S; ++s) {
    RngStream r = rng.derive(2 * static_cast<std::uint64_t>(s));
    RunResult run = rsgf_run(oracle, x1, rc, r);
    out.optimization_calls += run.oracle_calls;
    out.R.push_back(run.R);
    out.candidates.push_back(std::move(run.x_out));
  }
  for (int s = 0; s < config.S; ++s) {
    RngStream r = post_stream(rng, config, s);
    const Vector& x = out.candidates[s];
    if (config.selection == Selection::gradient_norm) {
      Vector g = Vector::Zero(oracle.dim());
      for (int k = 0; k < config.T; ++k) g += sample_gmu(oracle, x, *mu, config.common_random_numbers, r);
      out.selection_scores.push_back((g / config.T).norm());
      out.post_calls += 2LL * config.T;
    } else {
      double f = 0.0;
      for (int k = 0; k < config.T; ++k) f += oracle.query(x, r);
      out.selection_scores.push_back(f / config.T);
      out.post_calls += config.T;
    }
  }
  finish(out, rng);
  return out;
}

namespace {

void check_eps(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
}
void check_Lambda(double Lambda) {
  if (!(Lambda > 0.0 && Lambda < 1.0)) throw InputError("Lambda must lie in (0, 1)");
}
void check_consts(double L, double D_f, double D_tilde, double sigma) {
  if (!(L > 0.0)) throw InputError("L must be positive");
  if (!(D_f > 0.0)) throw InputError("D_f must be positive");
  if (!(D_tilde > 0.0)) throw InputError("D_tilde must be positive");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
}

long long ceil_count(double v) {
  // Values within a few ulps of an integer are treated as that integer so
  // that e.g. 24*3*1/0.5 does not round up to 145.
  const double r = std::round(v);
  if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v))) return static_cast<long long>(r);
  if (v > 9.0e18) throw InputError("parameter calculator overflow");
  return static_cast<long long>(std::ceil(v));
}

}  // namespace

int params_S(double Lambda) {
  check_Lambda(Lambda);
  return std::max(1, static_cast<int>(ceil_count(std::log2(2.0 / Lambda))));
}

long long params_N_first_order(double epsilon, double L, double D_f, double D_tilde, double sigma) {
  check_eps(epsilon);
  check_consts(L, D_f, D_tilde, sigma);
  const double a = 32.0 * L * L * D_f * D_f / epsilon;
  const double b = 32.0 * L * (D_tilde + D_f * D_f / D_tilde) * sigma / epsilon;
  return ceil_count(std::max(a, b * b));
}

long long params_T_first_order(double epsilon, double Lambda, double sigma, int S) {
  check_eps(epsilon);
  check_Lambda(Lambda);
  if (S < 1) throw InputError("S must be >= 1");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
  return std::max(1LL, ceil_count(24.0 * (S + 1) * sigma * sigma / (Lambda * epsilon)));
}

long long params_T_light_tail(double epsilon, double Lambda, double sigma, int S) {
  check_eps(epsilon);
  check_Lambda(Lambda);
  if (S < 1) throw InputError("S must be >= 1");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
  const double inner = 1.0 + std::sqrt(3.0 * std::log(2.0 * (S + 1) / Lambda));
  return std::max(1LL, ceil_count(24.0 * sigma * sigma / epsilon * inner * inner));
}

long long params_N_zeroth_order(double epsilon, double L, double D_f, double D_tilde, double sigma, int n) {
  check_eps(epsilon);
  check_consts(L, D_f, D_tilde, sigma);
  if (n < 1) throw InputError("n must be >= 1");
  const double a = 12.0 * (n + 4) * (6.0 * L * D_f) * (6.0 * L * D_f) / epsilon;
  const double b = 72.0 * L * std::sqrt(n + 4.0) * (D_tilde + D_f * D_f / D_tilde) * sigma / epsilon;
  return ceil_count(std::max(a, b * b));
}

long long params_T_zeroth_order(double epsilon, double Lambda, double sigma, int S, int n) {
  check_eps(epsilon);
  check_Lambda(Lambda);
  if (S < 1 || n < 1) throw InputError("S and n must be >= 1");
  if (!(sigma >= 0.0)) throw InputError("sigma must be >= 0");
  return ceil_count(24.0 * (n + 4) * (S + 1) / Lambda * std::max(1.0, 6.0 * sigma * sigma / epsilon));
}

}  // namespace randsg
