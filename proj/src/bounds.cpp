#include "randsg/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "randsg/errors.hpp"
#include "randsg/types.hpp"

namespace randsg {

namespace {

void positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
}
void nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be >= 0");
}

DeviationBound clamp(std::string name, double lambda, double threshold, double prob) {
  DeviationBound d{std::move(name), lambda, threshold, prob, false};
  if (d.prob_bound > 1.0) {
    d.prob_bound = 1.0;
    d.vacuous = true;
  }
  return d;
}

}  // namespace

double compute_Df(double f_x1, double f_star, double L) {
  positive(L, "L");
  if (f_x1 < f_star) throw InputError("compute_Df: f(x1) is below f*");
  return std::sqrt(2.0 * (f_x1 - f_star) / L);
}

double compute_BN(double L, double D_f, double D_tilde, double sigma, long long N) {
  positive(L, "L");
  nonnegative(D_f, "D_f");
  positive(D_tilde, "D_tilde");
  nonnegative(sigma, "sigma");
  if (N < 1) throw InputError("N must be >= 1");
  const double n = static_cast<double>(N);
  return L * D_f * D_f / n + (D_tilde + D_f * D_f / D_tilde) * sigma / std::sqrt(n);
}

double compute_BN_bar(double L, double D_f, double D_tilde, double sigma, long long N, int n) {
  positive(L, "L");
  nonnegative(D_f, "D_f");
  positive(D_tilde, "D_tilde");
  nonnegative(sigma, "sigma");
  if (N < 1 || n < 1) throw InputError("N and n must be >= 1");
  const double NN = static_cast<double>(N);
  return 12.0 * (n + 4) * L * D_f * D_f / NN +
         4.0 * sigma * std::sqrt(n + 4.0) * (D_tilde + D_f * D_f / D_tilde) / std::sqrt(NN);
}

double compute_DN(double L, double B_bar_N, double sigma, double D_f, long long N, int n) {
  positive(L, "L");
  nonnegative(B_bar_N, "B_bar_N");
  nonnegative(sigma, "sigma");
  nonnegative(D_f, "D_f");
  if (N < 1 || n < 1) throw InputError("N and n must be >= 1");
  return 2.0 * (n + 4) * (L * B_bar_N + sigma * sigma + L * L * D_f * D_f / (2.0 * static_cast<double>(N)));
}

double convex_bound_first_order(double L, double D_X, double D_tilde, double sigma, long long N) {
  return compute_BN(L, D_X, D_tilde, sigma, N);
}

double convex_bound_zeroth_order(double L, double D_X, double D_tilde, double sigma, long long N, int n) {
  positive(L, "L");
  nonnegative(D_X, "D_X");
  positive(D_tilde, "D_tilde");
  nonnegative(sigma, "sigma");
  if (N < 1 || n < 1) throw InputError("N and n must be >= 1");
  const double NN = static_cast<double>(N);
  return 5.0 * L * (n + 4) * D_X * D_X / NN +
         2.0 * sigma * std::sqrt(n + 4.0) * (D_tilde + D_X * D_X / D_tilde) / std::sqrt(NN);
}

double rsg_general_bound(const StepsizePlan& plan, double L, double D_f, double sigma) {
  positive(L, "L");
  double num = D_f * D_f, den = 0.0;
  for (double g : plan.gammas) {
    if (!(g < 2.0 / L)) throw ValidityError("stepsize violates gamma_k < 2/L");
    num += sigma * sigma * g * g;
    den += 2.0 * g - L * g * g;
  }
  if (!(den > 0.0)) throw InputError("empty stepsize plan");
  return num / den;
}

double rsg_general_convex_bound(const StepsizePlan& plan, double L, double D_X, double sigma) {
  return rsg_general_bound(plan, L, D_X, sigma);
}

double rsgf_general_bound(const StepsizePlan& plan, double L, double D_f, double sigma, double mu, int n) {
  positive(L, "L");
  positive(mu, "mu");
  if (n < 1) throw InputError("n must be >= 1");
  const double m = n + 4.0;
  double den = 0.0, inner = 0.0, sq = 0.0;
  for (double g : plan.gammas) {
    if (!(g < 1.0 / (2.0 * m * L))) throw ValidityError("stepsize violates gamma_k < 1/(2(n+4)L)");
    den += g - 2.0 * L * m * g * g;
    inner += g / 4.0 + L * g * g;
    sq += g * g;
  }
  if (!(den > 0.0)) throw InputError("empty stepsize plan");
  const double num = D_f * D_f + 2.0 * mu * mu * m * (1.0 + L * m * m * inner) + 2.0 * m * sigma * sigma * sq;
  return num / den;
}

DeviationBound deviation_threshold_2rsg(double L, double B_N, double sigma, long long T, int S, double lambda) {
  positive(lambda, "lambda");
  if (T < 1 || S < 1) throw InputError("T and S must be >= 1");
  const double thr = 2.0 * (4.0 * L * B_N + 3.0 * lambda * sigma * sigma / static_cast<double>(T));
  return clamp("2rsg", lambda, thr, (S + 1) / lambda + std::ldexp(1.0, -S));
}

DeviationBound deviation_threshold_2rsg_light_tail(double L, double B_N, double sigma, long long T, int S,
                                                   double lambda) {
  positive(lambda, "lambda");
  if (T < 1 || S < 1) throw InputError("T and S must be >= 1");
  const double thr =
      4.0 * (2.0 * L * B_N + 3.0 * (1.0 + lambda) * (1.0 + lambda) * sigma * sigma / static_cast<double>(T));
  return clamp("2rsg_light_tail", lambda, thr, (S + 1) * std::exp(-lambda * lambda / 3.0) + std::ldexp(1.0, -S));
}

DeviationBound deviation_threshold_2rsgf(double L, double B_bar_N, double sigma, double D_f, long long N,
                                         long long T, int S, int n, double lambda) {
  positive(lambda, "lambda");
  if (T < 1 || S < 1 || N < 1 || n < 1) throw InputError("N, T, S and n must be >= 1");
  const double m = n + 4.0;
  const double NN = static_cast<double>(N);
  const double thr = 8.0 * L * B_bar_N + 3.0 * m * L * L * D_f * D_f / (2.0 * NN) +
                     (24.0 * m * lambda / static_cast<double>(T)) *
                         (L * B_bar_N + m * L * L * D_f * D_f / NN + sigma * sigma);
  return clamp("2rsgf", lambda, thr, (S + 1) / lambda + std::ldexp(1.0, -S));
}

DeviationBound markov_threshold(double L, double B_N, double lambda) {
  positive(lambda, "lambda");
  return clamp("markov", lambda, lambda * L * B_N, 1.0 / lambda);
}

long long budget_totals(long long S, long long N, long long T, BudgetOrder order) {
  if (S < 1 || N < 1 || T < 1) throw InputError("budget_totals needs positive S, N, T");
  const long long per = S * (N + T);
  return order == BudgetOrder::first ? per : 2 * per;
}

double light_tail_gaussian_variance(double sigma, int dim) {
  if (dim < 1) throw InputError("dim must be >= 1");
  return 0.5 * sigma * sigma * (1.0 - std::exp(-2.0 / dim));
}

MartingaleCheck martingale_deviation_check(std::span<const double> sigma_seq, int samples, double lambda,
                                           RngStream rng, int dim) {
  if (sigma_seq.empty()) throw InputError("martingale_deviation_check: empty sigma sequence");
  positive(lambda, "lambda");
  if (samples < 1000) throw InputError("martingale_deviation_check needs samples >= 1000");
  if (dim < 1) throw InputError("dim must be >= 1");

  double total_var = 0.0;
  for (double s : sigma_seq) {
    nonnegative(s, "sigma_i");
    total_var += s * s;
  }
  const double thr_a = lambda * total_var;
  const double thr_b = std::sqrt(2.0) * (1.0 + lambda) * std::sqrt(total_var);

  long hits_a = 0, hits_b = 0;
  Vector sum_a(dim), sum_b(dim);
  for (int t = 0; t < samples; ++t) {
    sum_a.setZero();
    sum_b.setZero();
    for (double s : sigma_seq) {
      const Vector z = rng.normal_vector(dim);
      sum_a += z * (s / std::sqrt(static_cast<double>(dim)));
      sum_b += z * std::sqrt(light_tail_gaussian_variance(s, dim));
    }
    if (sum_a.squaredNorm() >= thr_a) ++hits_a;
    if (sum_b.norm() >= thr_b) ++hits_b;
  }

  MartingaleCheck out;
  out.part_a.empirical = static_cast<double>(hits_a) / samples;
  out.part_a.bound = std::min(1.0, 1.0 / lambda);
  out.part_a.slack = 4.0 * std::sqrt(out.part_a.bound * (1.0 - out.part_a.bound) / samples);
  out.part_b.empirical = static_cast<double>(hits_b) / samples;
  out.part_b.bound = std::min(1.0, std::exp(-lambda * lambda / 3.0));
  out.part_b.slack = 4.0 * std::sqrt(out.part_b.bound * (1.0 - out.part_b.bound) / samples);
  return out;
}

}  // namespace randsg
