#pragma once

#include <span>
#include <string>
#include <vector>

#include "randsg/rng.hpp"
#include "randsg/stepsize.hpp"

namespace randsg {

// Closed-form evaluators for the convergence and large-deviation bounds.
// Every function is pure. Expectation bounds on the gradient are stated for
// (1/L) E||grad f(x_R)||^2; verifiers compare E||grad f(x_R)||^2 with L times
// the returned quantity.

/// D_f = sqrt(2 (f(x1) - f*) / L).
double compute_Df(double f_x1, double f_star, double L);
/// B_N = L D_f^2 / N + (D + D_f^2 / D) sigma / sqrt(N).
double compute_BN(double L, double D_f, double D_tilde, double sigma, long long N);
/// Bbar_N = 12 (n+4) L D_f^2 / N + 4 sigma sqrt(n+4) (D + D_f^2 / D) / sqrt(N).
double compute_BN_bar(double L, double D_f, double D_tilde, double sigma, long long N, int n);
/// D_N = 2 (n+4) [L Bbar_N + sigma^2 + L^2 D_f^2 / (2N)].
double compute_DN(double L, double B_bar_N, double sigma, double D_f, long long N, int n);

/// Convex first-order bound on E[f(x_R) - f*]:
/// L D_X^2 / N + (D + D_X^2 / D) sigma / sqrt(N).
double convex_bound_first_order(double L, double D_X, double D_tilde, double sigma, long long N);
/// Convex zeroth-order bound on E[f(x_R) - f*]:
/// 5 L (n+4) D_X^2 / N + 2 sigma sqrt(n+4) (D + D_X^2 / D) / sqrt(N).
double convex_bound_zeroth_order(double L, double D_X, double D_tilde, double sigma, long long N, int n);

/// Bound on (1/L) E||grad f(x_R)||^2 for an arbitrary plan with gamma_k < 2/L:
/// (D_f^2 + sigma^2 sum gamma^2) / sum (2 gamma - L gamma^2).
double rsg_general_bound(const StepsizePlan& plan, double L, double D_f, double sigma);
/// Bound on E[f(x_R) - f*] for convex problems, same plan conditions.
double rsg_general_convex_bound(const StepsizePlan& plan, double L, double D_X, double sigma);
/// Bound on (1/L) E||grad f(x_R)||^2 for RSGF with gamma_k < 1/(2(n+4)L).
double rsgf_general_bound(const StepsizePlan& plan, double L, double D_f, double sigma, double mu, int n);

/// A deviation threshold with its probability bound. Bounds above 1 are
/// clamped to 1 and flagged vacuous.
struct DeviationBound {
  std::string name;
  double lambda = 0.0;
  double threshold = 0.0;
  double prob_bound = 0.0;
  bool vacuous = false;
};

/// P{||grad f(x*)||^2 >= 2(4 L B_N + 3 lambda sigma^2 / T)} <= (S+1)/lambda + 2^-S.
DeviationBound deviation_threshold_2rsg(double L, double B_N, double sigma, long long T, int S, double lambda);
/// Light tail: 4 [2 L B_N + 3 (1+lambda)^2 sigma^2 / T], (S+1) exp(-lambda^2/3) + 2^-S.
DeviationBound deviation_threshold_2rsg_light_tail(double L, double B_N, double sigma, long long T, int S,
                                                   double lambda);
/// Zeroth order: 8 L Bbar_N + 3(n+4) L^2 D_f^2 / (2N)
///   + (24 (n+4) lambda / T) [L Bbar_N + (n+4) L^2 D_f^2 / N + sigma^2],
/// with (S+1)/lambda + 2^-S.
DeviationBound deviation_threshold_2rsgf(double L, double B_bar_N, double sigma, double D_f, long long N,
                                         long long T, int S, int n, double lambda);
/// P{||grad f(x_R)||^2 >= lambda L B_N} <= 1/lambda.
DeviationBound markov_threshold(double L, double B_N, double lambda);

enum class BudgetOrder { first, zeroth };

/// S (N + T) for first order, 2 S (N + T) for zeroth order.
long long budget_totals(long long S, long long N, long long T, BudgetOrder order);

/// Evaluated quantities for one configuration.
struct BoundReport {
  double D_f = 0.0;
  double B_N = 0.0;
  double B_bar_N = 0.0;
  double D_N = 0.0;
  std::vector<DeviationBound> thresholds;
  long long first_order_total = 0;
  long long zeroth_order_total = 0;
};

struct MartingalePart {
  double empirical = 0.0;
  double bound = 0.0;
  double slack = 0.0;  ///< Four binomial standard errors at the bound.
  bool holds() const { return empirical <= bound + slack; }
};

struct MartingaleCheck {
  MartingalePart part_a;  ///< P{||sum zeta||^2 >= lambda sum sigma_i^2} <= 1/lambda
  MartingalePart part_b;  ///< P{||sum zeta|| >= sqrt2 (1+lambda) sqrt(sum sigma_i^2)} <= exp(-lambda^2/3)
};

/// Simulates sums of independent zero-mean Gaussian vectors in R^dim. Part a
/// uses E||zeta_i||^2 = sigma_i^2. Part b scales the draws so that
/// E exp(||zeta_i||^2 / sigma_i^2) = e exactly.
MartingaleCheck martingale_deviation_check(std::span<const double> sigma_seq, int samples, double lambda,
                                           RngStream rng, int dim = 1);

/// Per-coordinate variance s^2 of a centered Gaussian in R^dim with
/// E exp(||z||^2 / sigma^2) = e, i.e. (1 - 2 s^2 / sigma^2)^{-dim/2} = e.
double light_tail_gaussian_variance(double sigma, int dim);

}  // namespace randsg
