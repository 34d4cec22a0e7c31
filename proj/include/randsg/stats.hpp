#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "randsg/rng.hpp"

namespace randsg {

/// Sample mean with its CLT standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long count = 0;

  double upper(double z = 4.0) const { return mean + z * std_error; }
  double lower(double z = 4.0) const { return mean - z * std_error; }
};

/// Left-to-right summation, so the result depends only on the order of `xs`.
Estimate mean_estimate(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double fraction_at_least(std::span<const double> xs, double threshold);
double fraction_above(std::span<const double> xs, double threshold);

/// Four-standard-error slack for an empirical frequency with true value p.
double frequency_slack(double p, long M);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Callers write results into slot i, so output never depends
/// on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// One-sided bootstrap lower confidence bound for var(a) - var(b), resampling
/// each sample independently with replacement.
double bootstrap_variance_gap_lower(std::span<const double> a, std::span<const double> b,
                                    int resamples, double confidence, RngStream rng);

}  // namespace randsg
