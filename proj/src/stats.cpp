#include "randsg/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "randsg/errors.hpp"

namespace randsg {

Estimate mean_estimate(std::span<const double> xs) {
  Estimate e;
  e.count = static_cast<long>(xs.size());
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) e.std_error = std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
  return e;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

double fraction_at_least(std::span<const double> xs, double threshold) {
  if (xs.empty()) return 0.0;
  const auto c = std::count_if(xs.begin(), xs.end(), [&](double x) { return x >= threshold; });
  return static_cast<double>(c) / static_cast<double>(xs.size());
}

double fraction_above(std::span<const double> xs, double threshold) {
  if (xs.empty()) return 0.0;
  const auto c = std::count_if(xs.begin(), xs.end(), [&](double x) { return x > threshold; });
  return static_cast<double>(c) / static_cast<double>(xs.size());
}

double frequency_slack(double p, long M) {
  if (M <= 0) throw InputError("frequency_slack needs M >= 1");
  return 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(M));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(count);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double bootstrap_variance_gap_lower(std::span<const double> a, std::span<const double> b,
                                    int resamples, double confidence, RngStream rng) {
  if (a.size() < 2 || b.size() < 2) throw InputError("bootstrap needs at least 2 values per sample");
  if (resamples < 10) throw InputError("bootstrap needs at least 10 resamples");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must be in (0, 1)");
  std::vector<double> gaps(resamples);
  std::vector<double> ra(a.size()), rb(b.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& v : ra) v = a[rng.below(a.size())];
    for (auto& v : rb) v = b[rng.below(b.size())];
    gaps[r] = sample_variance(ra) - sample_variance(rb);
  }
  std::sort(gaps.begin(), gaps.end());
  const auto idx = static_cast<std::size_t>(std::floor((1.0 - confidence) * resamples));
  return gaps[std::min(idx, gaps.size() - 1)];
}

}  // namespace randsg
