#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "randsg/stats.hpp"

using namespace randsg;

TEST_CASE("mean, standard error and variance") {
  // Reference values from numpy (ddof = 1).
  const std::vector<double> x{1.5, -2.0, 3.25, 0.0, 7.0, 2.5};
  const auto e = mean_estimate(x);
  CHECK(e.mean == doctest::Approx(2.0416666666666665).epsilon(1e-15));
  CHECK(e.std_error == doctest::Approx(1.252358885375026).epsilon(1e-14));
  CHECK(e.count == 6);
  CHECK(sample_variance(x) == doctest::Approx(9.410416666666666).epsilon(1e-14));
  CHECK(e.upper() == doctest::Approx(e.mean + 4 * e.std_error));
  const std::vector<double> one{3.0};
  CHECK(mean_estimate(one).std_error == 0.0);
  CHECK(sample_variance(one) == 0.0);
}

TEST_CASE("tail fractions") {
  const std::vector<double> x{1, 2, 2, 3};
  CHECK(fraction_at_least(x, 2) == 0.75);
  CHECK(fraction_above(x, 2) == 0.25);
  CHECK(fraction_at_least(x, 10) == 0.0);
  CHECK(frequency_slack(0.25, 400) == doctest::Approx(4 * std::sqrt(0.25 * 0.75 / 400)));
  CHECK(frequency_slack(1.0, 400) == 0.0);
}

TEST_CASE("parallel_for writes every slot once for any thread count") {
  for (unsigned threads : {0u, 1u, 2u, 7u}) {
    std::vector<int> out(1000, 0);
    std::atomic<int> calls{0};
    parallel_for(out.size(), threads, [&](std::size_t i) {
      out[i] += static_cast<int>(i) * 2;
      ++calls;
    });
    CHECK(calls == 1000);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);
  }
  parallel_for(0, 3, [](std::size_t) { FAIL("called on empty range"); });
}

TEST_CASE("parallel_for rethrows worker exceptions") {
  CHECK_THROWS_AS(parallel_for(50, 4,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("bootstrap variance gap") {
  RngStream rng(1, 0);
  std::vector<double> wide(400), narrow(400), narrow2(400);
  for (auto& v : wide) v = 3.0 * rng.normal();
  for (auto& v : narrow) v = rng.normal();
  for (auto& v : narrow2) v = rng.normal();
  CHECK(bootstrap_variance_gap_lower(wide, narrow, 2000, 0.95, RngStream(1, 1)) > 0.0);
  CHECK(bootstrap_variance_gap_lower(narrow, wide, 2000, 0.95, RngStream(1, 2)) < 0.0);
  const double same = bootstrap_variance_gap_lower(narrow, narrow2, 2000, 0.95, RngStream(1, 3));
  CHECK(same < sample_variance(narrow) - sample_variance(narrow2));
  CHECK(bootstrap_variance_gap_lower(wide, narrow, 500, 0.95, RngStream(1, 4)) ==
        bootstrap_variance_gap_lower(wide, narrow, 500, 0.95, RngStream(1, 4)));
}
