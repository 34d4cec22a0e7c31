#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "randsg/rng.hpp"

using randsg::RngStream;
using randsg::normal_quantile;

TEST_CASE("normal_quantile matches reference quantiles") {
  // Reference values from scipy.stats.norm.ppf.
  struct Ref {
    double p, z;
  };
  const std::array<Ref, 11> refs{{{1e-300, -37.0470962993612},
                                  {1e-20, -9.262340089798409},
                                  {1e-10, -6.361340902404056},
                                  {0.001, -3.090232306167813},
                                  {0.02425, -1.972961051311885},
                                  {0.1, -1.2815515655446004},
                                  {0.3, -0.5244005127080409},
                                  {0.5, 0.0},
                                  {0.7, 0.5244005127080407},
                                  {0.975, 1.959963984540054},
                                  {0.999999, 4.753424308817087}}};
  for (const auto& r : refs) {
    CAPTURE(r.p);
    CHECK(normal_quantile(r.p) == doctest::Approx(r.z).epsilon(1e-13));
  }
}

TEST_CASE("normal_quantile is antisymmetric and increasing") {
  RngStream rng(11, 0);
  double prev_p = 0.0, prev_z = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double z = normal_quantile(p);
    CHECK(z > prev_z);
    prev_p = p;
    prev_z = z;
  }
  (void)prev_p;
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform_open();
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-9));
  }
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
}

TEST_CASE("derive depends only on identity and index") {
  RngStream a(5, 1);
  RngStream fresh(5, 1);
  for (int i = 0; i < 10; ++i) a.next_u64();
  RngStream x = a.derive(3), y = fresh.derive(3), z = fresh.derive(4);
  CHECK(x.next_u64() == y.next_u64());
  CHECK(x.next_u64() != z.next_u64());
}

TEST_CASE("uniform draws stay in range") {
  RngStream rng(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK_UNARY(u >= 0.0 && u < 1.0);
    const double v = rng.uniform_open();
    CHECK_UNARY(v > 0.0 && v < 1.0);
  }
}

TEST_CASE("below is uniform") {
  RngStream rng(2, 0);
  constexpr int K = 8, M = 100000;
  std::array<int, K> counts{};
  CHECK(rng.below(1) == 0);
  for (int i = 0; i < M; ++i) ++counts[rng.below(K)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - M / double(K)) * (c - M / double(K)) / (M / double(K));
  // chi-square 0.999 quantile with 7 degrees of freedom.
  CHECK(chi2 < 24.321886347856854);
}

TEST_CASE("normal draws have unit variance") {
  RngStream rng(3, 0);
  constexpr int M = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < M; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s / M) < 4.0 / std::sqrt(M));
  // Var(z^2) = 2
  CHECK(std::abs(s2 / M - 1.0) < 4.0 * std::sqrt(2.0 / M));
  CHECK(std::abs(s4 / M - 3.0) < 0.1);
  const auto v = rng.normal_vector(5);
  CHECK(v.size() == 5);
}
