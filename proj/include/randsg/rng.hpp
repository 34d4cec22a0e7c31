#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

namespace randsg {

/// Platform-stable inverse of the standard normal CDF (Wichura, AS 241,
/// PPND16). Relative accuracy about 1e-16 on (0, 1).
double normal_quantile(double p);

/// A reproducible random stream identified by (seed, stream_id).
///
/// The generator is xoshiro256** seeded through SplitMix64 from a mix of the
/// two identifiers. Normal draws go through `normal_quantile` so that a given
/// (seed, stream_id) produces the same bits on every platform; nothing here
/// depends on the standard library's distribution implementations.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// A child stream whose identity depends only on this stream's identity
  /// and `index`, never on how many draws have been taken from this one.
  RngStream derive(std::uint64_t index) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Standard normal draw.
  double normal();
  /// Vector of n independent standard normal draws.
  Eigen::VectorXd normal_vector(Eigen::Index n);
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace randsg
