#pragma once

#include <cstdint>
#include <random>

namespace lk {

/// Reproducible random stream keyed by (seed, stream id).
///
/// Child streams obtained with split() are independent of the parent and of
/// each other, which lets callers give every replica or path segment its own
/// stream and keep results identical regardless of evaluation order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Exponential with the given rate, by inverse CDF -log(1-p)/rate.
  double exponential(double rate);
  double normal();
  std::uint64_t bits() { return engine_(); }

  RngStream split(std::uint64_t child) const;

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, exposed for seeding helpers.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace lk
