#pragma once

#include <cstdint>
#include <random>

namespace herdbook {

/// Seedable random stream with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The variate transforms below are implemented here rather than
/// taken from <random>, because the standard distributions are allowed to
/// differ between library implementations. With these, a (seed, call
/// sequence) pair produces the same numbers with any conforming compiler.
///
///   uniform()      53 high bits of one engine output, in [0, 1)
///   exponential()  -log(1 - u) / rate
///   normal()       Marsaglia polar method, the spare deviate is cached
///   gamma()        Marsaglia-Tsang squeeze, boosted by u^(1/k) for k < 1
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1], safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate);
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma with shape k > 0 and scale theta > 0 (mean k * theta).
  double gamma(double shape, double scale);

  // UniformRandomBitGenerator interface, for std::shuffle and friends.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent stream seed from a master seed and a task counter
/// (splitmix64 finalizer applied to master + golden-ratio * (counter + 1)).
/// Sweeps, replicas and annealing iterations take their seeds from here.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

}  // namespace herdbook
