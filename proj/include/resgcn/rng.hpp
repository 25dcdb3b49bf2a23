#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace resgcn {

/// Platform-stable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std distributions are not (libstdc++ and libc++ disagree), so
/// every derived draw here is computed from raw engine words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller; no cached second variate.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// `count` distinct elements of `pool` in sampled order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::span<const std::size_t> pool,
                                  std::size_t count);

 private:
  std::mt19937_64 engine_;
};

/// Deterministic child seed for a named pipeline stage.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage);

}  // namespace resgcn
