#include "resgcn/rng.hpp"

#include <cmath>
#include <numbers>

#include "resgcn/error.hpp"

namespace resgcn {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::kInvalidArgument, "Rng::below: bound must be positive");
  // 2^64 mod bound; draws below it would over-weight the low residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % bound;
}

double Rng::normal() {
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> Rng::sample(std::span<const std::size_t> pool,
                                     std::size_t count) {
  if (count > pool.size()) {
    fail(ErrorCode::kCapacity, "cannot sample " + std::to_string(count) +
                                   " items from a pool of " +
                                   std::to_string(pool.size()));
  }
  std::vector<std::size_t> work(pool.begin(), pool.end());
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(work.size() - i));
    std::swap(work[i], work[j]);
  }
  work.resize(count);
  return work;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view stage) {
  // FNV-1a over the stage name, mixed with the root seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stage) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root) ^ h);
}

}  // namespace resgcn
