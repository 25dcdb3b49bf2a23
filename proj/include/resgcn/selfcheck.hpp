#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace resgcn {

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

/// Gradient, normalization, metric and ablation oracles on small random
/// problems. Cheap enough to run on every install.
std::vector<CheckLine> run_selfcheck(std::uint64_t seed);

}  // namespace resgcn
