#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "resgcn/graph.hpp"

namespace resgcn {

/// Stochastic block model with Gaussian node attributes. Nodes are split into
/// contiguous equal-size blocks; each block has its own attribute mean drawn
/// from N(0, mean_scale²) per dimension, and rows add N(0, noise²) noise.
struct SbmSpec {
  std::size_t nodes = 200;
  std::size_t blocks = 2;
  double p_in = 0.2;
  double p_out = 0.02;
  std::size_t dim = 20;
  double mean_scale = 1.0;
  double noise = 1.0;
  std::uint64_t seed = 0;
};

struct SbmGraph {
  AttributedGraph graph;
  std::vector<std::size_t> block;
};

SbmGraph make_sbm(const SbmSpec& spec);

/// `edges` distinct uniformly drawn pairs (capped at n(n-1)/2) and standard
/// normal attributes.
AttributedGraph make_random_graph(std::size_t nodes, std::size_t edges, std::size_t dim,
                                  std::uint64_t seed);

}  // namespace resgcn
