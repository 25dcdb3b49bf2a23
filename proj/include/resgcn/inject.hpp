#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resgcn/graph.hpp"
#include "resgcn/rng.hpp"

namespace resgcn {

enum class AnomalyKind : std::uint8_t { kNone, kStructural, kAttribute };
std::string_view to_string(AnomalyKind kind);

/// Which node of a (target, farthest candidate) pair is rewritten and labeled.
enum class SwapDirection {
  kTargetReceivesFarthest,  // the sampled target takes the far row (default)
  kFarthestReceivesTarget,  // the far candidate takes the target's row
};
std::string_view to_string(SwapDirection d);
SwapDirection parse_swap_direction(std::string_view s);

struct InjectionSpec {
  std::size_t clique_size = 15;     // s
  std::size_t clique_count = 10;    // t
  std::size_t candidate_pool = 50;  // k
  std::uint64_t seed = 0;
  SwapDirection direction = SwapDirection::kTargetReceivesFarthest;

  std::size_t anomalies_per_kind() const noexcept { return clique_size * clique_count; }
  /// s >= 2, t >= 1, k >= 1 and 2·s·t <= n; kInvalidArgument / kCapacity otherwise.
  void validate(std::size_t n) const;
};

struct StructuralInjection {
  AttributedGraph graph;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> anomalies;  // clique members, in sampled order
  std::vector<Edge> added_edges;       // canonical (u < v), sorted
};

struct AttributeSwap {
  std::size_t anomaly;  // node whose row was overwritten
  std::size_t source;   // node whose row it received
  double distance;
};

struct AttributeInjection {
  AttributedGraph graph;
  std::vector<std::size_t> anomalies;
  std::vector<AttributeSwap> swaps;
  std::vector<std::string> warnings;
};

/// t disjoint groups of s nodes, each made fully connected.
StructuralInjection inject_structural(const AttributedGraph& g, std::size_t s, std::size_t t,
                                      Rng& rng);

/// s·t targets outside `exclude`. For each, k other nodes are drawn and the one
/// farthest (Euclidean, original attributes) from the target is selected; rows
/// are then swapped per `direction`. k >= n is clamped to n - 1 with a warning.
AttributeInjection inject_attribute(
    const AttributedGraph& g, std::size_t s, std::size_t t, std::size_t k, Rng& rng,
    std::span<const std::size_t> exclude,
    SwapDirection direction = SwapDirection::kTargetReceivesFarthest);

struct InjectionResult {
  AttributedGraph graph;
  Labels labels;
  std::vector<AnomalyKind> provenance;  // per node
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<Edge> added_edges;
  std::vector<AttributeSwap> swaps;
  std::vector<std::string> warnings;
};

/// Structural injection, then attribute injection excluding the clique members.
/// Both draw from one Rng seeded with spec.seed.
InjectionResult inject_benchmark(const AttributedGraph& g, const InjectionSpec& spec);

nlohmann::json injection_manifest(const InjectionResult& result, const InjectionSpec& spec);

}  // namespace resgcn
