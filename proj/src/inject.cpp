#include "resgcn/inject.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resgcn/error.hpp"

namespace resgcn {

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::kNone: return "none";
    case AnomalyKind::kStructural: return "structural";
    case AnomalyKind::kAttribute: return "attribute";
  }
  return "none";
}

std::string_view to_string(SwapDirection d) {
  return d == SwapDirection::kTargetReceivesFarthest ? "target" : "farthest";
}

SwapDirection parse_swap_direction(std::string_view s) {
  if (s == "target") return SwapDirection::kTargetReceivesFarthest;
  if (s == "farthest") return SwapDirection::kFarthestReceivesTarget;
  fail(ErrorCode::kInvalidArgument,
       "unknown swap direction \"" + std::string(s) + "\" (expected target|farthest)");
}

void InjectionSpec::validate(std::size_t n) const {
  if (clique_size < 2) fail(ErrorCode::kInvalidArgument, "clique size s must be >= 2");
  if (clique_count < 1) fail(ErrorCode::kInvalidArgument, "clique count t must be >= 1");
  if (candidate_pool < 1) fail(ErrorCode::kInvalidArgument, "candidate pool k must be >= 1");
  if (2 * anomalies_per_kind() > n) {
    fail(ErrorCode::kCapacity, "2*s*t = " + std::to_string(2 * anomalies_per_kind()) +
                                   " anomalies do not fit in " + std::to_string(n) + " nodes");
  }
}

StructuralInjection inject_structural(const AttributedGraph& g, std::size_t s, std::size_t t,
                                      Rng& rng) {
  const std::size_t n = g.node_count();
  if (s * t > n) {
    fail(ErrorCode::kCapacity, "s*t = " + std::to_string(s * t) + " clique members exceed " +
                                   std::to_string(n) + " nodes");
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto members = rng.sample(all, s * t);

  std::vector<std::vector<std::size_t>> cliques(t);
  std::vector<Edge> added;
  for (std::size_t c = 0; c < t; ++c) {
    cliques[c].assign(members.begin() + static_cast<std::ptrdiff_t>(c * s),
                      members.begin() + static_cast<std::ptrdiff_t>((c + 1) * s));
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = a + 1; b < s; ++b) {
        const std::size_t u = std::min(cliques[c][a], cliques[c][b]);
        const std::size_t v = std::max(cliques[c][a], cliques[c][b]);
        if (!g.has_edge(u, v)) added.emplace_back(u, v);
      }
    }
  }
  std::sort(added.begin(), added.end());
  return StructuralInjection{g.with_edges_added(added), std::move(cliques), members,
                             std::move(added)};
}

AttributeInjection inject_attribute(const AttributedGraph& g, std::size_t s, std::size_t t,
                                    std::size_t k, Rng& rng,
                                    std::span<const std::size_t> exclude,
                                    SwapDirection direction) {
  const std::size_t n = g.node_count();
  std::vector<bool> blocked(n, false);
  for (std::size_t v : exclude) {
    if (v >= n) fail(ErrorCode::kInvalidArgument, "exclude set references node " + std::to_string(v));
    blocked[v] = true;
  }
  std::vector<std::size_t> eligible;
  for (std::size_t v = 0; v < n; ++v)
    if (!blocked[v]) eligible.push_back(v);
  if (s * t > eligible.size()) {
    fail(ErrorCode::kCapacity, "s*t = " + std::to_string(s * t) +
                                   " attribute anomalies exceed the " +
                                   std::to_string(eligible.size()) + " eligible nodes");
  }

  AttributeInjection out{g, {}, {}, {}};
  if (n < 2) fail(ErrorCode::kCapacity, "attribute injection needs at least two nodes");
  if (k >= n) {
    out.warnings.push_back("candidate pool k = " + std::to_string(k) + " clamped to n-1 = " +
                           std::to_string(n - 1));
    k = n - 1;
  }

  const Tensor2& original = g.attributes();
  Tensor2 x = original;
  const auto targets = rng.sample(eligible, s * t);
  std::vector<bool> labeled(n, false);

  std::vector<std::size_t> others;
  others.reserve(n);
  for (std::size_t target : targets) {
    others.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (v == target) continue;
      // Under the reversed reading the far candidate becomes the anomaly, so it
      // must be eligible and not already taken.
      if (direction == SwapDirection::kFarthestReceivesTarget && (blocked[v] || labeled[v])) continue;
      others.push_back(v);
    }
    if (others.empty()) fail(ErrorCode::kCapacity, "no candidate left for attribute swap");
    const auto candidates = rng.sample(others, std::min(k, others.size()));

    std::size_t best = candidates.front();
    double best_dist = -1.0;
    const auto xt = original.row(target);
    for (std::size_t c : candidates) {
      const auto xc = original.row(c);
      double acc = 0.0;
      for (std::size_t j = 0; j < xt.size(); ++j) acc += (xc[j] - xt[j]) * (xc[j] - xt[j]);
      const double dist = std::sqrt(acc);
      if (dist > best_dist) {
        best_dist = dist;
        best = c;
      }
    }

    const std::size_t anomaly =
        direction == SwapDirection::kTargetReceivesFarthest ? target : best;
    const std::size_t source = anomaly == target ? best : target;
    const auto src = original.row(source);
    std::copy(src.begin(), src.end(), x.row(anomaly).begin());
    labeled[anomaly] = true;
    out.anomalies.push_back(anomaly);
    out.swaps.push_back({anomaly, source, best_dist});
  }
  out.graph = g.with_attributes(std::move(x));
  return out;
}

InjectionResult inject_benchmark(const AttributedGraph& g, const InjectionSpec& spec) {
  const std::size_t n = g.node_count();
  spec.validate(n);
  Rng rng(spec.seed);
  auto structural = inject_structural(g, spec.clique_size, spec.clique_count, rng);
  auto attribute = inject_attribute(structural.graph, spec.clique_size, spec.clique_count,
                                    spec.candidate_pool, rng, structural.anomalies,
                                    spec.direction);

  InjectionResult out{std::move(attribute.graph), Labels(n, 0),
                      std::vector<AnomalyKind>(n, AnomalyKind::kNone),
                      std::move(structural.cliques), std::move(structural.added_edges),
                      std::move(attribute.swaps), std::move(attribute.warnings)};
  for (std::size_t v : structural.anomalies) {
    out.labels[v] = 1;
    out.provenance[v] = AnomalyKind::kStructural;
  }
  for (std::size_t v : attribute.anomalies) {
    out.labels[v] = 1;
    out.provenance[v] = AnomalyKind::kAttribute;
  }
  return out;
}

nlohmann::json injection_manifest(const InjectionResult& result, const InjectionSpec& spec) {
  nlohmann::json j;
  j["spec"] = {{"s", spec.clique_size},
               {"t", spec.clique_count},
               {"k", spec.candidate_pool},
               {"seed", spec.seed},
               {"swap", std::string(to_string(spec.direction))}};
  j["nodes"] = result.graph.node_count();
  j["edges"] = result.graph.edge_count();
  j["cliques"] = result.cliques;
  nlohmann::json added = nlohmann::json::array();
  for (auto [u, v] : result.added_edges) added.push_back({u, v});
  j["added_edges"] = std::move(added);
  nlohmann::json swaps = nlohmann::json::array();
  for (const auto& s : result.swaps) {
    swaps.push_back({{"anomaly", s.anomaly}, {"source", s.source}, {"distance", s.distance}});
  }
  j["attribute_swaps"] = std::move(swaps);
  nlohmann::json prov = nlohmann::json::object();
  std::vector<std::size_t> structural, attribute;
  for (std::size_t v = 0; v < result.provenance.size(); ++v) {
    if (result.provenance[v] == AnomalyKind::kStructural) structural.push_back(v);
    if (result.provenance[v] == AnomalyKind::kAttribute) attribute.push_back(v);
  }
  prov["structural"] = structural;
  prov["attribute"] = attribute;
  j["provenance"] = std::move(prov);
  j["warnings"] = result.warnings;
  return j;
}

}  // namespace resgcn
