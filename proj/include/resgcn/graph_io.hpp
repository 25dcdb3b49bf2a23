#pragma once

#include <optional>
#include <string>

#include "resgcn/graph.hpp"

namespace resgcn {

struct LoadedGraph {
  AttributedGraph graph;
  std::optional<Labels> labels;
  EdgeListStats stats;
};

/// Reads an edge list ("u v" per line, 0-based, '#' comments) and an attribute
/// CSV (one row per node, optional header). The node count is max index + 1
/// unless the edge file declares it with a "# nodes N" line; either way the
/// attribute row count must match.
LoadedGraph load_graph(const std::string& edge_path, const std::string& attr_path,
                       const std::optional<std::string>& label_path = std::nullopt);

struct EdgeListFile {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared_nodes;
};

EdgeListFile parse_edge_list(std::string_view text, const std::string& source = "<edges>");
Tensor2 parse_attributes_csv(std::string_view text, const std::string& source = "<attributes>");
/// "node_id,label" rows; unlisted nodes are 0.
Labels parse_labels_csv(std::string_view text, std::size_t n, const std::string& source = "<labels>");

std::string format_edge_list(const AttributedGraph& g);
std::string format_attributes_csv(const Tensor2& x);
std::string format_labels_csv(const Labels& labels);

void save_graph(const AttributedGraph& g, const std::string& edge_path,
                const std::string& attr_path);
void save_labels(const Labels& labels, const std::string& path);
Labels load_labels(const std::string& path, std::size_t n);

}  // namespace resgcn
