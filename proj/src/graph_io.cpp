#include "resgcn/graph_io.hpp"

#include <algorithm>
#include <set>

#include "resgcn/error.hpp"
#include "resgcn/text.hpp"

namespace resgcn {
namespace {

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    f(line_no, text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace

EdgeListFile parse_edge_list(std::string_view text, const std::string& source) {
  EdgeListFile out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    if (line.front() == '#') {
      const auto parts = split_ws(trim(line.substr(1)));
      if (parts.size() == 2 && parts[0] == "nodes") {
        const auto n = parse_int(parts[1]);
        if (!n || *n < 0) fail(ErrorCode::kParse, where(source, line_no) + ": bad node count");
        out.declared_nodes = static_cast<std::size_t>(*n);
      }
      return;
    }
    const auto parts = split_ws(line);
    if (parts.size() != 2) {
      fail(ErrorCode::kParse, where(source, line_no) + ": expected two node indices, got \"" +
                                  std::string(line) + "\"");
    }
    const auto u = parse_int(parts[0]);
    const auto v = parse_int(parts[1]);
    if (!u || !v || *u < 0 || *v < 0) {
      fail(ErrorCode::kParse, where(source, line_no) + ": non-integer or negative node index in \"" +
                                  std::string(line) + "\"");
    }
    out.edges.emplace_back(static_cast<std::size_t>(*u), static_cast<std::size_t>(*v));
  });
  return out;
}

Tensor2 parse_attributes_csv(std::string_view text, const std::string& source) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  bool first = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty()) return;
    const auto cells = split(line, ',');
    std::vector<double> row;
    row.reserve(cells.size());
    std::optional<std::size_t> bad;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) {
        bad = c;
        break;
      }
      row.push_back(*v);
    }
    const bool was_first = first;
    first = false;
    if (bad) {
      if (was_first) return;  // header row
      fail(ErrorCode::kParse, where(source, line_no) + ": non-numeric cell \"" +
                                  std::string(trim(cells[*bad])) + "\" in column " +
                                  std::to_string(*bad + 1));
    }
    if (rows == 0) cols = row.size();
    if (row.size() != cols) {
      fail(ErrorCode::kParse, where(source, line_no) + ": expected " + std::to_string(cols) +
                                  " columns, got " + std::to_string(row.size()));
    }
    data.insert(data.end(), row.begin(), row.end());
    ++rows;
  });
  return Tensor2(rows, cols, std::move(data));
}

Labels parse_labels_csv(std::string_view text, std::size_t n, const std::string& source) {
  Labels labels(n, 0);
  std::vector<bool> seen(n, false);
  bool first = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    const auto cells = split(line, ',');
    const bool was_first = first;
    first = false;
    const auto id = cells.size() == 2 ? parse_int(cells[0]) : std::nullopt;
    const auto label = cells.size() == 2 ? parse_int(cells[1]) : std::nullopt;
    if (!id || !label) {
      if (was_first) return;  // header row
      fail(ErrorCode::kParse, where(source, line_no) + ": expected \"node_id,label\", got \"" +
                                  std::string(line) + "\"");
    }
    if (*id < 0 || static_cast<std::size_t>(*id) >= n) {
      fail(ErrorCode::kInvalidInput, where(source, line_no) + ": node id " +
                                         std::to_string(*id) + " outside 0.." +
                                         std::to_string(n - 1));
    }
    if (*label != 0 && *label != 1) {
      fail(ErrorCode::kInvalidInput, where(source, line_no) + ": label must be 0 or 1");
    }
    const auto i = static_cast<std::size_t>(*id);
    if (seen[i]) fail(ErrorCode::kInvalidInput, where(source, line_no) + ": duplicate node id");
    seen[i] = true;
    labels[i] = static_cast<int>(*label);
  });
  return labels;
}

LoadedGraph load_graph(const std::string& edge_path, const std::string& attr_path,
                       const std::optional<std::string>& label_path) {
  const auto edge_file = parse_edge_list(read_file(edge_path), edge_path);
  Tensor2 x = parse_attributes_csv(read_file(attr_path), attr_path);

  std::size_t n = 0;
  if (edge_file.declared_nodes) {
    n = *edge_file.declared_nodes;
  } else {
    for (auto [u, v] : edge_file.edges) n = std::max({n, u + 1, v + 1});
  }
  if (n == 0 && x.rows() == 0) fail(ErrorCode::kInvalidInput, "empty node set in " + edge_path);
  if (x.rows() != n) {
    fail(ErrorCode::kDimensionMismatch,
         attr_path + " has " + std::to_string(x.rows()) + " rows but " + edge_path +
             " implies " + std::to_string(n) + " nodes");
  }
  EdgeListStats stats;
  AttributedGraph g(n, edge_file.edges, std::move(x), &stats);
  std::optional<Labels> labels;
  if (label_path) labels = load_labels(*label_path, n);
  return LoadedGraph{std::move(g), std::move(labels), stats};
}

std::string format_edge_list(const AttributedGraph& g) {
  std::string out = "# nodes " + std::to_string(g.node_count()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

std::string format_attributes_csv(const Tensor2& x) {
  std::string out;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(x(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_labels_csv(const Labels& labels) {
  std::string out = "node_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
  }
  return out;
}

void save_graph(const AttributedGraph& g, const std::string& edge_path,
                const std::string& attr_path) {
  write_file(edge_path, format_edge_list(g));
  write_file(attr_path, format_attributes_csv(g.attributes()));
}

void save_labels(const Labels& labels, const std::string& path) {
  write_file(path, format_labels_csv(labels));
}

Labels load_labels(const std::string& path, std::size_t n) {
  return parse_labels_csv(read_file(path), n, path);
}

}  // namespace resgcn
