#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "resgcn/error.hpp"
#include "resgcn/graph.hpp"
#include "resgcn/graph_io.hpp"
#include "resgcn/pca.hpp"
#include "resgcn/rng.hpp"
#include "resgcn/synth.hpp"
#include "resgcn/text.hpp"

using namespace resgcn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("resgcn_graph_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = (path / name).string();
    write_file(p, text);
    return p;
  }
};

ErrorCode load_error(const TempDir& d, const std::string& edges, const std::string& attrs,
                     std::string* message = nullptr) {
  try {
    load_graph(d.file("e.txt", edges), d.file("x.csv", attrs));
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return ErrorCode::kIo;
}

}  // namespace

TEST(LoadGraph, PathGraph) {
  TempDir d;
  const auto lg = load_graph(d.file("e.txt", "0 1\n1 2\n"), d.file("x.csv", "1,2\n3,4\n5,6\n"));
  EXPECT_EQ(lg.graph.node_count(), 3u);
  EXPECT_EQ(lg.graph.edge_count(), 2u);
  EXPECT_EQ(lg.graph.dim(), 2u);
  EXPECT_FALSE(lg.labels);
}

TEST(LoadGraph, SelfLoopDroppedAndCounted) {
  TempDir d;
  const auto lg = load_graph(d.file("e.txt", "0 0\n0 1\n"), d.file("x.csv", "1\n2\n"));
  EXPECT_EQ(lg.graph.node_count(), 2u);
  EXPECT_EQ(lg.graph.edge_count(), 1u);
  EXPECT_EQ(lg.stats.self_loops, 1u);
}

TEST(LoadGraph, DuplicatesMerged) {
  TempDir d;
  const auto lg = load_graph(d.file("e.txt", "0 1\n1 0\n0 1\n"), d.file("x.csv", "1\n2\n"));
  EXPECT_EQ(lg.graph.edge_count(), 1u);
  EXPECT_EQ(lg.stats.duplicates, 2u);
}

TEST(LoadGraph, HeaderRowAndCommentsSkipped) {
  TempDir d;
  const auto lg = load_graph(d.file("e.txt", "# a comment\n0\t1\n"),
                             d.file("x.csv", "f0,f1\n1,2\n3,4\n"));
  EXPECT_EQ(lg.graph.attributes(), (Tensor2{{1, 2}, {3, 4}}));
}

TEST(LoadGraph, Errors) {
  TempDir d;
  std::string msg;
  EXPECT_EQ(load_error(d, "0 1\n1 2\n", "1\n2\n", &msg), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(load_error(d, "0 1\n", "1\n2\n3,x\n", &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find(":3"), std::string::npos) << msg;
  EXPECT_EQ(load_error(d, "0 1\n", "1\nabc\n", &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
  EXPECT_EQ(load_error(d, "0 one\n", "1\n2\n", &msg), ErrorCode::kParse);
  EXPECT_NE(msg.find(":1"), std::string::npos) << msg;
  EXPECT_EQ(load_error(d, "", "", &msg), ErrorCode::kInvalidInput);
  try {
    load_graph((d.path / "missing.txt").string(), (d.path / "missing.csv").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("missing.txt"), std::string::npos);
  }
}

TEST(LoadGraph, Labels) {
  TempDir d;
  const auto lg = load_graph(d.file("e.txt", "0 1\n1 2\n"), d.file("x.csv", "1\n2\n3\n"),
                             d.file("y.csv", "node_id,label\n2,1\n0,0\n"));
  ASSERT_TRUE(lg.labels);
  EXPECT_EQ(*lg.labels, (Labels{0, 0, 1}));
  EXPECT_THROW(parse_labels_csv("0,2\n", 3), Error);
  EXPECT_THROW(parse_labels_csv("5,1\n", 3), Error);
  EXPECT_THROW(parse_labels_csv("1,1\n1,0\n", 3), Error);
}

TEST(LoadGraph, SaveLoadRoundTrip) {
  TempDir d;
  // the last node is isolated; the edge file must still carry n
  const auto g = make_random_graph(30, 40, 3, 99).with_attributes(Tensor2(30, 3, 0.25));
  const auto g2 = AttributedGraph(31, g.edges(), Tensor2(31, 2, 1.0 / 3.0));
  for (const auto& graph : {g, g2}) {
    const auto e = (d.path / "e.txt").string(), x = (d.path / "x.csv").string();
    save_graph(graph, e, x);
    const auto back = load_graph(e, x).graph;
    EXPECT_EQ(back, graph);
    save_graph(back, e, x);
    EXPECT_EQ(load_graph(e, x).graph, graph);
  }
}

TEST(Graph, InvalidConstruction) {
  const std::vector<Edge> out_of_range{{0, 5}};
  EXPECT_THROW(AttributedGraph(3, out_of_range, Tensor2(3, 1)), Error);
  EXPECT_THROW(AttributedGraph(0, {}, Tensor2()), Error);
  Tensor2 bad(2, 1);
  bad(1, 0) = INFINITY;
  EXPECT_THROW(AttributedGraph(2, {}, bad), Error);
}

TEST(Normalize, IsolatedNode) {
  const auto s = normalize_adjacency(AttributedGraph(1, {}, Tensor2(1, 1)));
  EXPECT_EQ(s.matrix.to_dense(), (Tensor2{{1.0}}));
}

TEST(Normalize, PathAndTriangleMatchDenseOracle) {
  const std::vector<Edge> path{{0, 1}};
  const auto s2 = normalize_adjacency(AttributedGraph(2, path, Tensor2(2, 1))).matrix.to_dense();
  EXPECT_LE(max_abs_diff(s2, Tensor2{{0.5, 0.5}, {0.5, 0.5}}), 1e-15);
  const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  const auto g = AttributedGraph(3, tri, Tensor2(3, 1));
  const auto s3 = normalize_adjacency(g).matrix.to_dense();
  EXPECT_LE(max_abs_diff(s3, oracle::dense_normalized(oracle::dense_adjacency(g))), 1e-15);
  for (double v : s3.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Normalize, InvariantsOnRandomGraphs) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    const auto g = make_random_graph(n, rng.below(4 * n), 1, rng.next_u64());
    const auto s = normalize_adjacency(g);
    const auto dense = s.matrix.to_dense();
    EXPECT_LE(max_abs_diff(dense, oracle::dense_normalized(oracle::dense_adjacency(g))), 1e-12);
    EXPECT_EQ(s.matrix.nnz(), g.adjacency().nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_DOUBLE_EQ(s.matrix.at(i, i), 1.0 / (1.0 + static_cast<double>(g.degree(i))));
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(dense(i, j), dense(j, i));
        EXPECT_GE(dense(i, j), 0.0);
        EXPECT_LE(dense(i, j), 1.0);
      }
    }
  }
}

TEST(Normalize, RegularGraphRowsSumToOne) {
  for (std::size_t n : {5u, 8u}) {
    std::vector<Edge> cycle, complete;
    for (std::size_t i = 0; i < n; ++i) {
      cycle.emplace_back(i, (i + 1) % n);
      for (std::size_t j = i + 1; j < n; ++j) complete.emplace_back(i, j);
    }
    for (const auto& edges : {cycle, complete}) {
      const auto s = normalize_adjacency(AttributedGraph(n, edges, Tensor2(n, 1)));
      const auto sums = spmm(s.matrix, Tensor2(n, 1, 1.0));
      for (double v : sums.data()) EXPECT_NEAR(v, 1.0, 1e-14);
    }
  }
}

TEST(Pca, IdenticalRowsGiveZeros) {
  Tensor2 x(6, 3);
  for (std::size_t i = 0; i < 6; ++i) x.row(i)[0] = 2, x.row(i)[1] = -1, x.row(i)[2] = 5;
  EXPECT_EQ(pca_reduce(x, 1), Tensor2(6, 1, 0.0));
}

TEST(Pca, RankOneReconstruction) {
  Rng rng(4);
  Tensor2 x(10, 4);
  const std::vector<double> dir{1.0, -2.0, 0.5, 3.0};
  for (std::size_t i = 0; i < 10; ++i) {
    const double c = rng.normal();
    for (std::size_t j = 0; j < 4; ++j) x(i, j) = 7.0 + c * dir[j];
  }
  const auto model = pca_fit(x, 1);
  const auto y = pca_transform(model, x);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(y(i, 0) * model.components(j, 0), x(i, j) - model.mean[j], 1e-8);
    }
  // largest-magnitude loading is positive
  EXPECT_GT(model.components(3, 0), 0.0);
}

TEST(Pca, ExplainedVarianceMatchesSvdOracle) {
  Rng rng(8);
  Tensor2 x(50, 30);
  for (double& v : x.data()) v = rng.normal();
  const auto model = pca_fit(x, 20);
  const auto ref = oracle::svd_variance_ratios(x, 20);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(model.explained_variance_ratio[i], ref[i], 1e-8);
  for (std::size_t i = 1; i < 20; ++i) {
    EXPECT_GE(model.explained_variance[i - 1], model.explained_variance[i]);
  }

  // reduced columns are uncorrelated
  const auto y = pca_transform(model, x);
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = a + 1; b < 20; ++b) {
      double cov = 0.0;
      for (std::size_t i = 0; i < 50; ++i) cov += y(i, a) * y(i, b);
      EXPECT_NEAR(cov / 49.0, 0.0, 1e-8);
    }
}

TEST(Pca, TargetTooLarge) {
  try {
    pca_reduce(Tensor2(5, 3), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}
