#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <utility>

#include "oracles.hpp"
#include "resgcn/checkpoint.hpp"
#include "resgcn/error.hpp"
#include "resgcn/model.hpp"
#include "resgcn/rng.hpp"
#include "resgcn/scoring.hpp"
#include "resgcn/synth.hpp"
#include "resgcn/train.hpp"

using namespace resgcn;

namespace {

Hyperparams small_hp(std::uint64_t seed = 1) {
  Hyperparams hp;
  hp.gcn_dims = {6, 4};
  hp.seed = seed;
  return hp;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(Params, ShapesChain) {
  const auto p = ModelParams::initialize(20, Hyperparams{});
  ASSERT_EQ(p.residual.size(), 3u);
  for (const auto& w : p.residual) EXPECT_EQ(w.shape_string(), "(20x20)");
  ASSERT_EQ(p.attention.size(), 2u);
  EXPECT_EQ(p.attention[0][0].shape_string(), "(20x64)");
  EXPECT_EQ(p.attention[0][1].shape_string(), "(64x64)");
  EXPECT_EQ(p.attention[1][0].shape_string(), "(20x32)");
  EXPECT_EQ(p.attention[1][1].shape_string(), "(32x32)");
  EXPECT_EQ(p.gcn[0].shape_string(), "(20x64)");
  EXPECT_EQ(p.gcn[1].shape_string(), "(64x32)");
  ASSERT_EQ(p.decoder.size(), 2u);
  EXPECT_EQ(p.decoder[0].shape_string(), "(32x64)");
  EXPECT_EQ(p.decoder[1].shape_string(), "(64x20)");
  EXPECT_EQ(p.named_tensors().size(), 11u);
  EXPECT_EQ(code_of([&] { p.check_shapes(21, Hyperparams{}); }), ErrorCode::kConfig);
}

TEST(Hyperparams, Validation) {
  auto bad = [](auto mutate) {
    Hyperparams hp;
    mutate(hp);
    return code_of([&] { hp.validate(); });
  };
  EXPECT_EQ(bad([](Hyperparams& h) { h.alpha = 1.5; }), ErrorCode::kConfig);
  EXPECT_EQ(bad([](Hyperparams& h) { h.lambda = -0.1; }), ErrorCode::kConfig);
  EXPECT_EQ(bad([](Hyperparams& h) { h.gamma = -1; }), ErrorCode::kConfig);
  EXPECT_EQ(bad([](Hyperparams& h) { h.epochs = 0; }), ErrorCode::kConfig);
  EXPECT_EQ(bad([](Hyperparams& h) { h.gcn_dims.clear(); }), ErrorCode::kConfig);
}

TEST(Residual, ZeroInputAndIdentityWeights) {
  auto p = ModelParams::initialize(3, small_hp());
  EXPECT_EQ(compute_residual(Tensor2(4, 3), p), Tensor2(4, 3));
  for (auto& w : p.residual) w = Tensor2::identity(3);
  const Tensor2 x{{1, 2, 3}, {0, 0.5, 4}};
  EXPECT_EQ(compute_residual(x, p), x);
}

TEST(Residual, MatchesStraightLineOracle) {
  const auto g = make_random_graph(15, 30, 5, 3);
  const auto p = ModelParams::initialize(5, small_hp(4));
  const auto ref = oracle::forward(g, p, 0.8, 0.1, 1.0);
  EXPECT_LE(max_abs_diff(compute_residual(g.attributes(), p), ref.r), 1e-12);
}

TEST(Attention, GammaZeroAndZeroResidual) {
  const auto p = ModelParams::initialize(5, small_hp());
  Rng rng(2);
  Tensor2 r(7, 5);
  for (double& v : r.data()) v = rng.uniform(0, 3);
  for (const auto& t : compute_attention(r, p, 0.0)) EXPECT_EQ(t, Tensor2(7, t.cols(), 1.0));
  for (const auto& t : compute_attention(Tensor2(7, 5), p, 2.0)) EXPECT_EQ(t, Tensor2(7, t.cols(), 1.0));
  for (const auto& t : compute_attention(r, p, 1.0)) {
    for (double v : t.data()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Attention, MonotoneInResidualWithNonnegativeWeights) {
  auto p = ModelParams::initialize(4, small_hp());
  for (auto& stack : p.attention)
    for (auto& w : stack)
      for (double& v : w.data()) v = std::abs(v);
  Rng rng(3);
  Tensor2 lo(1, 4), hi(1, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    lo(0, j) = rng.uniform(0, 1);
    hi(0, j) = lo(0, j) + rng.uniform(0, 1);
  }
  const auto a = compute_attention(lo, p, 1.0), b = compute_attention(hi, p, 1.0);
  for (std::size_t l = 0; l < a.size(); ++l)
    for (std::size_t i = 0; i < a[l].size(); ++i) EXPECT_LE(b[l].data()[i], a[l].data()[i]);
}

TEST(Encode, MatchesDenseOracleAndPlainGcn) {
  const auto g = make_random_graph(15, 30, 5, 5);
  const auto p = ModelParams::initialize(5, small_hp(6));
  const auto ref = oracle::forward(g, p, 0.8, 0.1, 1.0);
  const auto s = normalize_adjacency(g);
  const auto enc = encode(s.matrix, g.attributes(), ref.theta, p);
  ASSERT_EQ(enc.hidden.size(), 1u);
  EXPECT_LE(max_abs_diff(enc.hidden[0], ref.h1), 1e-12);
  EXPECT_LE(max_abs_diff(enc.z, ref.z), 1e-12);

  // all-ones attention is the plain two-layer GCN
  const std::vector<Tensor2> ones{Tensor2(15, 6, 1.0), Tensor2(15, 4, 1.0)};
  const auto plain = encode(s.matrix, g.attributes(), ones, p);
  const auto sd = s.matrix.to_dense();
  const auto h1 = oracle::dense_relu(oracle::dense_matmul(oracle::dense_matmul(sd, g.attributes()), p.gcn[0]));
  EXPECT_LE(max_abs_diff(plain.z, oracle::dense_relu(oracle::dense_matmul(oracle::dense_matmul(sd, h1), p.gcn[1]))),
            1e-12);
}

TEST(Encode, IsolatedNode) {
  const AttributedGraph g(1, {}, Tensor2{{0.3, -0.7, 1.1}});
  const auto p = ModelParams::initialize(3, small_hp(7));
  const std::vector<Tensor2> theta{Tensor2(1, 6, 0.5), Tensor2(1, 4, 1.0)};
  const auto enc = encode(normalize_adjacency(g).matrix, g.attributes(), theta, p);
  Tensor2 h = oracle::dense_relu(oracle::dense_matmul(g.attributes(), p.gcn[0]));
  for (double& v : h.data()) v *= 0.5;
  EXPECT_LE(max_abs_diff(enc.z, oracle::dense_relu(oracle::dense_matmul(h, p.gcn[1]))), 1e-15);
}

TEST(Decode, Structure) {
  EXPECT_EQ(decode_structure(Tensor2(3, 2)), Tensor2(3, 3, 0.5));
  EXPECT_NEAR(decode_structure(Tensor2{{2.0}})(0, 0), 0.98201379003790845, 1e-15);
  Rng rng(8);
  Tensor2 z(6, 3);
  for (double& v : z.data()) v = rng.normal();
  const auto a = decode_structure(z);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_EQ(a(i, j), a(j, i));
      EXPECT_GT(a(i, j), 0.0);
      EXPECT_LT(a(i, j), 1.0);
    }
}

TEST(Decode, Attributes) {
  auto hp = small_hp();
  const auto p = ModelParams::initialize(5, hp);
  EXPECT_EQ(decode_attributes(Tensor2(3, 4), p), Tensor2(3, 5));
  hp.decoder_layers = 1;
  const auto p1 = ModelParams::initialize(5, hp);
  ASSERT_EQ(p1.decoder.size(), 1u);
  Rng rng(9);
  Tensor2 z(3, 4);
  for (double& v : z.data()) v = rng.normal();
  EXPECT_EQ(decode_attributes(z, p1), matmul(z, p1.decoder[0]));
  EXPECT_LE(max_abs_diff(decode_attributes(z, p),
                         oracle::dense_matmul(oracle::dense_relu(oracle::dense_matmul(z, p.decoder[0])), p.decoder[1])),
            1e-12);
}

TEST(Loss, HandArithmetic) {
  const auto l = loss(Tensor2{{0}}, Tensor2{{1}}, Tensor2{{0.5}}, Tensor2{{0.2}}, Tensor2{{2}}, 0.8, 0.1);
  EXPECT_NEAR(l.structure, 0.25, 1e-15);
  EXPECT_NEAR(l.attribute, 0.36, 1e-15);
  EXPECT_NEAR(l.total, 0.338, 1e-15);
  const auto a0 = loss(Tensor2{{1}}, Tensor2{{1}}, Tensor2{{0.5}}, Tensor2{{0.2}}, Tensor2{{2}}, 0.0, 0.1);
  EXPECT_EQ(a0.total, a0.structure);
  const auto zero = loss(Tensor2{{1}}, Tensor2{{3}}, Tensor2{{1}}, Tensor2{{3}}, Tensor2{{2}}, 0.5, 0.0);
  EXPECT_EQ(zero.total, 0.0);
}

TEST(Forward, MatchesOracleAndInvariants) {
  const auto g = make_random_graph(25, 60, 6, 10);
  const auto hp = small_hp(11);
  const auto p = ModelParams::initialize(6, hp);
  const auto st = forward(g, normalize_adjacency(g), p, hp, true);
  const auto ref = oracle::forward(g, p, hp.alpha, hp.lambda, hp.gamma);
  EXPECT_LE(max_abs_diff(st.residual, ref.r), 1e-12);
  EXPECT_LE(max_abs_diff(st.z, ref.z), 1e-12);
  EXPECT_LE(max_abs_diff(st.a_hat, ref.a_hat), 1e-12);
  EXPECT_LE(max_abs_diff(st.x_hat, ref.x_hat), 1e-12);
  EXPECT_NEAR(st.e_s, ref.e_s, 1e-10);
  EXPECT_NEAR(st.e_a, ref.e_a, 1e-10);
  EXPECT_NEAR(st.loss, ref.loss, 1e-10);
  EXPECT_EQ(st.loss, (1 - hp.alpha) * st.e_s + hp.alpha * st.e_a);
  for (double v : st.residual.data()) EXPECT_GE(v, 0.0);
}

TEST(Forward, EmbeddingAttentionModes) {
  const auto g = make_random_graph(12, 20, 4, 12);
  auto hp = small_hp(13);
  const auto p = ModelParams::initialize(4, hp);
  const auto s = normalize_adjacency(g);
  hp.embedding_attention = EmbeddingAttention::kNone;
  const auto none = forward(g, s, p, hp);
  EXPECT_EQ(none.z_structure, none.z);
  EXPECT_EQ(none.z_attribute, none.z);
  hp.embedding_attention = EmbeddingAttention::kStructure;
  const auto st = forward(g, s, p, hp);
  EXPECT_EQ(st.z_structure, hadamard(st.z, st.attention.back()));
  EXPECT_EQ(st.z_attribute, st.z);
  EXPECT_EQ(parse_embedding_attention("attribute"), EmbeddingAttention::kAttribute);
  EXPECT_THROW(parse_embedding_attention("neither"), Error);
}

TEST(Forward, AblationEqualsPlainAutoencoder) {
  const auto g = make_random_graph(30, 70, 6, 14);
  auto hp = small_hp(15);
  hp.gamma = 0.0;
  hp.lambda = 0.0;
  const auto p = ModelParams::initialize(6, hp);
  const auto st = forward(g, normalize_adjacency(g), p, hp, true);
  const auto sd = oracle::dense_normalized(oracle::dense_adjacency(g));
  const auto h1 = oracle::dense_relu(oracle::dense_matmul(oracle::dense_matmul(sd, g.attributes()), p.gcn[0]));
  const auto z = oracle::dense_relu(oracle::dense_matmul(oracle::dense_matmul(sd, h1), p.gcn[1]));
  const auto x_hat = oracle::dense_matmul(oracle::dense_relu(oracle::dense_matmul(z, p.decoder[0])), p.decoder[1]);
  EXPECT_LE(max_abs_diff(st.z, z), 1e-10);
  EXPECT_LE(max_abs_diff(st.x_hat, x_hat), 1e-10);
  EXPECT_LE(max_abs_diff(st.a_hat, decode_structure(z)), 1e-10);
}

TEST(Train, GradientCheckOnSmallGraph) {
  const auto g = make_random_graph(20, 60, 8, 16);
  Hyperparams hp;
  hp.seed = 17;
  const auto rep = check_gradients(g, hp, ModelParams::initialize(8, hp));
  EXPECT_LT(rep.max_rel_error, 1e-4) << rep.worst_param << "[" << rep.worst_index << "] "
                                     << rep.worst_analytic << " vs " << rep.worst_numeric;
  EXPECT_GT(rep.checked, 10000u);
}

TEST(Train, OneEpochStepsEveryParameter) {
  const auto g = make_random_graph(20, 40, 5, 18);
  auto hp = small_hp(19);
  hp.epochs = 1;
  auto init = ModelParams::initialize(5, hp);
  std::vector<Tensor2> grads;
  {
    auto probe = init;
    TrainingSession s(g, hp, probe);
    s.forward();
    s.backward();
    grads = s.gradients();
  }
  const auto r = train(g, hp);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.history[0].epoch, 1u);
  EXPECT_EQ(r.params.adam.step, 1u);
  const auto before = std::as_const(init).named_tensors();
  const auto after = r.params.named_tensors();
  ASSERT_EQ(r.params.adam.moments.size(), before.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    // a parameter behind dead ReLUs has zero gradient; Adam then leaves it be
    for (std::size_t k = 0; k < grads[i].size(); ++k) {
      if (grads[i].data()[k] != 0.0) {
        EXPECT_NE(before[i].second->data()[k], after[i].second->data()[k]) << before[i].first;
      } else {
        EXPECT_EQ(before[i].second->data()[k], after[i].second->data()[k]) << before[i].first;
      }
    }
  }
}

TEST(Train, DeterministicAndDecreasing) {
  const auto g = make_random_graph(40, 100, 6, 20);
  auto hp = small_hp(21);
  hp.epochs = 30;
  const auto a = train(g, hp), b = train(g, hp);
  ASSERT_EQ(a.history.size(), 30u);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(a.history[i].loss, b.history[i].loss);
    EXPECT_EQ(a.history[i].e_s, b.history[i].e_s);
  }
  EXPECT_LT(a.history.back().loss, a.history.front().loss);
  EXPECT_EQ(format_history_csv(a.history).substr(0, 15), "epoch,E_S,E_A,L");
}

TEST(Train, SessionStateErrors) {
  const auto g = make_random_graph(10, 10, 3, 22);
  const auto hp = small_hp(23);
  auto p = ModelParams::initialize(3, hp);
  TrainingSession s(g, hp, p);
  EXPECT_EQ(code_of([&] { s.backward(); }), ErrorCode::kState);
  EXPECT_EQ(code_of([&] { s.step(); }), ErrorCode::kState);
}

TEST(Train, DivergenceNamesTheEpoch) {
  const auto g = make_random_graph(10, 20, 3, 32);
  auto hp = small_hp();
  hp.lr = 1e300;
  hp.epochs = 5;
  try {
    train(g, hp);
    FAIL() << "training with lr=1e300 stayed finite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos) << e.what();
  }
}

TEST(Scoring, StrategiesMatchDefinitions) {
  const auto g = make_random_graph(30, 60, 5, 24);
  auto hp = small_hp(25);
  const auto p = ModelParams::initialize(5, hp);
  const auto st = forward(g, normalize_adjacency(g), p, hp, true);
  const auto reports = score_all(g, p, hp);
  ASSERT_EQ(reports.size(), 4u);

  const auto res = oracle::row_norms(st.residual);
  const auto attr = oracle::row_norms(sub(g.attributes(), st.x_hat));
  const auto stru = oracle::row_norms(sub(g.adjacency().to_dense(), st.a_hat));
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_NEAR(reports[0].scores[i], res[i], 1e-12);
    EXPECT_NEAR(reports[1].scores[i], attr[i], 1e-12);
    EXPECT_NEAR(reports[2].scores[i], stru[i], 1e-12);
    EXPECT_NEAR(reports[3].scores[i], (1 - hp.alpha) * stru[i] + hp.alpha * attr[i], 1e-12);
  }
  for (const auto& r : reports) {
    EXPECT_EQ(r.scores, score_nodes(g, p, hp, r.strategy).scores);
  }
}

TEST(Scoring, CombinedAtAlphaOneIsAttribute) {
  const auto g = make_random_graph(20, 40, 4, 26);
  auto hp = small_hp(27);
  hp.alpha = 1.0;
  const auto p = ModelParams::initialize(4, hp);
  EXPECT_EQ(score_nodes(g, p, hp, Strategy::kCombined).scores,
            score_nodes(g, p, hp, Strategy::kAttribute).scores);
}

TEST(Scoring, ResidualIgnoresDecoders) {
  const auto g = make_random_graph(20, 40, 4, 28);
  auto hp = small_hp(29);
  auto p = ModelParams::initialize(4, hp);
  const auto before = score_nodes(g, p, hp, Strategy::kResidual).scores;
  for (auto& w : p.decoder) w.fill(0.123);
  for (auto& w : p.gcn) w.fill(-0.5);
  EXPECT_EQ(score_nodes(g, p, hp, Strategy::kResidual).scores, before);
}

TEST(Scoring, RankingTiesAndMonotoneInvariance) {
  const auto r = make_report(Strategy::kResidual, {0.5, 2.0, 0.5, 0.0, 2.0});
  EXPECT_EQ(r.ranking, (std::vector<std::size_t>{1, 4, 0, 2, 3}));
  std::vector<double> squashed;
  for (double s : r.scores) squashed.push_back(std::log1p(s) * 3.0 + 1.0);
  EXPECT_EQ(make_report(Strategy::kResidual, squashed).ranking, r.ranking);
  EXPECT_THROW(make_report(Strategy::kResidual, {1.0, -1.0}), Error);
  EXPECT_EQ(code_of([] { parse_strategy("dominant"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(parse_strategy("combined"), Strategy::kCombined);
}

TEST(Checkpoint, RoundTripReproducesScores) {
  const auto g = make_random_graph(25, 50, 5, 30);
  auto hp = small_hp(31);
  hp.epochs = 3;
  hp.embedding_attention = EmbeddingAttention::kAttribute;
  Checkpoint c{hp, train(g, hp).params, 5, 0, 99};
  const auto path = (std::filesystem::temp_directory_path() / "resgcn_ckpt_test.json").string();
  save_checkpoint(c, path);
  const auto back = load_checkpoint(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.root_seed, 99u);
  EXPECT_EQ(back.hp.embedding_attention, EmbeddingAttention::kAttribute);
  EXPECT_EQ(back.params.adam.step, 3u);
  const auto a = std::as_const(back.params).named_tensors();
  const auto b = std::as_const(c.params).named_tensors();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(*a[i].second, *b[i].second);
  for (auto s : kAllStrategies) {
    EXPECT_EQ(score_nodes(g, back.params, back.hp, s).scores, score_nodes(g, c.params, hp, s).scores);
  }
}

TEST(Checkpoint, RejectsForeignJson) {
  EXPECT_EQ(code_of([] { checkpoint_from_json({{"format", "other"}, {"version", 1}}); }),
            ErrorCode::kParse);
  auto j = checkpoint_to_json(Checkpoint{small_hp(), ModelParams::initialize(3, small_hp()), 3, 0, 0});
  j["tensors"].erase(0);
  EXPECT_EQ(code_of([&] { checkpoint_from_json(j); }), ErrorCode::kConfig);
}
