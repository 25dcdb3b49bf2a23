#include "resgcn/checkpoint.hpp"

#include "resgcn/error.hpp"
#include "resgcn/text.hpp"

namespace resgcn {
namespace {

constexpr const char* kFormat = "resgcn-checkpoint";
constexpr int kVersion = 1;

nlohmann::json tensor_json(const Tensor2& t) {
  return {{"rows", t.rows()},
          {"cols", t.cols()},
          {"data", std::vector<double>(t.data().begin(), t.data().end())}};
}

Tensor2 tensor_from_json(const nlohmann::json& j) {
  auto data = j.at("data").get<std::vector<double>>();
  return Tensor2(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                 std::move(data));
}

}  // namespace

nlohmann::json to_json(const Hyperparams& hp) {
  return {{"alpha", hp.alpha},
          {"lambda", hp.lambda},
          {"gamma", hp.gamma},
          {"lr", hp.lr},
          {"epochs", hp.epochs},
          {"gcn_dims", hp.gcn_dims},
          {"res_layers", hp.res_layers},
          {"att_layers", hp.att_layers},
          {"decoder_layers", hp.decoder_layers},
          {"embedding_attention", std::string(to_string(hp.embedding_attention))},
          {"seed", hp.seed}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& j) {
  Hyperparams hp;
  hp.alpha = j.at("alpha").get<double>();
  hp.lambda = j.at("lambda").get<double>();
  hp.gamma = j.at("gamma").get<double>();
  hp.lr = j.at("lr").get<double>();
  hp.epochs = j.at("epochs").get<std::size_t>();
  hp.gcn_dims = j.at("gcn_dims").get<std::vector<std::size_t>>();
  hp.res_layers = j.at("res_layers").get<std::size_t>();
  hp.att_layers = j.at("att_layers").get<std::size_t>();
  hp.decoder_layers = j.at("decoder_layers").get<std::size_t>();
  hp.embedding_attention =
      parse_embedding_attention(j.at("embedding_attention").get<std::string>());
  hp.seed = j.at("seed").get<std::uint64_t>();
  return hp;
}

nlohmann::json checkpoint_to_json(const Checkpoint& c) {
  nlohmann::json tensors = nlohmann::json::array();
  nlohmann::json moments = nlohmann::json::array();
  const auto named = c.params.named_tensors();
  for (std::size_t i = 0; i < named.size(); ++i) {
    auto t = tensor_json(*named[i].second);
    t["name"] = named[i].first;
    tensors.push_back(std::move(t));
  }
  for (const auto& m : c.params.adam.moments) {
    moments.push_back({{"first", tensor_json(m.first)}, {"second", tensor_json(m.second)}});
  }
  return {{"format", kFormat},
          {"version", kVersion},
          {"hyperparams", to_json(c.hp)},
          {"input_dim", c.input_dim},
          {"pca_dim", c.pca_dim},
          {"root_seed", c.root_seed},
          {"tensors", std::move(tensors)},
          {"adam", {{"step", c.params.adam.step}, {"moments", std::move(moments)}}}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      fail(ErrorCode::kParse, "not a resgcn checkpoint");
    }
    if (j.at("version").get<int>() != kVersion) {
      fail(ErrorCode::kParse, "unsupported checkpoint version");
    }
    Checkpoint c;
    c.hp = hyperparams_from_json(j.at("hyperparams"));
    c.hp.validate();
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.pca_dim = j.at("pca_dim").get<std::size_t>();
    c.root_seed = j.at("root_seed").get<std::uint64_t>();
    c.params = ModelParams::initialize(c.input_dim, c.hp);
    auto named = c.params.named_tensors();
    const auto& tensors = j.at("tensors");
    if (tensors.size() != named.size()) {
      fail(ErrorCode::kConfig, "checkpoint holds " + std::to_string(tensors.size()) +
                                   " tensors, architecture needs " +
                                   std::to_string(named.size()));
    }
    for (std::size_t i = 0; i < named.size(); ++i) {
      if (tensors[i].at("name").get<std::string>() != named[i].first) {
        fail(ErrorCode::kConfig, "checkpoint tensor " + std::to_string(i) + " is " +
                                     tensors[i].at("name").get<std::string>() + ", expected " +
                                     named[i].first);
      }
      *named[i].second = tensor_from_json(tensors[i]);
    }
    c.params.check_shapes(c.input_dim, c.hp);
    const auto& adam = j.at("adam");
    c.params.adam.step = adam.at("step").get<std::uint64_t>();
    for (const auto& m : adam.at("moments")) {
      c.params.adam.moments.push_back(
          {tensor_from_json(m.at("first")), tensor_from_json(m.at("second"))});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  write_file(path, checkpoint_to_json(c).dump() + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace resgcn
