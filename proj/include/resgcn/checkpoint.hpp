#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "resgcn/model.hpp"

namespace resgcn {

/// Everything needed to rescore a graph: architecture, weights, optimizer
/// state, and the preprocessing/seed context the model was trained under.
struct Checkpoint {
  Hyperparams hp;
  ModelParams params;
  std::size_t input_dim = 0;
  std::size_t pca_dim = 0;  // 0 = attributes used as-is
  std::uint64_t root_seed = 0;
};

nlohmann::json to_json(const Hyperparams& hp);
Hyperparams hyperparams_from_json(const nlohmann::json& j);

nlohmann::json checkpoint_to_json(const Checkpoint& c);
/// Throws ErrorCode::kParse for a malformed container, kConfig if the tensors
/// do not fit the recorded architecture.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace resgcn
