#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resgcn/inject.hpp"
#include "resgcn/model.hpp"
#include "resgcn/scoring.hpp"
#include "resgcn/synth.hpp"

namespace resgcn {

/// Whether PCA is fit on the clean attributes (inside `inject`) or on what the
/// detector is given (inside `train`/`score`).
enum class PcaStage { kBeforeInjection, kAfterInjection };
std::string_view to_string(PcaStage s);

enum class Command { kSynth, kInject, kTrain, kScore, kEval, kSweep, kSelfcheck };

struct RunConfig {
  std::string edges;
  std::string attributes;
  std::string labels;
  std::string checkpoint;
  std::string scores;
  std::string out = "out";

  std::uint64_t seed = 0;  // root; stages get derive_seed(seed, name)
  std::size_t pca_dim = 20;  // 0 disables
  PcaStage pca_stage = PcaStage::kAfterInjection;

  InjectionSpec inject;  // seed field is overwritten from the root seed
  Hyperparams hp;        // likewise
  SbmSpec sbm;
  std::vector<std::size_t> ks{50, 100, 200, 300};
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};

  std::string sweep_param = "alpha";
  std::vector<double> sweep_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  Strategy sweep_strategy = Strategy::kResidual;
  std::size_t threads = 0;  // 0 = hardware concurrency

  /// Sets one key from its textual value. Unknown keys and malformed values
  /// raise ErrorCode::kConfig.
  void set(std::string_view key, std::string_view value);
  /// Range checks plus existence of every input path `cmd` reads.
  void validate(Command cmd) const;
};

/// Every key accepted by RunConfig::set, with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// "key = value" lines; '#' starts a comment.
void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source);
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace resgcn
