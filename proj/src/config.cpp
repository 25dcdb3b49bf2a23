#include "resgcn/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "resgcn/error.hpp"
#include "resgcn/text.hpp"

namespace resgcn {
namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  fail(ErrorCode::kConfig, std::string(key) + ": expected " + expected + ", got '" +
                               std::string(value) + "'");
}

double to_real(std::string_view key, std::string_view v) {
  auto d = parse_double(trim(v));
  if (!d || !std::isfinite(*d)) bad_value(key, v, "a number");
  return *d;
}

std::size_t to_count(std::string_view key, std::string_view v) {
  auto i = parse_int(trim(v));
  if (!i || *i < 0) bad_value(key, v, "a non-negative integer");
  return static_cast<std::size_t>(*i);
}

std::uint64_t to_seed(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, v, "an unsigned 64-bit integer");
  }
  return out;
}

std::vector<std::size_t> to_counts(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  for (auto part : split(v, ',')) out.push_back(to_count(key, part));
  return out;
}

std::vector<double> to_reals(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto part : split(v, ',')) out.push_back(to_real(key, part));
  return out;
}

template <typename F>
auto rethrow_as_config(std::string_view key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    fail(ErrorCode::kConfig, std::string(key) + ": " + e.what());
  }
}

const std::map<std::string, std::pair<std::string, Setter>, std::less<>>& registry() {
  static const std::map<std::string, std::pair<std::string, Setter>, std::less<>> r = [] {
    std::map<std::string, std::pair<std::string, Setter>, std::less<>> m;
    auto add = [&m](std::string key, std::string help, Setter s) {
      m.emplace(std::move(key), std::make_pair(std::move(help), std::move(s)));
    };
    add("edges", "edge list path", [](RunConfig& c, std::string_view v) { c.edges = trim(v); });
    add("attributes", "attribute CSV path",
        [](RunConfig& c, std::string_view v) { c.attributes = trim(v); });
    add("labels", "labels CSV path", [](RunConfig& c, std::string_view v) { c.labels = trim(v); });
    add("checkpoint", "checkpoint JSON path",
        [](RunConfig& c, std::string_view v) { c.checkpoint = trim(v); });
    add("scores", "scores CSV path", [](RunConfig& c, std::string_view v) { c.scores = trim(v); });
    add("out", "output directory", [](RunConfig& c, std::string_view v) { c.out = trim(v); });
    add("seed", "root seed", [](RunConfig& c, std::string_view v) { c.seed = to_seed("seed", v); });
    add("pca_dim", "PCA target width, 0 disables",
        [](RunConfig& c, std::string_view v) { c.pca_dim = to_count("pca_dim", v); });
    add("pca_stage", "before | after (injection)", [](RunConfig& c, std::string_view v) {
      v = trim(v);
      if (v == "before") c.pca_stage = PcaStage::kBeforeInjection;
      else if (v == "after") c.pca_stage = PcaStage::kAfterInjection;
      else bad_value("pca_stage", v, "before or after");
    });
    add("s", "clique size", [](RunConfig& c, std::string_view v) {
      c.inject.clique_size = to_count("s", v);
    });
    add("t", "clique count", [](RunConfig& c, std::string_view v) {
      c.inject.clique_count = to_count("t", v);
    });
    add("k", "attribute candidate pool", [](RunConfig& c, std::string_view v) {
      c.inject.candidate_pool = to_count("k", v);
    });
    add("swap", "target | farthest (which node receives the far row)",
        [](RunConfig& c, std::string_view v) {
          c.inject.direction = rethrow_as_config("swap", [&] { return parse_swap_direction(trim(v)); });
        });
    add("alpha", "attribute weight in the loss",
        [](RunConfig& c, std::string_view v) { c.hp.alpha = to_real("alpha", v); });
    add("lambda", "residual weight in the attribute error",
        [](RunConfig& c, std::string_view v) { c.hp.lambda = to_real("lambda", v); });
    add("gamma", "attention sharpness",
        [](RunConfig& c, std::string_view v) { c.hp.gamma = to_real("gamma", v); });
    add("lr", "Adam learning rate", [](RunConfig& c, std::string_view v) { c.hp.lr = to_real("lr", v); });
    add("epochs", "training epochs",
        [](RunConfig& c, std::string_view v) { c.hp.epochs = to_count("epochs", v); });
    add("gcn_dims", "comma-separated GCN widths",
        [](RunConfig& c, std::string_view v) { c.hp.gcn_dims = to_counts("gcn_dims", v); });
    add("res_layers", "residual FC depth",
        [](RunConfig& c, std::string_view v) { c.hp.res_layers = to_count("res_layers", v); });
    add("att_layers", "FC depth of each attention stack",
        [](RunConfig& c, std::string_view v) { c.hp.att_layers = to_count("att_layers", v); });
    add("decoder_layers", "attribute decoder depth", [](RunConfig& c, std::string_view v) {
      c.hp.decoder_layers = to_count("decoder_layers", v);
    });
    add("embedding_attention", "both | structure | attribute | none",
        [](RunConfig& c, std::string_view v) {
          c.hp.embedding_attention = rethrow_as_config(
              "embedding_attention", [&] { return parse_embedding_attention(trim(v)); });
        });
    add("ks", "comma-separated K list",
        [](RunConfig& c, std::string_view v) { c.ks = to_counts("ks", v); });
    add("strategy", "all | residual | attribute | structure | combined",
        [](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "all") {
            c.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
            return;
          }
          c.strategies.clear();
          for (auto part : split(v, ',')) {
            c.strategies.push_back(
                rethrow_as_config("strategy", [&] { return parse_strategy(trim(part)); }));
          }
        });
    add("sweep_param", "alpha | lambda", [](RunConfig& c, std::string_view v) {
      c.sweep_param = trim(v);
    });
    add("sweep_grid", "comma-separated values",
        [](RunConfig& c, std::string_view v) { c.sweep_grid = to_reals("sweep_grid", v); });
    add("sweep_strategy", "strategy ranked at every sweep point",
        [](RunConfig& c, std::string_view v) {
          c.sweep_strategy =
              rethrow_as_config("sweep_strategy", [&] { return parse_strategy(trim(v)); });
        });
    add("threads", "sweep workers, 0 = all cores",
        [](RunConfig& c, std::string_view v) { c.threads = to_count("threads", v); });
    add("nodes", "synth: node count",
        [](RunConfig& c, std::string_view v) { c.sbm.nodes = to_count("nodes", v); });
    add("blocks", "synth: block count",
        [](RunConfig& c, std::string_view v) { c.sbm.blocks = to_count("blocks", v); });
    add("p_in", "synth: within-block edge probability",
        [](RunConfig& c, std::string_view v) { c.sbm.p_in = to_real("p_in", v); });
    add("p_out", "synth: cross-block edge probability",
        [](RunConfig& c, std::string_view v) { c.sbm.p_out = to_real("p_out", v); });
    add("dim", "synth: attribute width",
        [](RunConfig& c, std::string_view v) { c.sbm.dim = to_count("dim", v); });
    add("mean_scale", "synth: std of block means",
        [](RunConfig& c, std::string_view v) { c.sbm.mean_scale = to_real("mean_scale", v); });
    add("noise", "synth: per-node noise std",
        [](RunConfig& c, std::string_view v) { c.sbm.noise = to_real("noise", v); });
    return m;
  }();
  return r;
}

void require_file(const std::string& key, const std::string& path) {
  if (path.empty()) fail(ErrorCode::kConfig, key + " is required");
  if (!std::filesystem::is_regular_file(path)) {
    fail(ErrorCode::kConfig, key + " file not found: " + path);
  }
}

void require_probability(const char* key, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(ErrorCode::kConfig, std::string(key) + " must lie in [0, 1]");
  }
}

}  // namespace

std::string_view to_string(PcaStage s) {
  return s == PcaStage::kBeforeInjection ? "before" : "after";
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto& r = registry();
  auto it = r.find(trim(key));
  if (it == r.end()) fail(ErrorCode::kConfig, "unknown key '" + std::string(key) + "'");
  it->second.second(*this, value);
}

void RunConfig::validate(Command cmd) const {
  if (out.empty()) fail(ErrorCode::kConfig, "out is required");
  rethrow_as_config("hyperparams", [&] { hp.validate(); });
  if (inject.clique_size < 2) fail(ErrorCode::kConfig, "s must be >= 2");
  if (inject.clique_count < 1) fail(ErrorCode::kConfig, "t must be >= 1");
  if (inject.candidate_pool < 1) fail(ErrorCode::kConfig, "k must be >= 1");
  if (ks.empty()) fail(ErrorCode::kConfig, "ks is empty");
  for (auto k : ks) {
    if (k < 1) fail(ErrorCode::kConfig, "every K must be >= 1");
  }
  if (strategies.empty()) fail(ErrorCode::kConfig, "strategy list is empty");

  switch (cmd) {
    case Command::kSynth:
      if (sbm.nodes < 1) fail(ErrorCode::kConfig, "nodes must be >= 1");
      if (sbm.blocks < 1 || sbm.blocks > sbm.nodes) {
        fail(ErrorCode::kConfig, "blocks must lie in [1, nodes]");
      }
      if (sbm.dim < 1) fail(ErrorCode::kConfig, "dim must be >= 1");
      require_probability("p_in", sbm.p_in);
      require_probability("p_out", sbm.p_out);
      if (!(sbm.mean_scale >= 0.0) || !(sbm.noise >= 0.0)) {
        fail(ErrorCode::kConfig, "mean_scale and noise must be >= 0");
      }
      break;
    case Command::kInject:
    case Command::kTrain:
      require_file("edges", edges);
      require_file("attributes", attributes);
      break;
    case Command::kScore:
      require_file("edges", edges);
      require_file("attributes", attributes);
      require_file("checkpoint", checkpoint);
      break;
    case Command::kEval:
      require_file("labels", labels);
      if (scores.empty()) {
        // strategy comparison straight from a model
        require_file("edges", edges);
        require_file("attributes", attributes);
        require_file("checkpoint", checkpoint);
      } else {
        require_file("scores", scores);
      }
      break;
    case Command::kSweep:
      require_file("edges", edges);
      require_file("attributes", attributes);
      require_file("labels", labels);
      if (sweep_param != "alpha" && sweep_param != "lambda") {
        fail(ErrorCode::kConfig, "sweep_param must be alpha or lambda");
      }
      if (sweep_grid.empty()) fail(ErrorCode::kConfig, "sweep_grid is empty");
      for (double v : sweep_grid) {
        Hyperparams probe = hp;
        (sweep_param == "alpha" ? probe.alpha : probe.lambda) = v;
        rethrow_as_config("sweep_grid", [&] { probe.validate(); });
      }
      break;
    case Command::kSelfcheck:
      break;
  }
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const auto keys = [] {
    std::vector<std::pair<std::string, std::string>> v;
    for (const auto& [k, entry] : registry()) v.emplace_back(k, entry.first);
    return v;
  }();
  return keys;
}

void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source) {
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kConfig, source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      fail(ErrorCode::kConfig, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    fail(ErrorCode::kConfig, "config file not found: " + path);
  }
  apply_config_text(cfg, read_file(path), path);
}

}  // namespace resgcn
