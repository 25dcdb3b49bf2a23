#include "resgcn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <thread>

#include "resgcn/checkpoint.hpp"
#include "resgcn/error.hpp"
#include "resgcn/graph_io.hpp"
#include "resgcn/pca.hpp"
#include "resgcn/text.hpp"
#include "resgcn/train.hpp"

namespace resgcn {
namespace {

namespace fs = std::filesystem;

struct PendingFile {
  std::string path;
  std::string contents;
};

// All outputs are buffered so a late failure leaves the directory untouched.
CommandOutput write_all(const RunConfig& cfg, std::vector<PendingFile> files,
                        std::vector<std::string> summary) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + cfg.out + ": " + ec.message());
  CommandOutput out;
  for (auto& f : files) {
    const std::string path = (fs::path(cfg.out) / f.path).string();
    write_file(path, f.contents);
    out.files.push_back(path);
  }
  out.summary = std::move(summary);
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

LoadedGraph load_inputs(const RunConfig& cfg, bool with_labels) {
  std::optional<std::string> labels;
  if (with_labels) labels = cfg.labels;
  return load_graph(cfg.edges, cfg.attributes, labels);
}

std::string stats_line(const LoadedGraph& lg) {
  const auto& g = lg.graph;
  std::string s = "graph: n=" + std::to_string(g.node_count()) +
                  " m=" + std::to_string(g.edge_count()) + " d=" + std::to_string(g.dim());
  if (lg.stats.self_loops) s += " dropped_self_loops=" + std::to_string(lg.stats.self_loops);
  if (lg.stats.duplicates) s += " merged_duplicates=" + std::to_string(lg.stats.duplicates);
  return s;
}

}  // namespace

std::size_t reduce_attributes(AttributedGraph& g, std::size_t pca_dim) {
  if (pca_dim == 0) return 0;
  const std::size_t k = std::min({pca_dim, g.node_count(), g.dim()});
  g = g.with_attributes(pca_reduce(g.attributes(), k));
  return k;
}

std::string format_scores_csv(const ScoreReport& report) {
  std::string out = "rank,node,score\n";
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const std::size_t v = report.ranking[r];
    out += std::to_string(r + 1) + "," + std::to_string(v) + "," +
           format_double(report.scores[v]) + "\n";
  }
  return out;
}

ScoreReport parse_scores_csv(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::size_t, double>> rows;  // (node, score) in rank order
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1 && line == "rank,node,score") continue;
    const auto cells = split(line, ',');
    const auto where = source + ":" + std::to_string(line_no);
    if (cells.size() != 3) fail(ErrorCode::kParse, where + ": expected rank,node,score");
    auto rank = parse_int(trim(cells[0]));
    auto node = parse_int(trim(cells[1]));
    auto score = parse_double(trim(cells[2]));
    if (!rank || !node || !score || *node < 0) fail(ErrorCode::kParse, where + ": bad row");
    if (static_cast<std::size_t>(*rank) != rows.size() + 1) {
      fail(ErrorCode::kParse, where + ": ranks must run 1, 2, ... in order");
    }
    rows.emplace_back(static_cast<std::size_t>(*node), *score);
  }
  const std::size_t n = rows.size();
  if (n == 0) fail(ErrorCode::kParse, source + ": no score rows");
  ScoreReport report{Strategy::kResidual, std::vector<double>(n, 0.0), {}};
  std::vector<bool> seen(n, false);
  for (auto [node, score] : rows) {
    if (node >= n || seen[node]) {
      fail(ErrorCode::kParse, source + ": nodes must be a permutation of 0.." +
                                  std::to_string(n - 1));
    }
    seen[node] = true;
    report.scores[node] = score;
    report.ranking.push_back(node);
  }
  return report;
}

std::string format_sweep_csv(const std::string& param, const std::vector<SweepRow>& rows) {
  std::string out = param + ",auc";
  if (!rows.empty()) {
    for (const auto& [k, v] : rows.front().result.precision_at) out += ",precision@" + std::to_string(k);
    for (const auto& [k, v] : rows.front().result.recall_at) out += ",recall@" + std::to_string(k);
  }
  out += ",final_L\n";
  for (const auto& row : rows) {
    out += format_double(row.value) + "," + format_double(row.result.auc);
    for (const auto& [k, v] : row.result.precision_at) out += "," + format_double(v);
    for (const auto& [k, v] : row.result.recall_at) out += "," + format_double(v);
    out += "," + format_double(row.final_loss) + "\n";
  }
  return out;
}

CommandOutput run_synth(const RunConfig& cfg) {
  cfg.validate(Command::kSynth);
  SbmSpec spec = cfg.sbm;
  spec.seed = derive_seed(cfg.seed, "synth");
  const auto sbm = make_sbm(spec);
  std::string blocks = "node_id,block\n";
  for (std::size_t v = 0; v < sbm.block.size(); ++v) {
    blocks += std::to_string(v) + "," + std::to_string(sbm.block[v]) + "\n";
  }
  return write_all(cfg,
                   {{"edges.txt", format_edge_list(sbm.graph)},
                    {"attributes.csv", format_attributes_csv(sbm.graph.attributes())},
                    {"blocks.csv", std::move(blocks)}},
                   {"synth: n=" + std::to_string(sbm.graph.node_count()) +
                    " m=" + std::to_string(sbm.graph.edge_count())});
}

CommandOutput run_inject(const RunConfig& cfg) {
  cfg.validate(Command::kInject);
  auto lg = load_inputs(cfg, false);
  InjectionSpec spec = cfg.inject;
  spec.seed = derive_seed(cfg.seed, "inject");
  spec.validate(lg.graph.node_count());

  std::size_t reduced = 0;
  if (cfg.pca_stage == PcaStage::kBeforeInjection) {
    reduced = reduce_attributes(lg.graph, cfg.pca_dim);
  }
  auto result = inject_benchmark(lg.graph, spec);
  auto manifest = injection_manifest(result, spec);
  manifest["root_seed"] = cfg.seed;
  manifest["pca"] = {{"stage", std::string(to_string(cfg.pca_stage))}, {"applied_dim", reduced}};

  std::vector<std::string> summary{stats_line(lg)};
  summary.push_back("anomalies: " + std::to_string(spec.anomalies_per_kind()) + " structural + " +
                    std::to_string(spec.anomalies_per_kind()) + " attribute, " +
                    std::to_string(result.added_edges.size()) + " edges added");
  for (const auto& w : result.warnings) summary.push_back("warning: " + w);
  return write_all(cfg,
                   {{"edges.txt", format_edge_list(result.graph)},
                    {"attributes.csv", format_attributes_csv(result.graph.attributes())},
                    {"labels.csv", format_labels_csv(result.labels)},
                    {"manifest.json", dump(manifest)}},
                   std::move(summary));
}

CommandOutput run_train(const RunConfig& cfg) {
  cfg.validate(Command::kTrain);
  auto lg = load_inputs(cfg, false);
  Checkpoint ckpt;
  ckpt.root_seed = cfg.seed;
  ckpt.pca_dim = cfg.pca_stage == PcaStage::kAfterInjection
                     ? reduce_attributes(lg.graph, cfg.pca_dim)
                     : 0;
  ckpt.input_dim = lg.graph.dim();
  ckpt.hp = cfg.hp;
  ckpt.hp.seed = derive_seed(cfg.seed, "init");
  auto result = train(lg.graph, ckpt.hp);
  ckpt.params = std::move(result.params);

  const auto& h = result.history;
  std::vector<std::string> summary{stats_line(lg)};
  summary.push_back("L: " + format_double(h.front().loss) + " -> " + format_double(h.back().loss) +
                    " over " + std::to_string(h.size()) + " epochs");
  return write_all(cfg,
                   {{"checkpoint.json", checkpoint_to_json(ckpt).dump() + "\n"},
                    {"history.csv", format_history_csv(h)}},
                   std::move(summary));
}

namespace {

AttributedGraph graph_for_checkpoint(const RunConfig& cfg, const Checkpoint& ckpt) {
  auto lg = load_inputs(cfg, false);
  reduce_attributes(lg.graph, ckpt.pca_dim);
  if (lg.graph.dim() != ckpt.input_dim) {
    fail(ErrorCode::kDimensionMismatch,
         "checkpoint expects " + std::to_string(ckpt.input_dim) + " attribute columns, input has " +
             std::to_string(lg.graph.dim()));
  }
  return std::move(lg.graph);
}

}  // namespace

CommandOutput run_score(const RunConfig& cfg) {
  cfg.validate(Command::kScore);
  const auto ckpt = load_checkpoint(cfg.checkpoint);
  const auto g = graph_for_checkpoint(cfg, ckpt);
  std::vector<PendingFile> files;
  for (const auto& report : score_all(g, ckpt.params, ckpt.hp)) {
    if (std::find(cfg.strategies.begin(), cfg.strategies.end(), report.strategy) ==
        cfg.strategies.end()) {
      continue;
    }
    files.push_back({"scores_" + std::string(to_string(report.strategy)) + ".csv",
                     format_scores_csv(report)});
  }
  return write_all(cfg, std::move(files), {"scored " + std::to_string(g.node_count()) + " nodes"});
}

CommandOutput run_eval(const RunConfig& cfg) {
  cfg.validate(Command::kEval);
  if (!cfg.scores.empty()) {
    const auto report = parse_scores_csv(read_file(cfg.scores), cfg.scores);
    const auto labels = load_labels(cfg.labels, report.scores.size());
    const auto r = evaluate(report, labels, cfg.ks);
    return write_all(cfg, {{"eval.json", dump(to_json(r))}, {"eval.csv", format_eval_csv(r)}},
                     {"auc=" + format_double(r.auc)});
  }
  const auto ckpt = load_checkpoint(cfg.checkpoint);
  const auto g = graph_for_checkpoint(cfg, ckpt);
  const auto labels = load_labels(cfg.labels, g.node_count());
  const auto rows = compare_strategies(g, ckpt.params, ckpt.hp, labels, cfg.ks);
  nlohmann::json j = nlohmann::json::object();
  std::vector<std::string> summary;
  for (const auto& row : rows) {
    j[std::string(to_string(row.strategy))] = to_json(row.result);
    summary.push_back(std::string(to_string(row.strategy)) + ": auc=" +
                      format_double(row.result.auc));
  }
  return write_all(cfg,
                   {{"comparison.json", dump(j)}, {"comparison.csv", format_comparison_csv(rows)}},
                   std::move(summary));
}

std::vector<SweepRow> sweep(const AttributedGraph& g, const Labels& labels, const RunConfig& cfg) {
  const std::size_t points = cfg.sweep_grid.size();
  std::vector<SweepRow> rows(points);
  std::vector<std::exception_ptr> errors(points);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      try {
        Hyperparams hp = cfg.hp;
        hp.seed = derive_seed(cfg.seed, "init");
        (cfg.sweep_param == "alpha" ? hp.alpha : hp.lambda) = cfg.sweep_grid[i];
        auto trained = train(g, hp);
        const auto report = score_nodes(g, trained.params, hp, cfg.sweep_strategy);
        rows[i] = {cfg.sweep_grid[i], evaluate(report, labels, cfg.ks),
                   trained.history.back().loss};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, points);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

CommandOutput run_sweep(const RunConfig& cfg) {
  cfg.validate(Command::kSweep);
  auto lg = load_inputs(cfg, true);
  if (cfg.pca_stage == PcaStage::kAfterInjection) reduce_attributes(lg.graph, cfg.pca_dim);
  const auto rows = sweep(lg.graph, *lg.labels, cfg);
  std::vector<std::string> summary;
  for (const auto& r : rows) {
    summary.push_back(cfg.sweep_param + "=" + format_double(r.value) +
                      ": auc=" + format_double(r.result.auc));
  }
  return write_all(cfg, {{"sweep_" + cfg.sweep_param + ".csv", format_sweep_csv(cfg.sweep_param, rows)}},
                   std::move(summary));
}

}  // namespace resgcn
