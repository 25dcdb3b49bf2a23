#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "resgcn/config.hpp"
#include "resgcn/error.hpp"
#include "resgcn/pipeline.hpp"
#include "resgcn/selfcheck.hpp"

namespace {

using resgcn::Command;
using resgcn::ErrorCode;

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int report(std::string_view kind, const std::string& message, int code) {
  std::cerr << "error: " << kind << ": " << one_line(message) << "\n";
  return code;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kCapacity:
      return 1;
    default:
      return 2;
  }
}

struct SubcommandArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, SubcommandArgs& args) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("-c,--config", args.config_file, "key = value config file");
  sub->add_option("--set", args.sets, "key=value override (repeatable)");
  for (const auto& [key, desc] : resgcn::config_keys()) {
    sub->add_option("--" + key, args.flags[key], desc);
  }
  return sub;
}

resgcn::RunConfig build_config(CLI::App& sub, const SubcommandArgs& args) {
  resgcn::RunConfig cfg;
  if (!args.config_file.empty()) resgcn::apply_config_file(cfg, args.config_file);
  for (const auto& [key, value] : args.flags) {
    if (sub.count("--" + key) > 0) cfg.set(key, value);
  }
  for (const auto& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      resgcn::fail(ErrorCode::kConfig, "--set expects key=value, got '" + s + "'");
    }
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return cfg;
}

void print(const resgcn::CommandOutput& out) {
  for (const auto& line : out.summary) std::cout << line << "\n";
  for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ResGCN anomaly detection on attributed networks"};
  app.require_subcommand(1);

  struct Entry {
    Command cmd;
    const char* name;
    const char* help;
  };
  const std::vector<Entry> entries{
      {Command::kSynth, "synth", "generate a stochastic block model graph"},
      {Command::kInject, "inject", "inject structural and attribute anomalies"},
      {Command::kTrain, "train", "train a model, write checkpoint and loss history"},
      {Command::kScore, "score", "score nodes with a checkpoint"},
      {Command::kEval, "eval", "evaluate scores (or all strategies) against labels"},
      {Command::kSweep, "sweep", "train and evaluate over an alpha or lambda grid"},
      {Command::kSelfcheck, "selfcheck", "run gradient and oracle checks"},
  };
  std::vector<SubcommandArgs> args(entries.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    subs.push_back(add_command(app, entries[i].name, entries[i].help, args[i]));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 1);
  }

  try {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const auto cfg = build_config(*subs[i], args[i]);
      switch (entries[i].cmd) {
        case Command::kSynth: print(resgcn::run_synth(cfg)); break;
        case Command::kInject: print(resgcn::run_inject(cfg)); break;
        case Command::kTrain: print(resgcn::run_train(cfg)); break;
        case Command::kScore: print(resgcn::run_score(cfg)); break;
        case Command::kEval: print(resgcn::run_eval(cfg)); break;
        case Command::kSweep: print(resgcn::run_sweep(cfg)); break;
        case Command::kSelfcheck: {
          bool ok = true;
          for (const auto& line : resgcn::run_selfcheck(cfg.seed)) {
            std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << " " << line.detail << "\n";
            ok = ok && line.pass;
          }
          if (!ok) return report("numeric", "selfcheck failed", 2);
          break;
        }
      }
    }
  } catch (const resgcn::Error& e) {
    return report(resgcn::to_string(e.code()), e.what(), exit_code(e.code()));
  } catch (const std::exception& e) {
    return report("internal", e.what(), 2);
  }
  return 0;
}
