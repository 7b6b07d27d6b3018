// tools/main.cc

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sea/config.h"
#include "sea/error.h"
#include "sea/pipeline.h"
#include "sea/synth.h"

namespace {

const std::vector<std::string> kStageNames = {
    "features", "pretrain", "train",    "embed",
    "segment",  "cluster",  "discover", "evaluate"};

int run(int argc, char** argv) {
  CLI::App app{"Unsupervised spoken term discovery"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value file, applied before command line keys");
  long long seed = -1;
  app.add_option("--seed", seed, "shorthand for rng_seed plus synth_seed")
      ->check(CLI::NonNegativeNumber);
  int jobs = 1;
  auto* jobs_opt =
      app.add_option("--jobs", jobs, "concurrent utterances per stage");
  std::string workdir;
  auto* workdir_opt =
      app.add_option("--workdir", workdir, "stage artifact directory");
  bool force = false;
  app.add_flag("--force", force, "recompute stages whose outputs exist");

  sea::PipelineConfig cfg;
  std::map<std::string, std::string> cli_keys;
  for (const sea::ConfigKey& key : sea::config_keys(cfg)) {
    if (key.name == "jobs" || key.name == "force" || key.name == "workdir") {
      continue;  // covered by the dedicated global flags
    }
    app.add_option_function<std::string>(
        "--" + key.name,
        [&cli_keys, name = key.name](const std::string& v) {
          cli_keys[name] = v;
        },
        key.type + ", default " + key.get());
  }

  for (const std::string& name : kStageNames) {
    app.add_subcommand(name, "run the " + name + " stage")->fallthrough();
  }
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "run the configured stages in order");
  pipeline_cmd->fallthrough();

  auto* plot_cmd = app.add_subcommand(
      "plot", "write a self-similarity pixmap for one utterance");
  plot_cmd->fallthrough();
  std::string plot_utt, plot_out;
  plot_cmd->add_option("utt", plot_utt, "utterance id")->required();
  plot_cmd->add_option("out", plot_out, "output .ppm path")->required();

  auto* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic corpus with gold tiers");
  synth_cmd->fallthrough();
  std::string synth_out;
  synth_cmd->add_option("--out", synth_out,
                        "output directory (default: the work directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!config_path.empty()) sea::apply_config_file(cfg, config_path);
  if (seed >= 0) {
    sea::set_config_key(cfg, "rng_seed", std::to_string(seed));
    sea::set_config_key(cfg, "synth_seed", std::to_string(seed));
  }
  for (const auto& [key, value] : cli_keys) {
    sea::set_config_key(cfg, key, value);
  }
  if (jobs_opt->count()) cfg.jobs = jobs;
  if (workdir_opt->count()) cfg.workdir = workdir;
  if (force) cfg.force = true;

  std::ostream* log = &std::cerr;
  for (const std::string& name : kStageNames) {
    if (app.got_subcommand(name)) {
      sea::PipelineConfig one = cfg;
      one.stages = name;
      sea::run_pipeline(one, log);
      return 0;
    }
  }
  if (app.got_subcommand(pipeline_cmd)) {
    sea::run_pipeline(cfg, log);
    return 0;
  }
  if (app.got_subcommand(plot_cmd)) {
    sea::make_plot(cfg, plot_utt, plot_out, log);
    return 0;
  }
  if (app.got_subcommand(synth_cmd)) {
    if (synth_out.empty()) synth_out = cfg.workdir;
    const sea::SynthCorpus corpus = sea::gen_synthetic_corpus(cfg.synth);
    sea::write_synthetic_corpus(corpus, synth_out);
    *log << "synth: wrote " << corpus.features.size() << " utterances to "
         << synth_out << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sea::Error& e) {
    std::cerr << "sea: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sea: " << e.what() << "\n";
    return 1;
  }
}
