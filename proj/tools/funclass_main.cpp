#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "funclass/config.hpp"
#include "funclass/experiments.hpp"

namespace {

const char* subcommand_help(const std::string& name) {
  if (name == "risk-curve") {
    return "excess risk of the configured classifier over the n grid";
  }
  if (name == "margin") {
    return "margin probabilities against their closed-form envelopes";
  }
  if (name == "knn-compare") {
    return "plug-in vs nearest-neighbor excess risk on shared training sets";
  }
  if (name == "lowerbound") {
    return "verification report for the lower-bound constructions";
  }
  if (name == "classify-path") {
    return "classify one trajectory csv with the configured classifier";
  }
  return "synthesize labeled trajectories and a manifest";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"white-noise classification experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned workers = 0;
  std::uint64_t seed = 0;
  std::string input_path;

  for (const std::string& name : funclass::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, subcommand_help(name));
    sub->add_option("--config", config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed override")
        ->envname("FUNCLASS_SEED");
    sub->add_option("--workers", workers,
                    "worker threads (0 = hardware parallelism)");
    sub->add_option("--out", out_dir, "output directory");
    if (name == "classify-path") {
      sub->add_option("input", input_path, "trajectory csv to classify")
          ->required()
          ->check(CLI::ExistingFile);
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    funclass::ExperimentConfig cfg = funclass::load_config(config_path);
    if (sub->count("--seed") > 0) cfg.master_seed = seed;

    funclass::RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    opts.input_path = input_path;

    for (const std::string& file :
         funclass::run_subcommand(sub->get_name(), cfg, opts)) {
      std::printf("%s\n", file.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "funclass: %s\n", e.what());
    return 1;
  }
  return 0;
}
