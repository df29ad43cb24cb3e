#pragma once

#include <string>
#include <vector>

#include "funclass/config.hpp"
#include "funclass/csv.hpp"
#include "funclass/trajectory.hpp"

namespace funclass {

struct RunOptions {
  std::string out_dir = ".";
  unsigned workers = 0;  // 0: use the hardware parallelism
  bool emit_svg = true;
  std::string input_path;  // trajectory csv consumed by classify-path
};

const std::vector<std::string>& subcommand_names();

// Tables behind the file-writing subcommands, exposed for direct testing.
CsvTable risk_curve_table(const ExperimentConfig& cfg, unsigned workers);
CsvTable margin_table(const ExperimentConfig& cfg, unsigned workers);
CsvTable knn_compare_table(const ExperimentConfig& cfg, unsigned workers);
CsvTable lowerbound_table(const ExperimentConfig& cfg, unsigned workers);
CsvTable classify_path_table(const ExperimentConfig& cfg, const Path& path,
                             const std::string& file_label);

// Runs one subcommand end to end and returns the paths of the files written.
std::vector<std::string> run_subcommand(const std::string& name,
                                        const ExperimentConfig& cfg,
                                        const RunOptions& opts);

}  // namespace funclass
