#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace funclass {

enum class Classifier { plugin, knn, truncated_bayes, bayes };
enum class DeltaPolicy { fixed, coupled };
enum class DRule { theorem1, fixed, split };
enum class KRule { optimal, fixed };

// Parsed key = value experiment description.  Required keys: s, R, n_grid,
// classifier.  Defaults for the rest are documented in the README.
struct ExperimentConfig {
  double s = 1.0;
  double R = 1.0;
  DeltaPolicy delta_policy = DeltaPolicy::fixed;
  double delta_fixed = 1.0;             // used when delta_policy == fixed
  std::vector<long long> n_grid;
  Classifier classifier = Classifier::plugin;
  DRule d_rule = DRule::theorem1;
  int d_fixed = 1;                      // used when d_rule == fixed
  KRule k_rule = KRule::optimal;
  int k_fixed = 1;                      // used when k_rule == fixed
  long long mc_inner = 20000;
  int mc_outer = 64;
  std::uint64_t master_seed = 1;
  int ambient_D = 0;                    // 0 = automatic sizing
  std::string output_path;              // empty = per-subcommand default name

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Raised with the offending line number and key in the message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& file);

// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

std::string to_string(Classifier c);
std::string to_string(DeltaPolicy p, double delta_fixed);
std::string to_string(DRule r, int d_fixed);
std::string to_string(KRule r, int k_fixed);

}  // namespace funclass
