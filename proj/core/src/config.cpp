#include "funclass/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "funclass/csv.hpp"

namespace funclass {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(std::size_t line, const std::string& why) {
  throw ConfigError("config line " + std::to_string(line) + ": " + why);
}

double parse_double(const std::string& v, std::size_t line,
                    const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  double x = std::strtod(begin, &end);
  if (end != begin + v.size() || v.empty() || errno == ERANGE) {
    fail(line, "key '" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

long long parse_ll(const std::string& v, std::size_t line,
                   const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  long long x = std::strtoll(begin, &end, 10);
  if (end != begin + v.size() || v.empty() || errno == ERANGE) {
    fail(line, "key '" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t parse_u64(const std::string& v, std::size_t line,
                        const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long x = std::strtoull(begin, &end, 10);
  if (end != begin + v.size() || v.empty() || v[0] == '-' ||
      errno == ERANGE) {
    fail(line, "key '" + key + "' expects an unsigned integer, got '" + v +
                   "'");
  }
  return static_cast<std::uint64_t>(x);
}

// Formats a double so parsing recovers the exact value.
std::string fmt_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool have_s = false;
  bool have_r = false;
  bool have_grid = false;
  bool have_classifier = false;

  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string stripped = raw;
    std::size_t hash = stripped.find('#');
    if (hash != std::string::npos) stripped.resize(hash);
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(line, "expected 'key = value', got '" + trim(raw) + "'");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");

    if (key == "s") {
      cfg.s = parse_double(value, line, key);
      if (!(cfg.s > 0.0)) fail(line, "s must be > 0");
      have_s = true;
    } else if (key == "R") {
      cfg.R = parse_double(value, line, key);
      if (!(cfg.R > 0.0)) fail(line, "R must be > 0");
      have_r = true;
    } else if (key == "delta_policy") {
      if (value == "coupled") {
        cfg.delta_policy = DeltaPolicy::coupled;
      } else if (value.rfind("fixed:", 0) == 0) {
        cfg.delta_policy = DeltaPolicy::fixed;
        cfg.delta_fixed = parse_double(value.substr(6), line, key);
        if (!(cfg.delta_fixed > 0.0)) fail(line, "fixed delta must be > 0");
      } else {
        fail(line, "delta_policy must be 'fixed:<x>' or 'coupled'");
      }
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "n_grid has an empty entry");
        long long n = parse_ll(item, line, key);
        if (n < 1) fail(line, "n_grid entries must be >= 1");
        cfg.n_grid.push_back(n);
      }
      if (cfg.n_grid.empty()) fail(line, "n_grid must be non-empty");
      for (std::size_t i = 1; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
          fail(line, "n_grid must be strictly increasing");
        }
      }
      have_grid = true;
    } else if (key == "classifier") {
      if (value == "plugin") {
        cfg.classifier = Classifier::plugin;
      } else if (value == "knn") {
        cfg.classifier = Classifier::knn;
      } else if (value == "truncated_bayes") {
        cfg.classifier = Classifier::truncated_bayes;
      } else if (value == "bayes") {
        cfg.classifier = Classifier::bayes;
      } else {
        fail(line,
             "classifier must be one of plugin|knn|truncated_bayes|bayes");
      }
      have_classifier = true;
    } else if (key == "d_rule") {
      if (value == "theorem1") {
        cfg.d_rule = DRule::theorem1;
      } else if (value == "split") {
        cfg.d_rule = DRule::split;
      } else if (value.rfind("fixed:", 0) == 0) {
        cfg.d_rule = DRule::fixed;
        cfg.d_fixed =
            static_cast<int>(parse_ll(value.substr(6), line, key));
        if (cfg.d_fixed < 1) fail(line, "fixed d must be >= 1");
      } else {
        fail(line, "d_rule must be 'theorem1', 'fixed:<d>' or 'split'");
      }
    } else if (key == "k_rule") {
      if (value == "optimal") {
        cfg.k_rule = KRule::optimal;
      } else if (value.rfind("fixed:", 0) == 0) {
        cfg.k_rule = KRule::fixed;
        cfg.k_fixed =
            static_cast<int>(parse_ll(value.substr(6), line, key));
        if (cfg.k_fixed < 1) fail(line, "fixed k must be >= 1");
      } else {
        fail(line, "k_rule must be 'optimal' or 'fixed:<k>'");
      }
    } else if (key == "mc_inner") {
      cfg.mc_inner = parse_ll(value, line, key);
      if (cfg.mc_inner < 1) fail(line, "mc_inner must be >= 1");
    } else if (key == "mc_outer") {
      cfg.mc_outer = static_cast<int>(parse_ll(value, line, key));
      if (cfg.mc_outer < 1) fail(line, "mc_outer must be >= 1");
    } else if (key == "master_seed") {
      cfg.master_seed = parse_u64(value, line, key);
    } else if (key == "ambient_D") {
      cfg.ambient_D = static_cast<int>(parse_ll(value, line, key));
      if (cfg.ambient_D < 0) fail(line, "ambient_D must be >= 0");
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (!have_s) throw ConfigError("config: missing required key 's'");
  if (!have_r) throw ConfigError("config: missing required key 'R'");
  if (!have_grid) throw ConfigError("config: missing required key 'n_grid'");
  if (!have_classifier) {
    throw ConfigError("config: missing required key 'classifier'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& file) {
  return parse_config(read_file(file));
}

std::string to_string(Classifier c) {
  switch (c) {
    case Classifier::plugin:
      return "plugin";
    case Classifier::knn:
      return "knn";
    case Classifier::truncated_bayes:
      return "truncated_bayes";
    case Classifier::bayes:
      return "bayes";
  }
  return "unknown";
}

std::string to_string(DeltaPolicy p, double delta_fixed) {
  return p == DeltaPolicy::coupled ? "coupled"
                                   : "fixed:" + fmt_exact(delta_fixed);
}

std::string to_string(DRule r, int d_fixed) {
  switch (r) {
    case DRule::theorem1:
      return "theorem1";
    case DRule::split:
      return "split";
    case DRule::fixed:
      return "fixed:" + std::to_string(d_fixed);
  }
  return "unknown";
}

std::string to_string(KRule r, int k_fixed) {
  return r == KRule::optimal ? "optimal" : "fixed:" + std::to_string(k_fixed);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "s = " << fmt_exact(cfg.s) << '\n';
  out << "R = " << fmt_exact(cfg.R) << '\n';
  out << "delta_policy = " << to_string(cfg.delta_policy, cfg.delta_fixed)
      << '\n';
  out << "n_grid = ";
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (i) out << ',';
    out << cfg.n_grid[i];
  }
  out << '\n';
  out << "classifier = " << to_string(cfg.classifier) << '\n';
  out << "d_rule = " << to_string(cfg.d_rule, cfg.d_fixed) << '\n';
  out << "k_rule = " << to_string(cfg.k_rule, cfg.k_fixed) << '\n';
  out << "mc_inner = " << cfg.mc_inner << '\n';
  out << "mc_outer = " << cfg.mc_outer << '\n';
  out << "master_seed = " << cfg.master_seed << '\n';
  out << "ambient_D = " << cfg.ambient_D << '\n';
  out << "output_path = " << cfg.output_path << '\n';
  return out.str();
}

}  // namespace funclass
