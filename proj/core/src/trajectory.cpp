#include "funclass/trajectory.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "funclass/csv.hpp"
#include "funclass/rng.hpp"

namespace funclass {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TimeGrid::TimeGrid(int steps) : M(steps) {
  if (M < 2) throw std::invalid_argument("TimeGrid: need M >= 2");
}

double basis_eval(int j, double t) {
  if (j < 1) throw std::invalid_argument("basis_eval: j < 1");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("basis_eval: t outside [0,1]");
  }
  if (j == 1) return 1.0;
  int k = j / 2;
  double phase = kTwoPi * k * t;
  double amp = std::sqrt(2.0);
  return (j % 2 == 0) ? amp * std::cos(phase) : amp * std::sin(phase);
}

DriftTable::DriftTable(const ModelPair& pair, const TimeGrid& g) : grid(g) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument("DriftTable: pair dimension mismatch");
  }
  int D = static_cast<int>(pair.f.size());
  drift1.assign(static_cast<std::size_t>(grid.M), 0.0);
  drift0.assign(static_cast<std::size_t>(grid.M), 0.0);
  for (int j = 1; j <= D; ++j) {
    double fj = pair.f[static_cast<std::size_t>(j - 1)];
    double gj = pair.g[static_cast<std::size_t>(j - 1)];
    if (fj == 0.0 && gj == 0.0) continue;
    for (int k = 0; k < grid.M; ++k) {
      double phi = basis_eval(j, grid.t(k));
      drift1[static_cast<std::size_t>(k)] += fj * phi;
      drift0[static_cast<std::size_t>(k)] += gj * phi;
    }
  }
}

Path euler_path(const std::vector<double>& drift, const TimeGrid& grid,
                const std::vector<double>& xi) {
  if (drift.size() != static_cast<std::size_t>(grid.M) ||
      xi.size() != static_cast<std::size_t>(grid.M)) {
    throw std::invalid_argument("euler_path: need M drift and M noise values");
  }
  double dt = grid.dt();
  double sdt = std::sqrt(dt);
  Path path{grid, std::vector<double>(static_cast<std::size_t>(grid.M) + 1)};
  path.values[0] = 0.0;
  for (int k = 0; k < grid.M; ++k) {
    path.values[static_cast<std::size_t>(k) + 1] =
        path.values[static_cast<std::size_t>(k)] +
        drift[static_cast<std::size_t>(k)] * dt +
        sdt * xi[static_cast<std::size_t>(k)];
  }
  return path;
}

Path synthesize_path(const DriftTable& table, int label, std::uint64_t seed) {
  if (label != 0 && label != 1) {
    throw std::invalid_argument("synthesize_path: label must be 0 or 1");
  }
  Rng rng = Rng::stream(seed, stream_tag::path);
  std::vector<double> xi(static_cast<std::size_t>(table.grid.M));
  for (double& v : xi) v = rng.normal();
  return euler_path(label ? table.drift1 : table.drift0, table.grid, xi);
}

Path synthesize_path(const ModelPair& pair, int label, const TimeGrid& grid,
                     std::uint64_t seed) {
  DriftTable table(pair, grid);
  return synthesize_path(table, label, seed);
}

double ito_coefficient(const Path& path, int j) {
  if (path.values.size() != static_cast<std::size_t>(path.grid.M) + 1) {
    throw std::invalid_argument("ito_coefficient: path/grid size mismatch");
  }
  double acc = 0.0;
  for (int k = 0; k < path.grid.M; ++k) {
    double inc = path.values[static_cast<std::size_t>(k) + 1] -
                 path.values[static_cast<std::size_t>(k)];
    acc += basis_eval(j, path.grid.t(k)) * inc;
  }
  return acc;
}

CoefVec path_to_coefvec(const Path& path, int d) {
  if (d < 0) throw std::invalid_argument("path_to_coefvec: d < 0");
  CoefVec out(static_cast<std::size_t>(d));
  for (int j = 1; j <= d; ++j) {
    out[static_cast<std::size_t>(j - 1)] = ito_coefficient(path, j);
  }
  return out;
}

std::string path_to_csv(const Path& path) {
  CsvTable table;
  table.header = {"t", "x"};
  table.rows.reserve(path.values.size());
  for (int k = 0; k <= path.grid.M; ++k) {
    table.rows.push_back({fmt_sig9(path.grid.t(k)),
                          fmt_sig9(path.values[static_cast<std::size_t>(k)])});
  }
  return to_csv(table);
}

namespace {

void fail_row(std::size_t row, const std::string& why) {
  throw std::runtime_error("path csv: row " + std::to_string(row) + ": " +
                           why);
}

}  // namespace

Path path_from_csv(const std::string& text) {
  std::vector<double> ts;
  std::vector<double> xs;
  std::size_t pos = 0;
  std::size_t row = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    ++row;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "t,x") fail_row(row, "expected header 't,x'");
      saw_header = true;
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) fail_row(row, "expected two columns");
    const char* tb = line.c_str();
    char* tend = nullptr;
    double t = std::strtod(tb, &tend);
    if (tend != tb + comma) fail_row(row, "bad t value");
    const char* xb = line.c_str() + comma + 1;
    char* xend = nullptr;
    double x = std::strtod(xb, &xend);
    if (xend == xb || *xend != '\0') fail_row(row, "bad x value");
    if (!std::isfinite(t) || !std::isfinite(x)) fail_row(row, "non-finite");
    ts.push_back(t);
    xs.push_back(x);
  }
  if (!saw_header) throw std::runtime_error("path csv: missing header");
  if (ts.size() < 3) throw std::runtime_error("path csv: need at least M = 2");
  int M = static_cast<int>(ts.size()) - 1;
  TimeGrid grid(M);
  for (int k = 0; k <= M; ++k) {
    if (std::fabs(ts[static_cast<std::size_t>(k)] - grid.t(k)) > 1e-9) {
      fail_row(static_cast<std::size_t>(k) + 2, "non-uniform time grid");
    }
  }
  if (std::fabs(xs[0]) > 1e-12) {
    throw std::runtime_error("path csv: path must start at 0");
  }
  xs[0] = 0.0;
  return Path{grid, std::move(xs)};
}

void write_path_csv(const std::string& file, const Path& path) {
  write_file(file, path_to_csv(path));
}

Path read_path_csv(const std::string& file) {
  return path_from_csv(read_file(file));
}

}  // namespace funclass
