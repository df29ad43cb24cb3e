#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funclass/sequence_model.hpp"

namespace funclass {

// Uniform grid t_k = k/M, k = 0..M, on [0,1].
struct TimeGrid {
  int M = 2048;

  explicit TimeGrid(int steps = 2048);
  double dt() const { return 1.0 / static_cast<double>(M); }
  double t(int k) const { return static_cast<double>(k) / M; }
};

// Sample path values at the grid points; values[k] = X(t_k), X(0) = 0.
struct Path {
  TimeGrid grid;
  std::vector<double> values;
};

// Trigonometric basis: phi_1 = 1, phi_2k = sqrt(2) cos(2 pi k t),
// phi_2k+1 = sqrt(2) sin(2 pi k t).
double basis_eval(int j, double t);

// Drift of each class tabulated at the left endpoints of one grid; lets many
// paths share one O(M * D) setup.
struct DriftTable {
  TimeGrid grid;
  std::vector<double> drift1;  // label 1: sum_j f_j phi_j(t_k)
  std::vector<double> drift0;  // label 0

  DriftTable(const ModelPair& pair, const TimeGrid& grid);
};

// Euler scheme with caller-supplied standard normal increments xi (size M):
// X_{k+1} = X_k + drift[k] dt + sqrt(dt) xi_k.
Path euler_path(const std::vector<double>& drift, const TimeGrid& grid,
                const std::vector<double>& xi);

Path synthesize_path(const DriftTable& table, int label, std::uint64_t seed);
Path synthesize_path(const ModelPair& pair, int label, const TimeGrid& grid,
                     std::uint64_t seed);

// Left-endpoint stochastic integral sum_k phi_j(t_k) (X_{k+1} - X_k).
double ito_coefficient(const Path& path, int j);

// Coefficients j = 1..d of the path.
CoefVec path_to_coefvec(const Path& path, int d);

// Two-column CSV "t,x" with one row per grid point.
std::string path_to_csv(const Path& path);
Path path_from_csv(const std::string& text);
void write_path_csv(const std::string& file, const Path& path);
Path read_path_csv(const std::string& file);

}  // namespace funclass
