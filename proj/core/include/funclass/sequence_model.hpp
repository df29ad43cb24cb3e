#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace funclass {

// Basis coefficients of a function; entry i holds the coefficient of basis
// index j = i + 1.
using CoefVec = std::vector<double>;

// Smoothness s and radius R of the ellipsoid sum_j c_j^2 j^(2s) <= R^2.
struct SobolevSpec {
  double s = 1.0;
  double R = 1.0;
};

// Class-conditional mean functions: label 1 drifts along f, label 0 along g.
struct ModelPair {
  CoefVec f;
  CoefVec g;
};

struct LabeledPoint {
  CoefVec x;
  int y = 0;  // 0 or 1
};

struct Dataset {
  std::vector<LabeledPoint> points;
};

enum class BoundaryProfile { spike, poly_decay, random_signs };

double l2_dot(const CoefVec& a, const CoefVec& b);
double l2_norm_sq(const CoefVec& v);
double l2_norm(const CoefVec& v);

// Weighted energy sum_j c_j^2 j^(2s); membership in the ball is energy <= R^2.
double sobolev_norm_sq(const CoefVec& h, double s);

// Zeroes every coordinate beyond d; d in [0, dim].
CoefVec project(const CoefVec& h, int d);

// L2 distance between the two class means, optionally after projection to d.
double separation(const ModelPair& pair);
double separation(const ModelPair& pair, int d);

// A function on the sphere of the ellipsoid (energy == R^2), dimension D.
CoefVec make_boundary_function(const SobolevSpec& spec, BoundaryProfile profile,
                               std::uint64_t seed, int D = 256);

// Pair with f - g = delta * e_1 and a common filler in coordinates >= 2 that
// puts both means on the sphere of the ellipsoid.  Requires delta <= 2R.
ModelPair make_pair_with_separation(const SobolevSpec& spec, double delta,
                                    std::uint64_t seed, int D = 256);

// n labeled draws: y ~ Bernoulli(1/2), x_j = (y ? f_j : g_j) + N(0,1).
// Point i consumes only the stream derived from (seed, i).
Dataset sample_dataset(const ModelPair& pair, int n, std::uint64_t seed);

// Draws one point into x (resized to dims) using the stream for (seed, index);
// label is returned.  Sampling dims < D yields a prefix of the full-D draw.
int sample_point_prefix(const ModelPair& pair, int dims, std::uint64_t seed,
                        std::uint64_t index, CoefVec& x);

// Highest coordinate where f and g differ (0 if f == g); the classification
// problem is unchanged by coordinates above it.
int pair_support(const ModelPair& pair);

std::string to_string(BoundaryProfile profile);

}  // namespace funclass
