#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "funclass/risk.hpp"
#include "funclass/sequence_model.hpp"

namespace funclass {

// Sign words over {-1,+1}^m with pairwise Hamming distance > m/4.
struct PackingSet {
  int m = 0;
  std::vector<std::vector<int>> words;
};

// Mean vectors (delta, eps * w) for w in the packing, living in R^d.
struct ThetaSet {
  double delta = 0.0;
  double eps = 0.0;
  int d = 0;
  PackingSet packing;
  std::vector<CoefVec> thetas;
};

// Planar cone {z + a u + b v : ab > 0}; angle is the opening between u and v.
struct ConeSpec {
  CoefVec z;
  CoefVec u;
  CoefVec v;
  double angle = 0.0;
};

struct AngleCheck {
  double lower = 0.0;  // sqrt(d-1) eps / (2 delta)
  double upper = 0.0;  // pi / 2
  double min_angle = 0.0;
  double max_angle = 0.0;
  std::vector<std::pair<int, int>> violations;
  bool pass = false;
};

struct MinimaxBudget {
  double value = 0.0;
  std::string regime;  // "slow" or "fast"
};

// Randomized greedy search for ceil(exp(m/8)) words, capped at 10^6
// candidates; the pairwise property is re-verified exactly before returning.
PackingSet vg_packing(int m, std::uint64_t seed);

// Requires d >= 7 and delta >= sqrt(d) * eps.
ThetaSet build_theta_set(double delta, double eps, int d, std::uint64_t seed);

// Angle in [0, pi] between two nonzero vectors.
double pairwise_angle(const CoefVec& a, const CoefVec& b);

AngleCheck angle_bounds_check(const ThetaSet& tset);

// Validates that u and v span the plane and records their opening angle.
ConeSpec make_cone(const CoefVec& z, const CoefVec& u, const CoefVec& v);

// Standard Gaussian mass of the open double cone (boundary excluded).
RiskEstimate cone_mass_mc(const ConeSpec& cone, long long n_mc,
                          std::uint64_t seed);

// Closed-form floor (angle / 2 pi) exp(-|z|^2).
double cone_mass_lower_bound(const ConeSpec& cone);

// Divergence between the n-sample training laws of two mean vectors:
// n |theta - theta0|^2 / 4.
double kl_training(const CoefVec& theta, const CoefVec& theta0, long long n);

// (avg_kl + log 2) / log N; needs N >= 2.  The count may be fractional so
// nominal packing sizes like e^{m/8} evaluate exactly.
double fano_bound(double avg_kl, double n_hypotheses);

// P(the two centered nearest-centroid rules disagree) for W ~ N(0, I_d).
RiskEstimate l1_classifier_distance_mc(const CoefVec& theta,
                                       const CoefVec& theta_prime,
                                       long long n_mc, std::uint64_t seed);

// Closed-form floor sqrt(d-1) eps e^(-delta^2) / (4 pi delta) for that
// disagreement probability over a theta-set pair.
double l1_distance_lower_bound(double delta, double eps, int d);

// Worst-case excess-risk floor at sample size n; delta in (0, R/2].
MinimaxBudget minimax_budget(long long n, const SobolevSpec& spec,
                             double delta);

// (d-1) eps^2 d^(2s) <= R^2 - delta^2, which keeps every theta inside the
// ellipsoid of radius R.
bool theta_set_sobolev_admissible(const ThetaSet& tset,
                                  const SobolevSpec& spec);

}  // namespace funclass
