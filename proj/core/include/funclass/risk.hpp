#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "funclass/classifiers.hpp"
#include "funclass/config.hpp"
#include "funclass/sequence_model.hpp"

namespace funclass {

enum class RiskKind { misclassification, excess };

struct RiskEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  long long n_mc = 0;
  RiskKind kind = RiskKind::misclassification;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points_used = 0;
};

// A decision rule together with how many leading coordinates it reads, so
// samplers can stop generating noise the rule never looks at.
struct ClassifierRule {
  std::function<Label(const CoefVec&)> classify;
  int dims_needed = 0;
  std::string name;
};

struct RiskCurveRow {
  long long n = 0;
  int d = 0;
  int k = 0;  // 0 when the classifier takes no neighbor count
  double delta = 0.0;
  double excess_mean = 0.0;
  double excess_stderr = 0.0;
  double bayes_risk = 0.0;
  std::string classifier;
};

struct ExperimentResult {
  std::vector<RiskCurveRow> rows;
};

struct KnnFloorRow {
  long long n = 0;
  int k = 0;
  bool k_is_optimal = true;  // false for the largest-admissible companion row
  bool admissible = false;
  double excess_mean = 0.0;
  double excess_stderr = 0.0;
  double inv_k = 0.0;
};

struct SmoothnessProbe {
  double eta_ball = 0.0;    // posterior averaged over the ball hits
  double eta_center = 0.0;  // posterior at the ball center
  double lhs = 0.0;         // |eta_ball - eta_center|
  double lhs_std_err = 0.0;
  double mass = 0.0;        // mixture mass of the ball
  double mass_std_err = 0.0;
  long long hits = 0;
};

struct InsufficientSamplesError : std::runtime_error {
  long long hits;
  explicit InsufficientSamplesError(long long h)
      : std::runtime_error("smoothness_probe: only " + std::to_string(h) +
                           " hits inside the ball"),
        hits(h) {}
};

// Ready-made rules; each owns a copy of what it needs to classify.
ClassifierRule make_bayes_rule(const ModelPair& pair);
ClassifierRule make_truncated_bayes_rule(const ModelPair& pair, int d);
ClassifierRule make_plugin_rule(PluginModel model);
ClassifierRule make_knn_rule(KnnModel model);

double normal_cdf(double x);

// Misclassification risk of the optimal rule at separation delta.
double bayes_risk_exact(double delta);

// Monte Carlo misclassification risk of a rule under the pair's mixture.
RiskEstimate mc_risk(const ClassifierRule& rule, const ModelPair& pair,
                     long long n_mc, std::uint64_t seed);

// Monte Carlo excess risk over the optimal rule, using the conditional form
// E |2 eta - 1| 1{rule differs from the optimal rule}.
RiskEstimate mc_excess_risk(const ClassifierRule& rule, const ModelPair& pair,
                            long long n_mc, std::uint64_t seed);

// P(|eta - 1/2| <= eps) under the mixture.
RiskEstimate margin_prob(const ModelPair& pair, double eps, long long n_mc,
                         std::uint64_t seed);

// Closed-form envelope for the margin probability.
double margin_upper_bound(double delta, double eps);  // needs eps <= 1/8
double margin_lower_bound(double delta, double eps);  // needs eps < 1/4

// Crown constant and P(crown_delta * eps <= |eta - 1/2| <= eps); requires
// 0 < eps <= min(1/4, separation).
double crown_delta(double delta);
RiskEstimate crown_prob(const ModelPair& pair, double eps, long long n_mc,
                        std::uint64_t seed);

// Local regularity of the posterior for a d-dimensional two-Gaussian mixture
// with means 0 and shift: compares eta averaged over the ball B(x, r) with
// eta(x) and reports the mixture mass of the ball.
SmoothnessProbe smoothness_probe(const CoefVec& shift, const CoefVec& x,
                                 double r, long long n_mc, std::uint64_t seed);

// Holder-type constant 60 pi e d R^2 exp(R^2 / d).
double smoothness_constant(int d, double R);

// Neighbor counts k with 1/sqrt(k) >= d (k/n)^(2/d) and k <= n.
bool knn_admissible(long long k, long long n, int d);
long long max_admissible_k(long long n, int d);

// Ambient dimension the experiment samples in: cfg.ambient_D when positive
// (must cover what the d_rule can ask for), else max(256, 4 d_n(n_max), ...).
int ambient_dimension(const ExperimentConfig& cfg);

struct PairAt {
  ModelPair pair;
  double delta = 0.0;
};

// Class-mean pair behind grid row i: the fixed policy shares one pair across
// the grid, the coupled policy builds one per n at delta = R^e n^{-s e} with
// e = 1/(2s+1).
PairAt pair_for_index(const ExperimentConfig& cfg, std::size_t i, int D);

struct FittedClassifier {
  ClassifierRule rule;
  std::function<double(const CoefVec&)> posterior;  // estimate of P(Y=1 | x)
  int d = 0;
  int k = 0;  // 0 when the classifier has no neighbor count
};

// The classifier that replicate (n_idx, rep) of risk_curve trains, with its
// training randomness, so single points can be scored by the same model.
FittedClassifier fit_replicate(const ExperimentConfig& cfg,
                               const ModelPair& pair, long long n, int D,
                               std::size_t n_idx, std::size_t rep);

// Excess-risk curve over cfg.n_grid with cfg.mc_outer training replicates per
// n; rows are deterministic in cfg and independent of the worker count.
ExperimentResult risk_curve(const ExperimentConfig& cfg, unsigned workers = 1);

// Least squares of log(excess) on log(n); rows with non-positive means are
// dropped and fewer than 3 surviving rows is an error.
RateFit rate_fit(const ExperimentResult& result);
RateFit rate_fit(const std::vector<std::pair<double, double>>& n_and_mean);

// kNN excess against the exact low-dimensional optimal rule, with the
// admissibility of each neighbor count recorded.  When the standard k falls
// outside the admissible set, a companion row at the largest admissible k is
// added so the 1/k floor stays observable.  The pair dimension must be <= 8.
std::vector<KnnFloorRow> knn_floor_check(const ModelPair& pair,
                                         const std::vector<long long>& n_grid,
                                         long long n_mc, int outer_reps,
                                         std::uint64_t seed,
                                         unsigned workers = 1);

}  // namespace funclass
