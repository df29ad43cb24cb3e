#pragma once

#include <cstdint>
#include <vector>

#include "funclass/sequence_model.hpp"

namespace funclass {

using Label = int;  // 0 or 1

// Class-mean estimates on the first d coordinates; a mean is all zeros when
// its class is absent from the training set.
struct PluginModel {
  int d = 0;
  CoefVec theta_hat;  // class 1
  CoefVec mu_hat;     // class 0
  int n1 = 0;
  int n0 = 0;
};

// Training points projected to the first d coordinates, in training order.
struct KnnModel {
  int d = 0;
  int k = 1;
  std::vector<CoefVec> points;
  std::vector<Label> labels;
};

// logistic(e) without overflow for any finite e.
double stable_logistic(double e);

// <f-g, x> - |f|^2/2 + |g|^2/2 over the first d coordinates; the optimal
// rule thresholds this at 0 and the posterior is its logistic transform.
double bayes_linear_statistic(const ModelPair& pair, const CoefVec& x, int d);

// Posterior probability of label 1 given coefficients x (all D coordinates):
// logistic(<f-g, x> - |f|^2/2 + |g|^2/2).
double eta_full(const ModelPair& pair, const CoefVec& x);

// 1 iff eta_full >= 1/2, decided by the sign of the linear statistic.
Label bayes_classify(const ModelPair& pair, const CoefVec& x);

// Same quantities after projecting the model and x to d coordinates.
double eta_d(const ModelPair& pair, const CoefVec& x, int d);
Label truncated_bayes_classify(const ModelPair& pair, const CoefVec& x, int d);

PluginModel fit_plugin(const Dataset& data, int d);

// 1 iff x is at least as close to theta_hat as to mu_hat on the first d
// coordinates (ties to 1).
Label plugin_classify(const PluginModel& model, const CoefVec& x);

// Estimated posterior logistic(<theta_hat - mu_hat, x_d> - |theta_hat|^2/2
// + |mu_hat|^2/2); agrees with plugin_classify at the 1/2 threshold.
double eta_hat(const PluginModel& model, const CoefVec& x);

// Truncation level floor((R^2 n)^(1/(2s+1))), at least 1.
int dn_rule(long long n, const SobolevSpec& spec);

// Neighbor count floor(n^(4/(4+d))), at least 1.
int optimal_k(long long n, int d);

KnnModel fit_knn(const Dataset& data, int d, int k);

// Majority vote over the k nearest training points in R^d; distance ties are
// broken by training index, and a split vote returns 0.
Label knn_classify(const KnnModel& model, const CoefVec& x);

// Fraction of the k nearest neighbors labeled 1; knn_classify thresholds
// this strictly above 1/2.
double knn_posterior(const KnnModel& model, const CoefVec& x);

// Dimension selection on the first-half split: candidates are scored by
// validation error of a kNN fit inside the first half, ties to the smaller d.
int sample_split_select_d(const Dataset& data,
                          const std::vector<int>& candidates,
                          std::uint64_t seed);

}  // namespace funclass
