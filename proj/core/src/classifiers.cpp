#include "funclass/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "funclass/rng.hpp"

namespace funclass {

double stable_logistic(double e) {
  if (e >= 0.0) {
    double z = std::exp(-e);
    return 1.0 / (1.0 + z);
  }
  double z = std::exp(e);
  return z / (1.0 + z);
}

namespace {

void check_pair(const ModelPair& pair, const char* where) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument(std::string(where) +
                                ": pair dimension mismatch");
  }
}

void check_dims(std::size_t have, int need, const char* where) {
  if (need < 0 || have < static_cast<std::size_t>(need)) {
    throw std::invalid_argument(std::string(where) +
                                ": point has fewer coordinates than required");
  }
}

}  // namespace

double bayes_linear_statistic(const ModelPair& pair, const CoefVec& x, int d) {
  check_pair(pair, "bayes_linear_statistic");
  if (d < 0 || static_cast<std::size_t>(d) > pair.f.size()) {
    throw std::invalid_argument("bayes_linear_statistic: d out of range");
  }
  check_dims(x.size(), d, "bayes_linear_statistic");
  double dot = 0.0;
  double norm_f = 0.0;
  double norm_g = 0.0;
  for (int i = 0; i < d; ++i) {
    double fi = pair.f[static_cast<std::size_t>(i)];
    double gi = pair.g[static_cast<std::size_t>(i)];
    dot += (fi - gi) * x[static_cast<std::size_t>(i)];
    norm_f += fi * fi;
    norm_g += gi * gi;
  }
  return dot - 0.5 * norm_f + 0.5 * norm_g;
}

double eta_full(const ModelPair& pair, const CoefVec& x) {
  check_pair(pair, "eta_full");
  if (x.size() != pair.f.size()) {
    throw std::invalid_argument("eta_full: x dimension mismatch");
  }
  return stable_logistic(
      bayes_linear_statistic(pair, x, static_cast<int>(pair.f.size())));
}

Label bayes_classify(const ModelPair& pair, const CoefVec& x) {
  check_pair(pair, "bayes_classify");
  if (x.size() != pair.f.size()) {
    throw std::invalid_argument("bayes_classify: x dimension mismatch");
  }
  return bayes_linear_statistic(pair, x, static_cast<int>(pair.f.size())) >= 0.0
             ? 1
             : 0;
}

double eta_d(const ModelPair& pair, const CoefVec& x, int d) {
  check_pair(pair, "eta_d");
  if (d < 0 || static_cast<std::size_t>(d) > pair.f.size()) {
    throw std::invalid_argument("eta_d: d out of range");
  }
  check_dims(x.size(), d, "eta_d");
  return stable_logistic(bayes_linear_statistic(pair, x, d));
}

Label truncated_bayes_classify(const ModelPair& pair, const CoefVec& x,
                               int d) {
  check_pair(pair, "truncated_bayes_classify");
  if (d < 0 || static_cast<std::size_t>(d) > pair.f.size()) {
    throw std::invalid_argument("truncated_bayes_classify: d out of range");
  }
  check_dims(x.size(), d, "truncated_bayes_classify");
  return bayes_linear_statistic(pair, x, d) >= 0.0 ? 1 : 0;
}

PluginModel fit_plugin(const Dataset& data, int d) {
  if (d < 1) throw std::invalid_argument("fit_plugin: d < 1");
  PluginModel model;
  model.d = d;
  model.theta_hat.assign(static_cast<std::size_t>(d), 0.0);
  model.mu_hat.assign(static_cast<std::size_t>(d), 0.0);
  for (const LabeledPoint& p : data.points) {
    check_dims(p.x.size(), d, "fit_plugin");
    if (p.y != 0 && p.y != 1) {
      throw std::invalid_argument("fit_plugin: label must be 0 or 1");
    }
    CoefVec& mean = p.y ? model.theta_hat : model.mu_hat;
    (p.y ? model.n1 : model.n0) += 1;
    for (int i = 0; i < d; ++i) {
      mean[static_cast<std::size_t>(i)] += p.x[static_cast<std::size_t>(i)];
    }
  }
  if (model.n1 > 0) {
    for (double& v : model.theta_hat) v /= model.n1;
  }
  if (model.n0 > 0) {
    for (double& v : model.mu_hat) v /= model.n0;
  }
  return model;
}

Label plugin_classify(const PluginModel& model, const CoefVec& x) {
  check_dims(x.size(), model.d, "plugin_classify");
  double dist1 = 0.0;
  double dist0 = 0.0;
  for (int i = 0; i < model.d; ++i) {
    double xi = x[static_cast<std::size_t>(i)];
    double d1 = xi - model.theta_hat[static_cast<std::size_t>(i)];
    double d0 = xi - model.mu_hat[static_cast<std::size_t>(i)];
    dist1 += d1 * d1;
    dist0 += d0 * d0;
  }
  return dist1 <= dist0 ? 1 : 0;
}

double eta_hat(const PluginModel& model, const CoefVec& x) {
  check_dims(x.size(), model.d, "eta_hat");
  double dot = 0.0;
  double norm1 = 0.0;
  double norm0 = 0.0;
  for (int i = 0; i < model.d; ++i) {
    double th = model.theta_hat[static_cast<std::size_t>(i)];
    double mu = model.mu_hat[static_cast<std::size_t>(i)];
    dot += (th - mu) * x[static_cast<std::size_t>(i)];
    norm1 += th * th;
    norm0 += mu * mu;
  }
  return stable_logistic(dot - 0.5 * norm1 + 0.5 * norm0);
}

namespace {

// True iff base^exp <= bound, computed exactly in 128-bit arithmetic.
bool int_pow_leq(unsigned long long base, int exp, unsigned __int128 bound) {
  if (base == 0) return true;
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    if (acc > bound / base) return false;
    acc *= base;
  }
  return acc <= bound;
}

}  // namespace

int dn_rule(long long n, const SobolevSpec& spec) {
  if (n < 1) throw std::invalid_argument("dn_rule: n < 1");
  if (!(spec.s > 0.0) || !(spec.R > 0.0)) {
    throw std::invalid_argument("dn_rule: need s > 0 and R > 0");
  }
  double target = spec.R * spec.R * static_cast<double>(n);
  double p = 2.0 * spec.s + 1.0;
  long long k = static_cast<long long>(std::floor(std::pow(target, 1.0 / p)));
  if (k < 1) k = 1;
  // pow can land one off the true floor; settle it against k^p <= target.
  auto fits = [&](long long v) {
    return std::pow(static_cast<double>(v), p) <= target * (1.0 + 1e-12);
  };
  while (fits(k + 1)) ++k;
  while (k > 1 && !fits(k)) --k;
  return static_cast<int>(k);
}

int optimal_k(long long n, int d) {
  if (n < 1) throw std::invalid_argument("optimal_k: n < 1");
  if (d < 1) throw std::invalid_argument("optimal_k: d < 1");
  unsigned __int128 bound = 1;
  for (int i = 0; i < 4; ++i) bound *= static_cast<unsigned __int128>(n);
  int exp = 4 + d;
  long long k = static_cast<long long>(
      std::floor(std::pow(static_cast<double>(n), 4.0 / exp)));
  if (k < 1) k = 1;
  while (int_pow_leq(static_cast<unsigned long long>(k + 1), exp, bound)) ++k;
  while (k > 1 &&
         !int_pow_leq(static_cast<unsigned long long>(k), exp, bound)) {
    --k;
  }
  return static_cast<int>(k);
}

KnnModel fit_knn(const Dataset& data, int d, int k) {
  if (d < 1) throw std::invalid_argument("fit_knn: d < 1");
  if (k < 1) throw std::invalid_argument("fit_knn: k < 1");
  if (static_cast<std::size_t>(k) > data.points.size()) {
    throw std::invalid_argument("fit_knn: k exceeds training size");
  }
  KnnModel model;
  model.d = d;
  model.k = k;
  model.points.reserve(data.points.size());
  model.labels.reserve(data.points.size());
  for (const LabeledPoint& p : data.points) {
    check_dims(p.x.size(), d, "fit_knn");
    if (p.y != 0 && p.y != 1) {
      throw std::invalid_argument("fit_knn: label must be 0 or 1");
    }
    model.points.emplace_back(p.x.begin(), p.x.begin() + d);
    model.labels.push_back(p.y);
  }
  return model;
}

namespace {

int knn_votes(const KnnModel& model, const CoefVec& x) {
  check_dims(x.size(), model.d, "knn_classify");
  std::size_t n = model.points.size();
  if (static_cast<std::size_t>(model.k) > n) {
    throw std::invalid_argument("knn_classify: k exceeds training size");
  }
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CoefVec& p = model.points[i];
    double dist = 0.0;
    for (int c = 0; c < model.d; ++c) {
      double diff = x[static_cast<std::size_t>(c)] -
                    p[static_cast<std::size_t>(c)];
      dist += diff * diff;
    }
    order[i] = {dist, i};
  }
  std::partial_sort(order.begin(),
                    order.begin() + static_cast<std::ptrdiff_t>(model.k),
                    order.end());
  int vote = 0;
  for (int i = 0; i < model.k; ++i) {
    vote += model.labels[order[static_cast<std::size_t>(i)].second];
  }
  return vote;
}

}  // namespace

Label knn_classify(const KnnModel& model, const CoefVec& x) {
  return 2 * knn_votes(model, x) > model.k ? 1 : 0;
}

double knn_posterior(const KnnModel& model, const CoefVec& x) {
  return static_cast<double>(knn_votes(model, x)) /
         static_cast<double>(model.k);
}

int sample_split_select_d(const Dataset& data,
                          const std::vector<int>& candidates,
                          std::uint64_t seed) {
  std::size_t n = data.points.size();
  if (n < 3) {
    throw std::invalid_argument(
        "sample_split_select_d: cannot split fewer than 3 points");
  }
  if (candidates.empty()) {
    throw std::invalid_argument("sample_split_select_d: no candidates");
  }
  std::size_t dim = data.points.front().x.size();
  std::vector<int> cands(candidates);
  std::sort(cands.begin(), cands.end());
  for (int d : cands) {
    if (d < 1 || static_cast<std::size_t>(d) > dim) {
      throw std::invalid_argument(
          "sample_split_select_d: candidate d out of range");
    }
  }

  std::size_t m = (n + 1) / 2;        // |S1|
  std::size_t n2 = n - m;             // |S2|, sizes the later kNN fit
  std::vector<std::size_t> s1(m);
  std::iota(s1.begin(), s1.end(), std::size_t{0});
  Rng rng = Rng::stream(seed, stream_tag::shuffle);
  for (std::size_t i = m; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(s1[i - 1], s1[j]);
  }
  std::size_t train_sz = (m + 1) / 2;

  Dataset train;
  train.points.reserve(train_sz);
  for (std::size_t i = 0; i < train_sz; ++i) {
    train.points.push_back(data.points[s1[i]]);
  }

  int best_d = cands.front();
  std::size_t best_err = n + 1;
  for (int d : cands) {
    int k = optimal_k(static_cast<long long>(std::max<std::size_t>(n2, 1)), d);
    k = std::min<int>(k, static_cast<int>(train_sz));
    KnnModel model = fit_knn(train, d, k);
    std::size_t err = 0;
    for (std::size_t i = train_sz; i < m; ++i) {
      const LabeledPoint& p = data.points[s1[i]];
      if (knn_classify(model, p.x) != p.y) ++err;
    }
    if (err < best_err) {
      best_err = err;
      best_d = d;
    }
  }
  return best_d;
}

}  // namespace funclass
