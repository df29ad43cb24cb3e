#include "funclass/risk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "funclass/parallel.hpp"
#include "funclass/rng.hpp"

namespace funclass {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

void check_mc(long long n_mc, const char* where) {
  if (n_mc < 1) {
    throw std::invalid_argument(std::string(where) + ": n_mc < 1");
  }
}

// Coordinates each Monte Carlo draw must materialize: everything the rule
// reads, plus the oracle's support.
int draw_dims(const ClassifierRule& rule, const ModelPair& pair,
              const char* where) {
  int D = static_cast<int>(pair.f.size());
  if (rule.dims_needed < 0 || rule.dims_needed > D) {
    throw std::invalid_argument(std::string(where) +
                                ": rule reads more coordinates than the model "
                                "has");
  }
  return std::max(rule.dims_needed, pair_support(pair));
}

double binom_std_err(double p, long long n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace

ClassifierRule make_bayes_rule(const ModelPair& pair) {
  int support = pair_support(pair);
  ClassifierRule rule;
  rule.dims_needed = support;
  rule.name = "bayes";
  rule.classify = [pair, support](const CoefVec& x) {
    return truncated_bayes_classify(pair, x, support);
  };
  return rule;
}

ClassifierRule make_truncated_bayes_rule(const ModelPair& pair, int d) {
  if (d < 1 || static_cast<std::size_t>(d) > pair.f.size()) {
    throw std::invalid_argument("make_truncated_bayes_rule: d out of range");
  }
  ClassifierRule rule;
  rule.dims_needed = d;
  rule.name = "truncated_bayes";
  rule.classify = [pair, d](const CoefVec& x) {
    return truncated_bayes_classify(pair, x, d);
  };
  return rule;
}

ClassifierRule make_plugin_rule(PluginModel model) {
  ClassifierRule rule;
  rule.dims_needed = model.d;
  rule.name = "plugin";
  rule.classify = [model = std::move(model)](const CoefVec& x) {
    return plugin_classify(model, x);
  };
  return rule;
}

ClassifierRule make_knn_rule(KnnModel model) {
  ClassifierRule rule;
  rule.dims_needed = model.d;
  rule.name = "knn";
  rule.classify = [model = std::move(model)](const CoefVec& x) {
    return knn_classify(model, x);
  };
  return rule;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double bayes_risk_exact(double delta) {
  if (delta < 0.0) throw std::invalid_argument("bayes_risk_exact: delta < 0");
  return normal_cdf(-delta / 2.0);
}

RiskEstimate mc_risk(const ClassifierRule& rule, const ModelPair& pair,
                     long long n_mc, std::uint64_t seed) {
  check_mc(n_mc, "mc_risk");
  int dims = draw_dims(rule, pair, "mc_risk");
  CoefVec x;
  long long wrong = 0;
  for (long long i = 0; i < n_mc; ++i) {
    int y = sample_point_prefix(pair, dims, seed,
                                static_cast<std::uint64_t>(i), x);
    if (rule.classify(x) != y) ++wrong;
  }
  double mean = static_cast<double>(wrong) / static_cast<double>(n_mc);
  return {mean, binom_std_err(mean, n_mc), n_mc, RiskKind::misclassification};
}

RiskEstimate mc_excess_risk(const ClassifierRule& rule, const ModelPair& pair,
                            long long n_mc, std::uint64_t seed) {
  check_mc(n_mc, "mc_excess_risk");
  int dims = draw_dims(rule, pair, "mc_excess_risk");
  int support = pair_support(pair);
  CoefVec x;
  double acc = 0.0;
  double acc_sq = 0.0;
  for (long long i = 0; i < n_mc; ++i) {
    sample_point_prefix(pair, dims, seed, static_cast<std::uint64_t>(i), x);
    double stat = bayes_linear_statistic(pair, x, support);
    Label oracle = stat >= 0.0 ? 1 : 0;
    if (rule.classify(x) != oracle) {
      double w = std::fabs(2.0 * stable_logistic(stat) - 1.0);
      acc += w;
      acc_sq += w * w;
    }
  }
  double n = static_cast<double>(n_mc);
  double mean = acc / n;
  double var = n_mc > 1 ? std::max(acc_sq - n * mean * mean, 0.0) / (n - 1.0)
                        : 0.0;
  return {mean, std::sqrt(var / n), n_mc, RiskKind::excess};
}

namespace {

// Shared core of the margin and crown estimators: counts draws whose
// posterior distance to 1/2 lands in [lo, hi].
RiskEstimate band_prob(const ModelPair& pair, double lo, double hi,
                       long long n_mc, std::uint64_t seed) {
  int support = pair_support(pair);
  CoefVec x;
  long long hits = 0;
  for (long long i = 0; i < n_mc; ++i) {
    sample_point_prefix(pair, support, seed, static_cast<std::uint64_t>(i), x);
    double gap =
        std::fabs(stable_logistic(bayes_linear_statistic(pair, x, support)) -
                  0.5);
    if (gap >= lo && gap <= hi) ++hits;
  }
  double mean = static_cast<double>(hits) / static_cast<double>(n_mc);
  return {mean, binom_std_err(mean, n_mc), n_mc, RiskKind::misclassification};
}

}  // namespace

RiskEstimate margin_prob(const ModelPair& pair, double eps, long long n_mc,
                         std::uint64_t seed) {
  check_mc(n_mc, "margin_prob");
  if (!(eps > 0.0)) throw std::invalid_argument("margin_prob: eps <= 0");
  return band_prob(pair, 0.0, eps, n_mc, seed);
}

double margin_upper_bound(double delta, double eps) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("margin_upper_bound: delta <= 0");
  }
  if (!(eps > 0.0 && eps <= 0.125)) {
    throw std::invalid_argument("margin_upper_bound: need 0 < eps <= 1/8");
  }
  return std::min(1.0, 10.0 * eps / delta);
}

double margin_lower_bound(double delta, double eps) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("margin_lower_bound: delta <= 0");
  }
  if (!(eps > 0.0 && eps < 0.25)) {
    throw std::invalid_argument("margin_lower_bound: need 0 < eps < 1/4");
  }
  double half = 1.0 + delta / 2.0;
  double a = (eps / delta) * std::exp(-0.5 * half * half);
  double b = 0.5 * std::exp(-0.5);
  return std::min(a, b) / kSqrt2Pi;
}

double crown_delta(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("crown_delta: delta <= 0");
  double half = 1.0 + delta / 2.0;
  return std::exp(-0.5 * half * half) / (2.0 * kSqrt2Pi);
}

RiskEstimate crown_prob(const ModelPair& pair, double eps, long long n_mc,
                        std::uint64_t seed) {
  check_mc(n_mc, "crown_prob");
  double delta = separation(pair);
  if (!(eps > 0.0 && eps <= std::min(0.25, delta))) {
    throw std::invalid_argument(
        "crown_prob: need 0 < eps <= min(1/4, separation)");
  }
  return band_prob(pair, crown_delta(delta) * eps, eps, n_mc, seed);
}

SmoothnessProbe smoothness_probe(const CoefVec& shift, const CoefVec& x,
                                 double r, long long n_mc,
                                 std::uint64_t seed) {
  check_mc(n_mc, "smoothness_probe");
  if (shift.size() != x.size() || shift.empty()) {
    throw std::invalid_argument(
        "smoothness_probe: shift and x must share a positive dimension");
  }
  if (!(r > 0.0)) throw std::invalid_argument("smoothness_probe: r <= 0");
  std::size_t d = shift.size();
  double shift_sq = l2_norm_sq(shift);
  auto eta = [&](const CoefVec& z) {
    return stable_logistic(l2_dot(shift, z) - 0.5 * shift_sq);
  };

  Rng rng = Rng::stream(seed, stream_tag::inner);
  CoefVec z(d);
  long long hits = 0;
  double acc = 0.0;
  double acc_sq = 0.0;
  for (long long i = 0; i < n_mc; ++i) {
    int y = rng.bernoulli_half();
    double dist_sq = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      z[c] = (y ? shift[c] : 0.0) + rng.normal();
      double diff = z[c] - x[c];
      dist_sq += diff * diff;
    }
    if (dist_sq <= r * r) {
      ++hits;
      double e = eta(z);
      acc += e;
      acc_sq += e * e;
    }
  }
  if (hits < 2) throw InsufficientSamplesError(hits);

  SmoothnessProbe probe;
  probe.hits = hits;
  probe.mass = static_cast<double>(hits) / static_cast<double>(n_mc);
  probe.mass_std_err = binom_std_err(probe.mass, n_mc);
  probe.eta_ball = acc / static_cast<double>(hits);
  probe.eta_center = eta(x);
  probe.lhs = std::fabs(probe.eta_ball - probe.eta_center);
  double h = static_cast<double>(hits);
  double var = std::max(acc_sq - h * probe.eta_ball * probe.eta_ball, 0.0) /
               (h - 1.0);
  probe.lhs_std_err = std::sqrt(var / h);
  return probe;
}

double smoothness_constant(int d, double R) {
  if (d < 1) throw std::invalid_argument("smoothness_constant: d < 1");
  if (!(R > 0.0)) throw std::invalid_argument("smoothness_constant: R <= 0");
  constexpr double kPi = 3.1415926535897932384626433832795;
  constexpr double kE = 2.7182818284590452353602874713527;
  return 60.0 * kPi * kE * d * R * R * std::exp(R * R / d);
}

bool knn_admissible(long long k, long long n, int d) {
  if (k < 1 || n < 1 || d < 1) return false;
  if (k > n) return false;
  double lhs = 1.0 / std::sqrt(static_cast<double>(k));
  double rhs = d * std::pow(static_cast<double>(k) / static_cast<double>(n),
                            2.0 / d);
  return lhs >= rhs * (1.0 - 1e-12);
}

long long max_admissible_k(long long n, int d) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("max_admissible_k: need n >= 1 and d >= 1");
  }
  if (!knn_admissible(1, n, d)) return 0;
  long long lo = 1;
  long long hi = n;
  while (lo < hi) {
    long long mid = lo + (hi - lo + 1) / 2;
    if (knn_admissible(mid, n, d)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

namespace {

// Mean and standard error across replicate-level estimates; a single
// replicate falls back to its own Monte Carlo error.
std::pair<double, double> pool_replicates(const std::vector<RiskEstimate>& r) {
  double t = static_cast<double>(r.size());
  double mean = 0.0;
  for (const RiskEstimate& e : r) mean += e.mean;
  mean /= t;
  if (r.size() == 1) return {mean, r.front().std_err};
  double ss = 0.0;
  for (const RiskEstimate& e : r) ss += (e.mean - mean) * (e.mean - mean);
  return {mean, std::sqrt(ss / (t - 1.0) / t)};
}

std::vector<int> split_candidates(int D) {
  std::vector<int> cands;
  for (int d : {1, 2, 4, 8, 16}) {
    if (d <= D) cands.push_back(d);
  }
  return cands;
}

Dataset tail_half(const Dataset& data) {
  Dataset out;
  std::size_t n = data.points.size();
  std::size_t first = (n + 1) / 2;
  out.points.assign(data.points.begin() + static_cast<std::ptrdiff_t>(first),
                    data.points.end());
  return out;
}

}  // namespace

int ambient_dimension(const ExperimentConfig& cfg) {
  if (cfg.n_grid.empty()) {
    throw std::invalid_argument("ambient_dimension: empty n_grid");
  }
  int needed = 1;
  if (cfg.d_rule == DRule::fixed) needed = std::max(needed, cfg.d_fixed);
  if (cfg.d_rule == DRule::split) needed = std::max(needed, 16);
  SobolevSpec spec{cfg.s, cfg.R};
  int dn_max = dn_rule(cfg.n_grid.back(), spec);
  if (cfg.ambient_D > 0) {
    if (cfg.ambient_D < needed) {
      throw std::invalid_argument(
          "ambient_dimension: ambient_D smaller than the dimensions the "
          "d_rule uses");
    }
    return cfg.ambient_D;
  }
  return std::max({256, 4 * dn_max, needed});
}

PairAt pair_for_index(const ExperimentConfig& cfg, std::size_t i, int D) {
  if (i >= cfg.n_grid.size()) {
    throw std::invalid_argument("pair_for_index: index outside n_grid");
  }
  SobolevSpec spec{cfg.s, cfg.R};
  PairAt out;
  out.delta = cfg.delta_fixed;
  std::uint64_t pair_seed = derive_seed(cfg.master_seed, stream_tag::pair, 0);
  if (cfg.delta_policy == DeltaPolicy::coupled) {
    double expo = 1.0 / (2.0 * cfg.s + 1.0);
    out.delta = std::pow(cfg.R, expo) *
                std::pow(static_cast<double>(cfg.n_grid[i]), -cfg.s * expo);
    pair_seed = derive_seed(cfg.master_seed, stream_tag::pair, i + 1);
  }
  out.pair = make_pair_with_separation(spec, out.delta, pair_seed, D);
  return out;
}

FittedClassifier fit_replicate(const ExperimentConfig& cfg,
                               const ModelPair& pair, long long n, int D,
                               std::size_t n_idx, std::size_t rep) {
  SobolevSpec spec{cfg.s, cfg.R};
  int d_static = 0;
  switch (cfg.d_rule) {
    case DRule::theorem1:
      d_static = std::min(dn_rule(n, spec), D);
      break;
    case DRule::fixed:
      d_static = cfg.d_fixed;
      break;
    case DRule::split:
      d_static = 0;
      break;
  }

  FittedClassifier out;
  if (cfg.classifier == Classifier::bayes) {
    out.rule = make_bayes_rule(pair);
    out.posterior = [p = pair, s = pair_support(pair)](const CoefVec& x) {
      return eta_d(p, x, s);
    };
    out.d = D;
    return out;
  }
  if (cfg.classifier == Classifier::truncated_bayes &&
      cfg.d_rule != DRule::split) {
    out.rule = make_truncated_bayes_rule(pair, d_static);
    out.posterior = [p = pair, d_static](const CoefVec& x) {
      return eta_d(p, x, d_static);
    };
    out.d = d_static;
    return out;
  }

  // Every remaining case trains on a fresh sample.
  std::vector<int> cands;
  int train_dims = d_static;
  if (cfg.d_rule == DRule::split) {
    cands = split_candidates(D);
    train_dims = cands.back();
  }
  train_dims = std::max(train_dims, pair_support(pair));
  std::uint64_t train_seed =
      derive_seed(cfg.master_seed, stream_tag::train, n_idx, rep);
  Dataset data;
  data.points.resize(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    LabeledPoint& p = data.points[static_cast<std::size_t>(i)];
    p.y = sample_point_prefix(pair, train_dims, train_seed,
                              static_cast<std::uint64_t>(i), p.x);
  }

  int d = d_static;
  Dataset fit_data;
  const Dataset* fit_on = &data;
  if (cfg.d_rule == DRule::split) {
    d = sample_split_select_d(
        data, cands, derive_seed(cfg.master_seed, stream_tag::split, n_idx,
                                 rep));
    fit_data = tail_half(data);
    fit_on = &fit_data;
  }
  long long n_fit = static_cast<long long>(fit_on->points.size());

  switch (cfg.classifier) {
    case Classifier::plugin: {
      PluginModel model = fit_plugin(*fit_on, d);
      out.posterior = [model](const CoefVec& x) { return eta_hat(model, x); };
      out.rule = make_plugin_rule(std::move(model));
      out.d = d;
      return out;
    }
    case Classifier::knn: {
      int k = cfg.k_rule == KRule::optimal ? optimal_k(n_fit, d) : cfg.k_fixed;
      if (k > n_fit) {
        throw std::invalid_argument(
            "risk_curve: k exceeds the training points available");
      }
      KnnModel model = fit_knn(*fit_on, d, k);
      out.posterior = [model](const CoefVec& x) {
        return knn_posterior(model, x);
      };
      out.rule = make_knn_rule(std::move(model));
      out.d = d;
      out.k = k;
      return out;
    }
    case Classifier::truncated_bayes:
      out.rule = make_truncated_bayes_rule(pair, d);
      out.posterior = [p = pair, d](const CoefVec& x) {
        return eta_d(p, x, d);
      };
      out.d = d;
      return out;
    case Classifier::bayes:
      break;
  }
  throw std::logic_error("risk_curve: unhandled classifier");
}

ExperimentResult risk_curve(const ExperimentConfig& cfg, unsigned workers) {
  if (cfg.n_grid.empty()) {
    throw std::invalid_argument("risk_curve: empty n_grid");
  }
  int D = ambient_dimension(cfg);
  std::size_t n_count = cfg.n_grid.size();
  std::size_t reps = static_cast<std::size_t>(cfg.mc_outer);

  std::vector<double> deltas(n_count);
  std::vector<ModelPair> pairs(n_count);
  for (std::size_t i = 0; i < n_count; ++i) {
    PairAt at = pair_for_index(cfg, i, D);
    deltas[i] = at.delta;
    pairs[i] = std::move(at.pair);
  }

  std::vector<RiskEstimate> estimates(n_count * reps);
  std::vector<int> d_used(n_count * reps, 0);
  std::vector<int> k_used(n_count * reps, 0);
  parallel_for(n_count * reps, workers, [&](std::size_t u) {
    std::size_t n_idx = u / reps;
    std::size_t rep = u % reps;
    FittedClassifier fitted =
        fit_replicate(cfg, pairs[n_idx], cfg.n_grid[n_idx], D, n_idx, rep);
    estimates[u] = mc_excess_risk(
        fitted.rule, pairs[n_idx], cfg.mc_inner,
        derive_seed(cfg.master_seed, stream_tag::inner, n_idx, rep));
    d_used[u] = fitted.d;
    k_used[u] = fitted.k;
  });

  ExperimentResult result;
  result.rows.reserve(n_count);
  for (std::size_t i = 0; i < n_count; ++i) {
    std::vector<RiskEstimate> reps_here(
        estimates.begin() + static_cast<std::ptrdiff_t>(i * reps),
        estimates.begin() + static_cast<std::ptrdiff_t>((i + 1) * reps));
    auto [mean, se] = pool_replicates(reps_here);
    std::map<std::pair<int, int>, std::size_t> votes;
    for (std::size_t r = 0; r < reps; ++r) {
      votes[{d_used[i * reps + r], k_used[i * reps + r]}] += 1;
    }
    std::pair<int, int> modal = votes.begin()->first;
    std::size_t best = votes.begin()->second;
    for (const auto& [dk, count] : votes) {
      if (count > best) {
        best = count;
        modal = dk;
      }
    }
    RiskCurveRow row;
    row.n = cfg.n_grid[i];
    row.d = modal.first;
    row.k = modal.second;
    row.delta = deltas[i];
    row.excess_mean = mean;
    row.excess_stderr = se;
    row.bayes_risk = bayes_risk_exact(deltas[i]);
    row.classifier = to_string(cfg.classifier);
    result.rows.push_back(std::move(row));
  }
  return result;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& n_and_mean) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, mean] : n_and_mean) {
    if (n > 0.0 && mean > 0.0) pts.emplace_back(std::log(n), std::log(mean));
  }
  if (pts.size() < 3) {
    throw std::invalid_argument(
        "rate_fit: fewer than 3 usable rows after dropping non-positive "
        "means");
  }
  double n = static_cast<double>(pts.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  double mx = sx / n;
  double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("rate_fit: all n values coincide");
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = syy - fit.slope * sxy;
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - std::max(ss_res, 0.0) / syy;
  fit.points_used = static_cast<int>(pts.size());
  return fit;
}

RateFit rate_fit(const ExperimentResult& result) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(result.rows.size());
  for (const RiskCurveRow& row : result.rows) {
    pts.emplace_back(static_cast<double>(row.n), row.excess_mean);
  }
  return rate_fit(pts);
}

std::vector<KnnFloorRow> knn_floor_check(const ModelPair& pair,
                                         const std::vector<long long>& n_grid,
                                         long long n_mc, int outer_reps,
                                         std::uint64_t seed, unsigned workers) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument("knn_floor_check: pair dimension mismatch");
  }
  int d = static_cast<int>(pair.f.size());
  if (d < 1 || d > 8) {
    throw std::invalid_argument(
        "knn_floor_check: pair dimension must be in [1, 8]");
  }
  if (n_grid.empty()) {
    throw std::invalid_argument("knn_floor_check: empty n_grid");
  }
  if (outer_reps < 1) {
    throw std::invalid_argument("knn_floor_check: outer_reps < 1");
  }
  check_mc(n_mc, "knn_floor_check");

  std::vector<KnnFloorRow> rows;
  for (long long n : n_grid) {
    if (n < 1) throw std::invalid_argument("knn_floor_check: n < 1");
    int k_opt = optimal_k(n, d);
    KnnFloorRow row;
    row.n = n;
    row.k = k_opt;
    row.k_is_optimal = true;
    row.admissible = knn_admissible(k_opt, n, d);
    row.inv_k = 1.0 / k_opt;
    rows.push_back(row);
    if (!row.admissible) {
      long long k_adm = max_admissible_k(n, d);
      if (k_adm >= 1 && k_adm != k_opt) {
        KnnFloorRow companion;
        companion.n = n;
        companion.k = static_cast<int>(k_adm);
        companion.k_is_optimal = false;
        companion.admissible = true;
        companion.inv_k = 1.0 / static_cast<double>(k_adm);
        rows.push_back(companion);
      }
    }
  }

  std::size_t reps = static_cast<std::size_t>(outer_reps);
  std::vector<RiskEstimate> estimates(rows.size() * reps);
  parallel_for(rows.size() * reps, workers, [&](std::size_t u) {
    std::size_t row_idx = u / reps;
    std::size_t rep = u % reps;
    const KnnFloorRow& row = rows[row_idx];
    std::uint64_t train_seed =
        derive_seed(seed, stream_tag::train, row_idx, rep);
    Dataset data;
    data.points.resize(static_cast<std::size_t>(row.n));
    for (long long i = 0; i < row.n; ++i) {
      LabeledPoint& p = data.points[static_cast<std::size_t>(i)];
      p.y = sample_point_prefix(pair, d, train_seed,
                                static_cast<std::uint64_t>(i), p.x);
    }
    ClassifierRule rule = make_knn_rule(fit_knn(data, d, row.k));
    estimates[u] = mc_excess_risk(
        rule, pair, n_mc, derive_seed(seed, stream_tag::inner, row_idx, rep));
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<RiskEstimate> reps_here(
        estimates.begin() + static_cast<std::ptrdiff_t>(i * reps),
        estimates.begin() + static_cast<std::ptrdiff_t>((i + 1) * reps));
    auto [mean, se] = pool_replicates(reps_here);
    rows[i].excess_mean = mean;
    rows[i].excess_stderr = se;
  }
  return rows;
}

}  // namespace funclass
