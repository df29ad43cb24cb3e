#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "funclass/risk.hpp"
#include "funclass/rng.hpp"
#include "test_util.hpp"

using namespace funclass;

namespace {

ModelPair axis_pair(double delta, int D) {
  ModelPair pair;
  pair.f = CoefVec(static_cast<std::size_t>(D), 0.0);
  pair.g = CoefVec(static_cast<std::size_t>(D), 0.0);
  pair.f[0] = delta / 2.0;
  pair.g[0] = -delta / 2.0;
  return pair;
}

// Exact margin band mass: the linear statistic is N(+-delta^2/2, delta^2)
// under the two classes, so the band depends on the pair only through delta.
double band_mass_exact(double delta, double eps) {
  double t = std::log((0.5 + eps) / (0.5 - eps));
  auto cdf = testutil::normal_cdf_ref;
  return cdf((t - delta * delta / 2.0) / delta) -
         cdf((-t - delta * delta / 2.0) / delta);
}

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.s = 1.0;
  cfg.R = 1.0;
  cfg.delta_fixed = 1.0;
  cfg.n_grid = {64, 128};
  cfg.classifier = Classifier::plugin;
  cfg.mc_inner = 1000;
  cfg.mc_outer = 4;
  cfg.master_seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("normal_cdf matches the erfc reference") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(-1.0) ==
        doctest::Approx(0.15865525393145707).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
  for (double z : {-6.0, -2.5, -0.3, 0.0, 1.7, 5.0}) {
    CHECK(normal_cdf(z) ==
          doctest::Approx(testutil::normal_cdf_ref(z)).epsilon(1e-14));
    CHECK(normal_cdf(z) + normal_cdf(-z) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("exact optimal risk of the two-class model") {
  CHECK(bayes_risk_exact(0.0) == 0.5);
  CHECK(bayes_risk_exact(2.0) ==
        doctest::Approx(0.15865525393145707).epsilon(1e-15));
  CHECK(bayes_risk_exact(1.0) ==
        doctest::Approx(0.3085375387259869).epsilon(1e-15));
  CHECK(bayes_risk_exact(12.0) < 1e-6);
  double prev = 0.5;
  for (double delta : {0.1, 0.5, 1.0, 3.0, 8.0}) {
    double r = bayes_risk_exact(delta);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_AS(bayes_risk_exact(-0.1), std::invalid_argument);
}

TEST_CASE("rule factories wrap the classifiers faithfully") {
  ModelPair pair = axis_pair(1.0, 6);
  ClassifierRule bayes = make_bayes_rule(pair);
  CHECK(bayes.name == "bayes");
  CHECK(bayes.dims_needed == 1);

  ClassifierRule trunc = make_truncated_bayes_rule(pair, 3);
  CHECK(trunc.name == "truncated_bayes");
  CHECK(trunc.dims_needed == 3);
  CHECK_THROWS_AS(make_truncated_bayes_rule(pair, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_truncated_bayes_rule(pair, 0), std::invalid_argument);

  Dataset data = sample_dataset(pair, 64, 3);
  PluginModel pm = fit_plugin(data, 2);
  ClassifierRule plugin = make_plugin_rule(pm);
  CHECK(plugin.name == "plugin");
  CHECK(plugin.dims_needed == 2);

  KnnModel km = fit_knn(data, 2, 5);
  ClassifierRule knn = make_knn_rule(km);
  CHECK(knn.name == "knn");
  CHECK(knn.dims_needed == 2);

  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    CoefVec x(6);
    for (double& v : x) v = rng.normal();
    CHECK(bayes.classify(x) == bayes_classify(pair, x));
    CHECK(trunc.classify(x) == truncated_bayes_classify(pair, x, 3));
    CHECK(plugin.classify(x) == plugin_classify(pm, x));
    CHECK(knn.classify(x) == knn_classify(km, x));
  }
}

TEST_CASE("monte carlo risk of the optimal rule hits the analytic value") {
  SobolevSpec spec{1.0, 1.0};
  ModelPair pair = make_pair_with_separation(spec, 2.0, 9, 32);
  RiskEstimate est = mc_risk(make_bayes_rule(pair), pair, 100000, 404);
  CHECK(est.n_mc == 100000);
  CHECK(est.kind == RiskKind::misclassification);
  CHECK(std::abs(est.mean - 0.15865525393145707) < 4.0 * est.std_err);
  CHECK(est.std_err > 0.0);
  RiskEstimate again = mc_risk(make_bayes_rule(pair), pair, 100000, 404);
  CHECK(est.mean == again.mean);
}

TEST_CASE("risk of degenerate rules") {
  ModelPair pair = axis_pair(1.0, 4);
  ClassifierRule constant;
  constant.classify = [](const CoefVec&) { return 1; };
  constant.dims_needed = 0;
  constant.name = "always_one";
  RiskEstimate est = mc_risk(constant, pair, 100000, 5);
  CHECK(std::abs(est.mean - 0.5) < 4.0 * est.std_err);

  ModelPair same;
  same.f = CoefVec{0.3, -0.1};
  same.g = CoefVec{0.3, -0.1};
  RiskEstimate coin = mc_risk(make_bayes_rule(same), same, 100000, 6);
  CHECK(std::abs(coin.mean - 0.5) < 4.0 * coin.std_err);
  CHECK_THROWS_AS(mc_risk(constant, pair, 0, 1), std::invalid_argument);
}

TEST_CASE("excess risk of the optimal rule is exactly zero") {
  SobolevSpec spec{1.0, 1.0};
  for (double delta : {0.25, 1.0, 1.8}) {
    ModelPair pair = make_pair_with_separation(spec, delta, 2, 16);
    RiskEstimate est = mc_excess_risk(make_bayes_rule(pair), pair, 20000, 31);
    CHECK(est.mean == 0.0);
    CHECK(est.std_err == 0.0);
    CHECK(est.kind == RiskKind::excess);
  }
}

TEST_CASE("excess risk of the flipped optimal rule matches 1 - 2 Phi(-delta/2)") {
  SobolevSpec spec{1.0, 1.0};
  ModelPair pair = make_pair_with_separation(spec, 2.0, 8, 16);
  ClassifierRule flipped = make_bayes_rule(pair);
  auto inner = flipped.classify;
  flipped.classify = [inner](const CoefVec& x) { return 1 - inner(x); };
  RiskEstimate est = mc_excess_risk(flipped, pair, 100000, 99);
  CHECK(std::abs(est.mean - 0.6826894921370859) < 4.0 * est.std_err);
  CHECK(est.std_err < 0.01);
}

TEST_CASE("conditional excess estimator agrees with the risk difference") {
  SobolevSpec spec{1.0, 1.0};
  ModelPair pair = make_pair_with_separation(spec, 1.0, 15, 16);
  Dataset data = sample_dataset(pair, 500, 2024);
  ClassifierRule rule = make_plugin_rule(fit_plugin(data, 3));

  const long long m = 400000;
  RiskEstimate excess = mc_excess_risk(rule, pair, m, 710);
  RiskEstimate risk = mc_risk(rule, pair, m, 711);
  double diff = risk.mean - bayes_risk_exact(1.0);
  double combined = std::sqrt(excess.std_err * excess.std_err +
                              risk.std_err * risk.std_err);
  CHECK(std::abs(excess.mean - diff) < 3.0 * combined);
  CHECK(excess.mean >= 0.0);
  CHECK(excess.std_err < risk.std_err);
}

TEST_CASE("excess risk is nonnegative for arbitrary rules") {
  ModelPair pair = axis_pair(1.0, 3);
  Dataset data = sample_dataset(pair, 40, 1);
  ClassifierRule rule = make_knn_rule(fit_knn(data, 3, 3));
  RiskEstimate est = mc_excess_risk(rule, pair, 20000, 2);
  CHECK(est.mean >= 0.0);
  CHECK(est.mean <= 1.0);
}

TEST_CASE("margin band of the full posterior is certain at eps = 1/2") {
  ModelPair pair = axis_pair(1.5, 4);
  RiskEstimate est = margin_prob(pair, 0.5, 5000, 77);
  CHECK(est.mean == 1.0);
  CHECK(est.std_err == 0.0);
  CHECK_THROWS_AS(margin_prob(pair, 0.0, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(margin_prob(pair, 0.1, 0, 1), std::invalid_argument);
}

TEST_CASE("margin band frequency matches the closed-form normal mass") {
  SobolevSpec spec{1.0, 2.0};
  for (double delta : {0.5, 1.0, 2.0}) {
    for (double eps : {0.05, 0.125}) {
      ModelPair pair = make_pair_with_separation(spec, delta, 5, 16);
      RiskEstimate est = margin_prob(pair, eps, 200000, 909);
      CHECK(std::abs(est.mean - band_mass_exact(delta, eps)) <
            4.0 * est.std_err + 1e-9);
    }
  }
}

TEST_CASE("closed-form band mass sits inside the published envelope") {
  for (double delta : {0.3, 0.5, 1.0, 2.0, 4.0, 6.0}) {
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.125}) {
      double mass = band_mass_exact(delta, eps);
      CHECK(mass <= margin_upper_bound(delta, eps) + 1e-12);
      CHECK(mass >= margin_lower_bound(delta, eps) - 1e-12);
    }
  }
}

TEST_CASE("margin envelope values and domains") {
  CHECK(margin_upper_bound(4.0, 0.125) == 0.3125);
  CHECK(margin_upper_bound(0.5, 0.125) == 1.0);
  CHECK(margin_upper_bound(4.0, 0.02) == 0.05);
  CHECK(margin_lower_bound(1.0, 0.1) ==
        doctest::Approx(0.012951759566589173).epsilon(1e-14));
  CHECK(margin_lower_bound(0.5, 0.125) ==
        doctest::Approx(0.04566227134725548).epsilon(1e-14));
  CHECK(margin_lower_bound(4.0, 0.02) ==
        doctest::Approx(2.215924205969004e-05).epsilon(1e-14));
  CHECK_THROWS_AS(margin_upper_bound(1.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(margin_upper_bound(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(margin_lower_bound(1.0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(margin_lower_bound(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("crown constant and crown band") {
  CHECK(crown_delta(1.0) ==
        doctest::Approx(0.06475879783294587).epsilon(1e-14));
  CHECK_THROWS_AS(crown_delta(0.0), std::invalid_argument);

  SobolevSpec spec{1.0, 1.0};
  ModelPair pair = make_pair_with_separation(spec, 1.0, 6, 16);
  RiskEstimate crown = crown_prob(pair, 0.2, 200000, 515);
  double floor = crown_delta(1.0) * 0.2 / 1.0;
  CHECK(crown.mean >= floor - 3.0 * crown.std_err);

  RiskEstimate margin = margin_prob(pair, 0.2, 200000, 515);
  CHECK(crown.mean <= margin.mean);

  RiskEstimate tiny = crown_prob(pair, 0.01, 50000, 9);
  CHECK(tiny.mean < 0.06);

  CHECK_THROWS_AS(crown_prob(pair, 0.3, 100, 1), std::invalid_argument);
  ModelPair close = make_pair_with_separation(spec, 0.1, 6, 16);
  CHECK_THROWS_AS(crown_prob(close, 0.2, 100, 1), std::invalid_argument);
}

TEST_CASE("ball-average posterior agrees with a quadrature oracle") {
  CoefVec shift{1.0};
  CoefVec x{0.0};
  double r = 0.1;
  SmoothnessProbe probe = smoothness_probe(shift, x, r, 400000, 616);

  auto density = [](double z) {
    return 0.5 * (std::exp(-0.5 * (z - 1.0) * (z - 1.0)) +
                  std::exp(-0.5 * z * z)) /
           std::sqrt(2.0 * 3.14159265358979323846);
  };
  auto eta = [](double z) { return 1.0 / (1.0 + std::exp(-(z - 0.5))); };
  double mass = testutil::trapezoid(density, -r, r, 100000);
  double weighted = testutil::trapezoid(
      [&](double z) { return eta(z) * density(z); }, -r, r, 100000);
  double eta_ball = weighted / mass;

  CHECK(std::abs(probe.mass - mass) < 3.0 * probe.mass_std_err);
  CHECK(std::abs(probe.eta_ball - eta_ball) < 3.0 * probe.lhs_std_err);
  CHECK(probe.eta_center == doctest::Approx(eta(0.0)).epsilon(1e-12));
  CHECK(std::abs(probe.lhs - std::abs(eta_ball - eta(0.0))) <
        3.0 * probe.lhs_std_err);
  CHECK(probe.hits > 1000);
}

TEST_CASE("ball average converges to the center value as r shrinks") {
  CoefVec shift{1.0};
  CoefVec x{0.0};
  SmoothnessProbe probe = smoothness_probe(shift, x, 0.01, 1000000, 33);
  CHECK(probe.lhs < 0.01);
}

TEST_CASE("midpoint balls are posterior-balanced by symmetry") {
  CoefVec shift{1.0};
  CoefVec mid{0.5};
  SmoothnessProbe probe = smoothness_probe(shift, mid, 0.4, 400000, 88);
  CHECK(probe.eta_center == 0.5);
  CHECK(probe.lhs < 3.0 * probe.lhs_std_err);
}

TEST_CASE("ball-average regularity stays below the Holder budget") {
  double R = 2.0;
  CoefVec shift{1.0, 0.0};
  double lr = smoothness_constant(2, R);
  for (double r : {0.3, 1.0}) {
    CoefVec x{0.4, -0.3};
    SmoothnessProbe probe = smoothness_probe(shift, x, r, 200000, 414);
    CHECK(probe.lhs <= lr * probe.mass + 3.0 * probe.lhs_std_err);
  }
}

TEST_CASE("empty balls raise the hit-count error") {
  CoefVec shift{1.0};
  CoefVec x{50.0};
  try {
    smoothness_probe(shift, x, 0.1, 5000, 3);
    FAIL("expected InsufficientSamplesError");
  } catch (const InsufficientSamplesError& e) {
    CHECK(e.hits == 0);
  }
  CHECK_THROWS_AS(smoothness_probe(shift, CoefVec{0.0, 0.0}, 0.1, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(smoothness_probe(shift, x, -1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(smoothness_probe(CoefVec{}, CoefVec{}, 0.1, 100, 1),
                  std::invalid_argument);
}

TEST_CASE("Holder constant values") {
  CHECK(smoothness_constant(1, 2.0) ==
        doctest::Approx(111900.88567984986).epsilon(1e-12));
  CHECK(smoothness_constant(4, 1.0) ==
        doctest::Approx(2631.656590481038).epsilon(1e-12));
  CHECK_THROWS_AS(smoothness_constant(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(smoothness_constant(2, 0.0), std::invalid_argument);
}

TEST_CASE("neighbor-count admissibility predicate") {
  CHECK(knn_admissible(32, 1024, 4) == false);
  CHECK(knn_admissible(8, 1024, 4) == true);
  CHECK(knn_admissible(9, 1024, 4) == false);
  CHECK(knn_admissible(4, 256, 4) == true);
  CHECK(knn_admissible(5, 256, 4) == false);
  CHECK(knn_admissible(0, 100, 2) == false);
  CHECK(knn_admissible(101, 100, 2) == false);
  CHECK(max_admissible_k(1024, 4) == 8);
  CHECK(max_admissible_k(256, 4) == 4);
  CHECK(max_admissible_k(4096, 4) == 16);
  CHECK(max_admissible_k(1, 1) == 1);
  CHECK(max_admissible_k(100, 16) == 0);
  CHECK_THROWS_AS(max_admissible_k(0, 4), std::invalid_argument);
}

TEST_CASE("ambient dimension policy") {
  ExperimentConfig cfg = base_config();
  CHECK(ambient_dimension(cfg) == 256);
  cfg.n_grid = {1000000};
  CHECK(ambient_dimension(cfg) == 400);
  cfg.ambient_D = 12;
  CHECK(ambient_dimension(cfg) == 12);
  cfg.d_rule = DRule::fixed;
  cfg.d_fixed = 20;
  CHECK_THROWS_AS(ambient_dimension(cfg), std::invalid_argument);
  cfg.d_fixed = 12;
  CHECK(ambient_dimension(cfg) == 12);
  cfg.d_rule = DRule::split;
  cfg.ambient_D = 8;
  CHECK_THROWS_AS(ambient_dimension(cfg), std::invalid_argument);
  cfg.ambient_D = 16;
  CHECK(ambient_dimension(cfg) == 16);
  cfg.n_grid = {};
  CHECK_THROWS_AS(ambient_dimension(cfg), std::invalid_argument);
}

TEST_CASE("pair selection per grid index") {
  ExperimentConfig cfg = base_config();
  cfg.n_grid = {64, 512, 1000};
  PairAt a = pair_for_index(cfg, 0, 32);
  PairAt b = pair_for_index(cfg, 2, 32);
  CHECK(a.delta == 1.0);
  CHECK(b.delta == 1.0);
  CHECK(a.pair.f == b.pair.f);
  CHECK(a.pair.g == b.pair.g);
  CHECK(separation(a.pair) == doctest::Approx(1.0).epsilon(1e-10));

  cfg.delta_policy = DeltaPolicy::coupled;
  PairAt c0 = pair_for_index(cfg, 0, 32);
  PairAt c2 = pair_for_index(cfg, 2, 32);
  CHECK(c0.delta == doctest::Approx(std::pow(64.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(c2.delta == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(separation(c0.pair) == doctest::Approx(c0.delta).epsilon(1e-10));
  CHECK(c0.pair.f != c2.pair.f);
  CHECK_THROWS_AS(pair_for_index(cfg, 3, 32), std::invalid_argument);
}

TEST_CASE("fitted replicates expose their dimensions and match their rules") {
  ExperimentConfig cfg = base_config();
  cfg.n_grid = {1000};
  int D = ambient_dimension(cfg);
  PairAt at = pair_for_index(cfg, 0, D);

  FittedClassifier plugin = fit_replicate(cfg, at.pair, 1000, D, 0, 0);
  CHECK(plugin.d == 10);
  CHECK(plugin.k == 0);
  CHECK(plugin.rule.name == "plugin");

  cfg.classifier = Classifier::knn;
  FittedClassifier knn = fit_replicate(cfg, at.pair, 1000, D, 0, 0);
  CHECK(knn.rule.name == "knn");
  CHECK(knn.k == optimal_k(1000, 10));

  cfg.classifier = Classifier::bayes;
  FittedClassifier bayes = fit_replicate(cfg, at.pair, 1000, D, 0, 0);
  CHECK(bayes.rule.name == "bayes");
  CHECK(bayes.d == D);

  cfg.classifier = Classifier::truncated_bayes;
  FittedClassifier trunc = fit_replicate(cfg, at.pair, 1000, D, 0, 0);
  CHECK(trunc.rule.name == "truncated_bayes");
  CHECK(trunc.d == 10);

  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    CoefVec x(static_cast<std::size_t>(D));
    for (double& v : x) v = rng.normal();
    CHECK((plugin.posterior(x) >= 0.5) == (plugin.rule.classify(x) == 1));
    CHECK((knn.posterior(x) > 0.5) == (knn.rule.classify(x) == 1));
    CHECK((bayes.posterior(x) >= 0.5) == (bayes.rule.classify(x) == 1));
    CHECK((trunc.posterior(x) >= 0.5) == (trunc.rule.classify(x) == 1));
  }
}

TEST_CASE("oracle classifier rows show zero excess") {
  ExperimentConfig cfg = base_config();
  cfg.classifier = Classifier::truncated_bayes;
  cfg.ambient_D = 8;
  cfg.d_rule = DRule::fixed;
  cfg.d_fixed = 8;
  cfg.mc_inner = 2000;
  ExperimentResult result = risk_curve(cfg);
  REQUIRE(result.rows.size() == 2);
  for (const RiskCurveRow& row : result.rows) {
    CHECK(row.excess_mean == 0.0);
    CHECK(row.excess_stderr == 0.0);
    CHECK(row.d == 8);
    CHECK(row.classifier == "truncated_bayes");
  }
}

TEST_CASE("risk curve rows are deterministic and worker-independent") {
  ExperimentConfig cfg = base_config();
  ExperimentResult a = risk_curve(cfg, 1);
  ExperimentResult b = risk_curve(cfg, 1);
  ExperimentResult c = risk_curve(cfg, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  REQUIRE(a.rows.size() == c.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].excess_mean == b.rows[i].excess_mean);
    CHECK(a.rows[i].excess_mean == c.rows[i].excess_mean);
    CHECK(a.rows[i].excess_stderr == c.rows[i].excess_stderr);
    CHECK(a.rows[i].n == cfg.n_grid[i]);
    CHECK(a.rows[i].bayes_risk ==
          doctest::Approx(bayes_risk_exact(1.0)).epsilon(1e-15));
  }
}

TEST_CASE("plug-in excess shrinks from n = 256 to n = 8192") {
  ExperimentConfig cfg = base_config();
  cfg.delta_fixed = 0.5;
  cfg.n_grid = {256, 8192};
  cfg.mc_inner = 4000;
  cfg.mc_outer = 16;
  ExperimentResult result = risk_curve(cfg);
  REQUIRE(result.rows.size() == 2);
  const RiskCurveRow& small = result.rows[0];
  const RiskCurveRow& large = result.rows[1];
  double gap = small.excess_mean - large.excess_mean;
  double se = std::sqrt(small.excess_stderr * small.excess_stderr +
                        large.excess_stderr * large.excess_stderr);
  CHECK(gap > 3.0 * se);
}

TEST_CASE("coupled separations land in the delta column") {
  ExperimentConfig cfg = base_config();
  cfg.delta_policy = DeltaPolicy::coupled;
  cfg.n_grid = {64, 1000};
  ExperimentResult result = risk_curve(cfg);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].delta ==
        doctest::Approx(std::pow(64.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(result.rows[1].delta == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(result.rows[1].bayes_risk ==
        doctest::Approx(bayes_risk_exact(0.1)).epsilon(1e-14));
}

TEST_CASE("neighbor counts that exceed the training size are an error") {
  ExperimentConfig cfg = base_config();
  cfg.classifier = Classifier::knn;
  cfg.k_rule = KRule::fixed;
  cfg.k_fixed = 100;
  cfg.n_grid = {50};
  CHECK_THROWS_AS(risk_curve(cfg), std::invalid_argument);
}

TEST_CASE("split dimension selection stays inside the candidate set") {
  ExperimentConfig cfg = base_config();
  cfg.d_rule = DRule::split;
  cfg.ambient_D = 16;
  cfg.n_grid = {128};
  cfg.mc_outer = 6;
  cfg.mc_inner = 500;
  ExperimentResult result = risk_curve(cfg);
  REQUIRE(result.rows.size() == 1);
  int d = result.rows[0].d;
  bool in_set = d == 1 || d == 2 || d == 4 || d == 8 || d == 16;
  CHECK(in_set);
}

TEST_CASE("floor table structure at d = 4") {
  SobolevSpec spec{1.0, 1.3};
  ModelPair pair = make_pair_with_separation(spec, 1.0, 21, 4);
  auto rows = knn_floor_check(pair, {256, 1024}, 4000, 4, 31);
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].n == 256);
  CHECK(rows[0].k == 16);
  CHECK(rows[0].k_is_optimal);
  CHECK_FALSE(rows[0].admissible);
  CHECK(rows[1].n == 256);
  CHECK(rows[1].k == 4);
  CHECK_FALSE(rows[1].k_is_optimal);
  CHECK(rows[1].admissible);

  CHECK(rows[2].n == 1024);
  CHECK(rows[2].k == 32);
  CHECK_FALSE(rows[2].admissible);
  CHECK(rows[3].k == 8);
  CHECK(rows[3].admissible);

  for (const auto& row : rows) {
    CHECK(row.inv_k == 1.0 / row.k);
    CHECK(row.excess_mean >= -3.0 * row.excess_stderr);
    CHECK(row.excess_mean >= 0.0);
  }

  ModelPair wide = make_pair_with_separation(spec, 1.0, 21, 9);
  CHECK_THROWS_AS(knn_floor_check(wide, {256}, 100, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(knn_floor_check(pair, {}, 100, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(knn_floor_check(pair, {256}, 100, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("admissible floor rows decay no faster than 1/k") {
  SobolevSpec spec{1.0, 1.3};
  ModelPair pair = make_pair_with_separation(spec, 1.0, 21, 4);
  auto rows = knn_floor_check(pair, {256, 1024, 4096}, 8000, 6, 47);
  // Regress log-excess on log(1/k): positive slope no steeper than 1.5.
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) {
    if (row.admissible) pts.emplace_back(row.inv_k, row.excess_mean);
  }
  REQUIRE(pts.size() == 3);
  RateFit fit = rate_fit(pts);
  CHECK(fit.slope > 0.0);
  CHECK(fit.slope <= 1.5);
}

TEST_CASE("rate fit recovers exact power laws") {
  std::vector<std::pair<double, double>> rows;
  for (double n : {256.0, 512.0, 1024.0, 2048.0, 4096.0}) {
    rows.emplace_back(n, std::pow(n, -2.0 / 3.0));
  }
  RateFit fit = rate_fit(rows);
  CHECK(fit.slope == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(fit.r2 >= 1.0 - 1e-12);
  CHECK(fit.points_used == 5);

  std::vector<std::pair<double, double>> scaled;
  for (const auto& [n, y] : rows) scaled.emplace_back(n, 7.3 * y);
  RateFit sfit = rate_fit(scaled);
  CHECK(sfit.slope == doctest::Approx(fit.slope).epsilon(1e-12));
  CHECK(sfit.intercept ==
        doctest::Approx(fit.intercept + std::log(7.3)).epsilon(1e-10));
}

TEST_CASE("rate fit on a polylog-damped power law") {
  std::vector<std::pair<double, double>> rows;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = 8; j <= 14; ++j) {
    double n = std::pow(2.0, j);
    double y = std::pow(n, -2.0 / 3.0) * std::log(n) * std::log(n);
    rows.emplace_back(n, y);
    xs.push_back(std::log(n));
    ys.push_back(std::log(y));
  }
  RateFit fit = rate_fit(rows);

  // Independent least-squares route.
  double mx = testutil::mean_of(xs);
  double my = testutil::mean_of(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  CHECK(fit.slope == doctest::Approx(sxy / sxx).epsilon(1e-12));
  CHECK(fit.slope > -2.0 / 3.0);
  CHECK(fit.slope < -0.30);
  CHECK(fit.r2 > 0.95);
}

TEST_CASE("rate fit drops non-positive rows and validates input") {
  std::vector<std::pair<double, double>> rows = {
      {100.0, 0.1}, {200.0, 0.05}, {400.0, 0.0}, {800.0, 0.01}, {1600.0, -0.2}};
  RateFit fit = rate_fit(rows);
  CHECK(fit.points_used == 3);

  std::vector<std::pair<double, double>> few = {{100.0, 0.1}, {200.0, 0.05}};
  CHECK_THROWS_AS(rate_fit(few), std::invalid_argument);
  std::vector<std::pair<double, double>> flat = {
      {100.0, 0.1}, {100.0, 0.2}, {100.0, 0.3}};
  CHECK_THROWS_AS(rate_fit(flat), std::invalid_argument);
}
