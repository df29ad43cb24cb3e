#include "funclass/lowerbound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "funclass/rng.hpp"

namespace funclass {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr long long kCandidateBudget = 1000000;

int hamming(std::uint64_t a, std::uint64_t b) {
  return std::popcount(a ^ b);
}

}  // namespace

PackingSet vg_packing(int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("vg_packing: m < 1");
  if (m > 64) throw std::invalid_argument("vg_packing: m > 64 unsupported");
  std::size_t target =
      static_cast<std::size_t>(std::ceil(std::exp(m / 8.0)));
  std::uint64_t mask = m == 64 ? ~0ULL : ((1ULL << m) - 1);

  Rng rng = Rng::stream(seed, stream_tag::packing);
  std::vector<std::uint64_t> kept;
  kept.reserve(target);
  // Greedy filter: keep a candidate iff it stays > m/4 away from everything
  // already kept.  4 * distance > m avoids any division.
  for (long long attempt = 0;
       attempt < kCandidateBudget && kept.size() < target; ++attempt) {
    std::uint64_t w = rng.next_u64() & mask;
    bool ok = true;
    for (std::uint64_t k : kept) {
      if (4 * hamming(w, k) <= m) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(w);
  }
  if (kept.size() < target) {
    throw std::runtime_error(
        "vg_packing: construction failed to reach " + std::to_string(target) +
        " words for m = " + std::to_string(m) + " within the candidate "
        "budget");
  }
  // Exact re-verification, independent of the search loop above.
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if (4 * hamming(kept[i], kept[j]) <= m) {
        throw std::logic_error("vg_packing: pairwise distance check failed");
      }
    }
  }

  PackingSet packing;
  packing.m = m;
  packing.words.reserve(kept.size());
  for (std::uint64_t w : kept) {
    std::vector<int> word(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
      word[static_cast<std::size_t>(b)] = (w >> b) & 1 ? 1 : -1;
    }
    packing.words.push_back(std::move(word));
  }
  return packing;
}

ThetaSet build_theta_set(double delta, double eps, int d, std::uint64_t seed) {
  if (d < 7) {
    throw std::invalid_argument("build_theta_set: d >= 7 violated");
  }
  if (!(delta > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("build_theta_set: need delta > 0 and eps > 0");
  }
  // The relative slack admits instances that satisfy the constraint exactly,
  // like delta = 0.3 with sqrt(9) * 0.1, despite decimal rounding.
  if (delta * (1.0 + 1e-12) < std::sqrt(static_cast<double>(d)) * eps) {
    throw std::invalid_argument(
        "build_theta_set: delta >= sqrt(d) * eps violated");
  }
  ThetaSet tset;
  tset.delta = delta;
  tset.eps = eps;
  tset.d = d;
  tset.packing = vg_packing(d - 1, seed);
  tset.thetas.reserve(tset.packing.words.size());
  for (const std::vector<int>& w : tset.packing.words) {
    CoefVec theta(static_cast<std::size_t>(d), 0.0);
    theta[0] = delta;
    for (int b = 0; b < d - 1; ++b) {
      theta[static_cast<std::size_t>(b) + 1] =
          eps * w[static_cast<std::size_t>(b)];
    }
    tset.thetas.push_back(std::move(theta));
  }
  return tset;
}

double pairwise_angle(const CoefVec& a, const CoefVec& b) {
  double na = l2_norm(a);
  double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("pairwise_angle: zero vector");
  }
  double c = l2_dot(a, b) / (na * nb);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

AngleCheck angle_bounds_check(const ThetaSet& tset) {
  AngleCheck check;
  check.lower = std::sqrt(static_cast<double>(tset.d - 1)) * tset.eps /
                (2.0 * tset.delta);
  check.upper = kPi / 2.0;
  check.min_angle = kPi;
  check.max_angle = 0.0;
  const double tol = 1e-12;
  std::size_t n = tset.thetas.size();
  if (n < 2) throw std::invalid_argument("angle_bounds_check: need >= 2 means");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double angle = pairwise_angle(tset.thetas[i], tset.thetas[j]);
      check.min_angle = std::min(check.min_angle, angle);
      check.max_angle = std::max(check.max_angle, angle);
      if (angle < check.lower - tol || angle > check.upper + tol) {
        check.violations.emplace_back(static_cast<int>(i),
                                      static_cast<int>(j));
      }
    }
  }
  check.pass = check.violations.empty();
  return check;
}

ConeSpec make_cone(const CoefVec& z, const CoefVec& u, const CoefVec& v) {
  if (z.size() != 2 || u.size() != 2 || v.size() != 2) {
    throw std::invalid_argument("make_cone: apex and directions must be 2-d");
  }
  double det = u[0] * v[1] - u[1] * v[0];
  if (det == 0.0) {
    throw std::invalid_argument("make_cone: directions are collinear");
  }
  ConeSpec cone{z, u, v, pairwise_angle(u, v)};
  return cone;
}

RiskEstimate cone_mass_mc(const ConeSpec& cone, long long n_mc,
                          std::uint64_t seed) {
  if (n_mc < 1) throw std::invalid_argument("cone_mass_mc: n_mc < 1");
  double det = cone.u[0] * cone.v[1] - cone.u[1] * cone.v[0];
  if (det == 0.0) {
    throw std::invalid_argument("cone_mass_mc: directions are collinear");
  }
  Rng rng = Rng::stream(seed, stream_tag::inner);
  long long hits = 0;
  for (long long i = 0; i < n_mc; ++i) {
    double w0 = rng.normal() - cone.z[0];
    double w1 = rng.normal() - cone.z[1];
    // Coordinates of the sample in the (u, v) frame.
    double a = (cone.v[1] * w0 - cone.v[0] * w1) / det;
    double b = (-cone.u[1] * w0 + cone.u[0] * w1) / det;
    if ((a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)) ++hits;
  }
  double mean = static_cast<double>(hits) / static_cast<double>(n_mc);
  double se = std::sqrt(std::max(mean * (1.0 - mean), 0.0) /
                        static_cast<double>(n_mc));
  return {mean, se, n_mc, RiskKind::misclassification};
}

double cone_mass_lower_bound(const ConeSpec& cone) {
  return cone.angle / (2.0 * kPi) * std::exp(-l2_norm_sq(cone.z));
}

double kl_training(const CoefVec& theta, const CoefVec& theta0, long long n) {
  if (theta.size() != theta0.size()) {
    throw std::invalid_argument("kl_training: dimension mismatch");
  }
  if (n < 1) throw std::invalid_argument("kl_training: n < 1");
  double dist_sq = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double diff = theta[i] - theta0[i];
    dist_sq += diff * diff;
  }
  return static_cast<double>(n) * dist_sq / 4.0;
}

double fano_bound(double avg_kl, double n_hypotheses) {
  if (avg_kl < 0.0) throw std::invalid_argument("fano_bound: avg_kl < 0");
  if (!(n_hypotheses >= 2.0)) {
    throw std::invalid_argument("fano_bound: need at least 2 hypotheses");
  }
  return (avg_kl + std::log(2.0)) / std::log(n_hypotheses);
}

RiskEstimate l1_classifier_distance_mc(const CoefVec& theta,
                                       const CoefVec& theta_prime,
                                       long long n_mc, std::uint64_t seed) {
  if (theta.size() != theta_prime.size() || theta.empty()) {
    throw std::invalid_argument(
        "l1_classifier_distance_mc: means must share a positive dimension");
  }
  if (n_mc < 1) {
    throw std::invalid_argument("l1_classifier_distance_mc: n_mc < 1");
  }
  std::size_t d = theta.size();
  Rng rng = Rng::stream(seed, stream_tag::inner);
  CoefVec w(d);
  long long hits = 0;
  for (long long i = 0; i < n_mc; ++i) {
    double norm_w = 0.0;
    double dist_a = 0.0;
    double dist_b = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      w[c] = rng.normal();
      norm_w += w[c] * w[c];
      double da = w[c] - theta[c];
      double db = w[c] - theta_prime[c];
      dist_a += da * da;
      dist_b += db * db;
    }
    int label_a = dist_a <= norm_w ? 1 : 0;
    int label_b = dist_b <= norm_w ? 1 : 0;
    if (label_a != label_b) ++hits;
  }
  double mean = static_cast<double>(hits) / static_cast<double>(n_mc);
  double se = std::sqrt(std::max(mean * (1.0 - mean), 0.0) /
                        static_cast<double>(n_mc));
  return {mean, se, n_mc, RiskKind::misclassification};
}

double l1_distance_lower_bound(double delta, double eps, int d) {
  if (!(delta > 0.0) || !(eps > 0.0) || d < 2) {
    throw std::invalid_argument(
        "l1_distance_lower_bound: need delta > 0, eps > 0, d >= 2");
  }
  return std::sqrt(static_cast<double>(d - 1)) * eps /
         (4.0 * kPi * delta) * std::exp(-delta * delta);
}

MinimaxBudget minimax_budget(long long n, const SobolevSpec& spec,
                             double delta) {
  if (n < 1) throw std::invalid_argument("minimax_budget: n < 1");
  if (!(spec.s > 0.0) || !(spec.R > 0.0)) {
    throw std::invalid_argument("minimax_budget: need s > 0 and R > 0");
  }
  if (!(delta > 0.0 && delta <= spec.R / 2.0)) {
    throw std::invalid_argument(
        "minimax_budget: delta outside (0, R/2] is not covered");
  }
  double expo = 1.0 / (2.0 * spec.s + 1.0);
  double nn = static_cast<double>(n);
  double threshold = std::pow(spec.R, expo) * std::pow(nn, -spec.s * expo);
  MinimaxBudget budget;
  if (delta < threshold) {
    budget.regime = "slow";
    budget.value = std::exp(-2.0 * std::pow(spec.R, 2.0 * expo)) *
                   std::pow(spec.R, expo) * std::pow(nn, -spec.s * expo);
  } else {
    budget.regime = "fast";
    budget.value = std::exp(-2.0 * delta * delta) / delta *
                   std::pow(spec.R, 2.0 * expo) *
                   std::pow(nn, -2.0 * spec.s * expo);
  }
  return budget;
}

bool theta_set_sobolev_admissible(const ThetaSet& tset,
                                  const SobolevSpec& spec) {
  if (!(spec.s > 0.0) || !(spec.R > 0.0)) {
    throw std::invalid_argument(
        "theta_set_sobolev_admissible: need s > 0 and R > 0");
  }
  double lhs = (tset.d - 1) * tset.eps * tset.eps *
               std::pow(static_cast<double>(tset.d), 2.0 * spec.s);
  double rhs = spec.R * spec.R - tset.delta * tset.delta;
  return lhs <= rhs;
}

}  // namespace funclass
