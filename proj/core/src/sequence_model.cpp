#include "funclass/sequence_model.hpp"

#include <cmath>
#include <stdexcept>

#include "funclass/rng.hpp"

namespace funclass {

double l2_dot(const CoefVec& a, const CoefVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l2_dot: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm_sq(const CoefVec& v) {
  double acc = 0.0;
  for (double c : v) acc += c * c;
  return acc;
}

double l2_norm(const CoefVec& v) { return std::sqrt(l2_norm_sq(v)); }

double sobolev_norm_sq(const CoefVec& h, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("sobolev_norm_sq: s must be > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    double j = static_cast<double>(i + 1);
    acc += h[i] * h[i] * std::pow(j, 2.0 * s);
  }
  return acc;
}

CoefVec project(const CoefVec& h, int d) {
  if (d < 0 || static_cast<std::size_t>(d) > h.size()) {
    throw std::invalid_argument("project: d out of range");
  }
  CoefVec out(h);
  for (std::size_t i = static_cast<std::size_t>(d); i < out.size(); ++i) {
    out[i] = 0.0;
  }
  return out;
}

double separation(const ModelPair& pair) {
  return separation(pair, static_cast<int>(pair.f.size()));
}

double separation(const ModelPair& pair, int d) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument("separation: pair dimension mismatch");
  }
  if (d < 0 || static_cast<std::size_t>(d) > pair.f.size()) {
    throw std::invalid_argument("separation: d out of range");
  }
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    double diff = pair.f[i] - pair.g[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

namespace {

// Unnormalized decaying profile c_j = j^-(s+1); its Sobolev energy is the
// convergent series sum j^-2 over the occupied coordinates.
void fill_poly_decay(CoefVec& c, int first, double s) {
  for (std::size_t i = static_cast<std::size_t>(first); i < c.size(); ++i) {
    double j = static_cast<double>(i + 1);
    c[i] = std::pow(j, -(s + 1.0));
  }
}

// Scales coordinates [first, D) so their Sobolev energy equals target.
void rescale_tail(CoefVec& c, int first, double s, double target) {
  double energy = 0.0;
  for (std::size_t i = static_cast<std::size_t>(first); i < c.size(); ++i) {
    double j = static_cast<double>(i + 1);
    energy += c[i] * c[i] * std::pow(j, 2.0 * s);
  }
  if (energy == 0.0) {
    if (target > 0.0) {
      throw std::invalid_argument("rescale_tail: zero profile, nonzero target");
    }
    return;
  }
  double scale = std::sqrt(target / energy);
  for (std::size_t i = static_cast<std::size_t>(first); i < c.size(); ++i) {
    c[i] *= scale;
  }
}

void check_spec(const SobolevSpec& spec, const char* where) {
  if (!(spec.s > 0.0) || !(spec.R > 0.0)) {
    throw std::invalid_argument(std::string(where) + ": need s > 0 and R > 0");
  }
}

}  // namespace

CoefVec make_boundary_function(const SobolevSpec& spec, BoundaryProfile profile,
                               std::uint64_t seed, int D) {
  check_spec(spec, "make_boundary_function");
  if (D < 1) throw std::invalid_argument("make_boundary_function: D < 1");
  CoefVec c(static_cast<std::size_t>(D), 0.0);
  switch (profile) {
    case BoundaryProfile::spike:
      c[0] = spec.R;
      break;
    case BoundaryProfile::poly_decay:
      fill_poly_decay(c, 0, spec.s);
      rescale_tail(c, 0, spec.s, spec.R * spec.R);
      break;
    case BoundaryProfile::random_signs: {
      fill_poly_decay(c, 0, spec.s);
      Rng rng = Rng::stream(seed, stream_tag::boundary);
      for (double& v : c) {
        if (rng.bernoulli_half()) v = -v;
      }
      rescale_tail(c, 0, spec.s, spec.R * spec.R);
      break;
    }
  }
  return c;
}

ModelPair make_pair_with_separation(const SobolevSpec& spec, double delta,
                                    std::uint64_t seed, int D) {
  check_spec(spec, "make_pair_with_separation");
  if (D < 1) throw std::invalid_argument("make_pair_with_separation: D < 1");
  if (delta < 0.0) {
    throw std::invalid_argument("make_pair_with_separation: delta < 0");
  }
  if (delta > 2.0 * spec.R) {
    throw std::invalid_argument(
        "make_pair_with_separation: infeasible separation, delta > 2R");
  }
  // Coordinate 1 carries the whole separation; the remaining ellipsoid budget
  // is spent on a shared sign-randomized decaying tail.
  double half = delta / 2.0;
  double budget = spec.R * spec.R - half * half;
  CoefVec filler(static_cast<std::size_t>(D), 0.0);
  if (D > 1 && budget > 0.0) {
    fill_poly_decay(filler, 1, spec.s);
    Rng rng = Rng::stream(seed, stream_tag::filler);
    for (std::size_t i = 1; i < filler.size(); ++i) {
      if (rng.bernoulli_half()) filler[i] = -filler[i];
    }
    rescale_tail(filler, 1, spec.s, budget);
  }
  ModelPair pair{filler, filler};
  pair.f[0] = half;
  pair.g[0] = -half;
  return pair;
}

int sample_point_prefix(const ModelPair& pair, int dims, std::uint64_t seed,
                        std::uint64_t index, CoefVec& x) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument("sample_point_prefix: pair dimension mismatch");
  }
  if (dims < 0 || static_cast<std::size_t>(dims) > pair.f.size()) {
    throw std::invalid_argument("sample_point_prefix: dims out of range");
  }
  Rng rng = Rng::stream(seed, index);
  int y = rng.bernoulli_half();
  const CoefVec& mean = y ? pair.f : pair.g;
  x.resize(static_cast<std::size_t>(dims));
  for (int i = 0; i < dims; ++i) {
    x[static_cast<std::size_t>(i)] =
        mean[static_cast<std::size_t>(i)] + rng.normal();
  }
  return y;
}

Dataset sample_dataset(const ModelPair& pair, int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample_dataset: n < 0");
  int D = static_cast<int>(pair.f.size());
  Dataset data;
  data.points.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LabeledPoint& p = data.points[static_cast<std::size_t>(i)];
    p.y = sample_point_prefix(pair, D, seed, static_cast<std::uint64_t>(i),
                              p.x);
  }
  return data;
}

int pair_support(const ModelPair& pair) {
  if (pair.f.size() != pair.g.size()) {
    throw std::invalid_argument("pair_support: pair dimension mismatch");
  }
  for (std::size_t i = pair.f.size(); i > 0; --i) {
    if (pair.f[i - 1] != pair.g[i - 1]) return static_cast<int>(i);
  }
  return 0;
}

std::string to_string(BoundaryProfile profile) {
  switch (profile) {
    case BoundaryProfile::spike:
      return "spike";
    case BoundaryProfile::poly_decay:
      return "poly_decay";
    case BoundaryProfile::random_signs:
      return "random_signs";
  }
  return "unknown";
}

}  // namespace funclass
