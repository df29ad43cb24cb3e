#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "funclass/rng.hpp"
#include "test_util.hpp"

using funclass::Rng;
using funclass::derive_seed;

TEST_CASE("same seed reproduces the same draw sequence") {
  Rng a(12345);
  Rng b(12345);
  for (int i = 0; i < 64; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(12345);
  Rng d(12345);
  for (int i = 0; i < 64; ++i) {
    CHECK(c.normal() == d.normal());
    CHECK(c.uniform() == d.uniform());
  }
}

TEST_CASE("stream derivation separates ids") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t id0 = 0; id0 < 8; ++id0) {
    for (std::uint64_t id1 = 0; id1 < 8; ++id1) {
      for (std::uint64_t id2 = 0; id2 < 8; ++id2) {
        seen.insert(Rng::stream(7, id0, id1, id2).next_u64());
      }
    }
  }
  CHECK(seen.size() == 512);
  CHECK(Rng::stream(7, 1).next_u64() != Rng::stream(8, 1).next_u64());
}

TEST_CASE("stream draws are insensitive to sibling stream consumption") {
  Rng a = Rng::stream(99, 4, 2);
  Rng burn = Rng::stream(99, 4, 1);
  for (int i = 0; i < 1000; ++i) burn.next_u64();
  Rng b = Rng::stream(99, 4, 2);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed matches the first draw of the derived stream") {
  CHECK(derive_seed(3, 1, 4, 1) == Rng::stream(3, 1, 4, 1).next_u64());
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 256; ++i) seen.insert(derive_seed(5, i));
  CHECK(seen.size() == 256);
}

TEST_CASE("uniform stays in [0,1) and looks uniform") {
  Rng r(2024);
  const int n = 200000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = r.uniform();
    CHECK(xs[i] >= 0.0);
    CHECK(xs[i] < 1.0);
  }
  double ks = testutil::ks_statistic(xs, [](double x) {
    return std::min(1.0, std::max(0.0, x));
  });
  CHECK(ks < 0.005);
  CHECK(testutil::mean_of(xs) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_pos stays in (0,1]") {
  Rng r(11);
  for (int i = 0; i < 100000; ++i) {
    double x = r.uniform_pos();
    CHECK(x > 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("normal matches the standard normal law") {
  Rng r(77);
  const int n = 200000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = r.normal();
  CHECK(std::abs(testutil::mean_of(xs)) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(testutil::variance_of(xs) == doctest::Approx(1.0).epsilon(0.02));
  double ks = testutil::ks_statistic(xs, testutil::normal_cdf_ref);
  CHECK(ks < 0.005);
}

TEST_CASE("bernoulli_half is a fair coin with binary output") {
  Rng r(5);
  long long ones = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    int b = r.bernoulli_half();
    CHECK((b == 0 || b == 1));
    ones += b;
  }
  double frac = static_cast<double>(ones) / n;
  CHECK(std::abs(frac - 0.5) < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("below produces uniform integers in range") {
  Rng r(9);
  std::vector<long long> counts(7, 0);
  const int n = 140000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t v = r.below(7);
    CHECK(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (long long c : counts) {
    CHECK(std::abs(static_cast<double>(c) - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
  }
  CHECK(r.below(1) == 0);
}
