#include <doctest.h>

#include <cmath>
#include <set>

#include "asl/rng.hpp"

using namespace asl;

TEST_CASE("mix_seed separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base = 0; base < 50; ++base) {
    for (std::uint64_t stream = 0; stream < 50; ++stream) {
      seen.insert(mix_seed(base, stream));
    }
  }
  CHECK(seen.size() == 2500);
}

TEST_CASE("same seed reproduces the stream") {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform stays in [0,1) and looks flat") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int is unbiased across a small range") {
  Rng rng(13);
  const int n = 120000;
  int counts[6] = {0};
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(6)];
  for (int c : counts) {
    CHECK(static_cast<double>(c) / n == doctest::Approx(1.0 / 6.0).epsilon(0.05));
  }
  CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal moments") {
  Rng rng(31);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(1.5, 2.0);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(1.5).epsilon(0.02));
  CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("normal with zero sigma is exact") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(rng.normal(0.25, 0.0) == 0.25);
}
