#include <doctest.h>

#include <cmath>
#include <random>

#include "eonspectra/error.hpp"
#include "eonspectra/runprob.hpp"

using namespace eonspectra;

TEST_SUITE("runprob") {

TEST_CASE("frozen values") {
  CHECK(run_prob(1, 1, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(run_prob(3, 2, 0.9) == 0.0);
  CHECK(std::abs(run_prob(2, 3, 0.5) - 0.375) <= 1e-15);
  CHECK(std::abs(run_prob(2, 4, 0.5) - 0.5) <= 1e-15);
  CHECK(std::abs(run_prob(2, 3, 0.25) - 0.109375) <= 1e-15);
}

TEST_CASE("oracle values") {
  CHECK(std::abs(run_prob_oracle(2, 3, 0.5) - 0.375) <= 1e-15);
  CHECK(run_prob_oracle(1, 9, 1.0) == doctest::Approx(1.0));
  for (int s = 1; s <= 4; ++s) CHECK(run_prob_oracle(s, 8, 0.0) == 0.0);
  CHECK_THROWS_AS((void)run_prob_oracle(2, 21, 0.5), Error);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS((void)run_prob(0, 4, 0.5), Error);
  CHECK_THROWS_AS((void)run_prob(1, 4, 1.1), Error);
  CHECK_THROWS_AS((void)run_prob(1, 4, -0.01), Error);
  CHECK(run_prob(1, 4, 1.0 + 1e-13) == 1.0);
  CHECK(run_prob(1, 4, -1e-13) == 0.0);
}

TEST_CASE("ramp") {
  CHECK(ramp(-1.0) == 0.0);
  CHECK(ramp(0.0) == 0.0);
  CHECK(ramp(2.5) == 2.5);
}

TEST_CASE("recursion matches mask enumeration") {
  for (int f = 0; f <= 14; ++f) {
    for (int s = 1; s <= f; ++s) {
      for (int k = 0; k <= 10; ++k) {
        const double rho = k / 10.0;
        CHECK(std::abs(run_prob(s, f, rho) - run_prob_oracle(s, f, rho)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("memo table agrees with direct evaluation") {
  RunProbTable table(0.63);
  for (int f = 12; f >= 0; --f) {
    for (int s = 1; s <= 6; ++s) CHECK(table(s, f) == run_prob(s, f, 0.63));
  }
}

TEST_CASE("property: boundary values") {
  for (int f = 1; f <= 30; ++f) {
    for (int s = 1; s <= f; ++s) {
      CHECK(run_prob(s, f, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(run_prob(s, f, 0.0) == 0.0);
    }
  }
}

TEST_CASE("property: monotone in rho, F and S") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> fs(1, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    const int f = fs(rng);
    const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(f));
    const double a = u(rng);
    const double b = u(rng);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    CHECK(run_prob(s, f, lo) <= run_prob(s, f, hi) + 1e-15);
    CHECK(run_prob(s, f, lo) <= run_prob(s, f + 1, lo) + 1e-15);
    CHECK(run_prob(s + 1, f, lo) <= run_prob(s, f, lo) + 1e-15);
  }
}

TEST_CASE("property: a common run is rarer than two independent runs") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int f = 1 + static_cast<int>(rng() % 32);
    const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(f));
    const double a = u(rng);
    const double b = u(rng);
    CHECK(run_prob(s, f, a * b) <= run_prob(s, f, a) * run_prob(s, f, b) + 1e-14);
  }
}

}  // TEST_SUITE
