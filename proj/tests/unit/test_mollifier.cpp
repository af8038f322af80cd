#include "mollified/arithmetic.hpp"
#include "mollified/characters.hpp"
#include "mollified/mollifier.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace mollified;
using namespace mollified::mollifier;
using cplx = std::complex<double>;

namespace {

MollifierSpec quadratic_profile() { return {{0.0, 2.0, -1.0}, 0.4}; }

cplx direct_mollifier(const characters::DirichletCharacter& chi, const MollifierSpec& spec, double y) {
  cplx sum = 0.0;
  for (std::uint64_t n = 1; static_cast<double>(n) <= y; ++n) {
    const int mu = arithmetic::moebius(n);
    if (mu == 0) continue;
    double p = 0.0;
    const double x = std::log(y / n) / std::log(y);
    for (std::size_t j = spec.coefficients.size(); j-- > 0;) p = p * x + spec.coefficients[j];
    sum += static_cast<double>(mu) * chi(static_cast<std::int64_t>(n)) * p / std::sqrt(static_cast<double>(n));
  }
  return sum;
}

}  // namespace

TEST_CASE("profile evaluation") {
  const auto lin = linear_P(0.4);
  CHECK(eval_P(lin, 0.5) == 0.5);
  CHECK(eval_P(lin, 1.0) == 1.0);
  const auto quad = quadratic_profile();
  CHECK(eval_P(quad, 0.5) == 0.75);
  CHECK(eval_P_prime(quad, 0.5) == 1.0);
  CHECK(eval_P(quad, 1.0) == 1.0);
  CHECK_THROWS_AS(eval_P(quad, 1.5), std::domain_error);
  CHECK_THROWS_AS(eval_P(quad, -0.1), std::domain_error);
}

TEST_CASE("exact integrals") {
  const auto quad = quadratic_profile();
  CHECK(integral_P_squared(quad) == doctest::Approx(8.0 / 15.0).epsilon(1e-15));
  CHECK(integral_P_prime_squared(quad) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(integral_P_squared(linear_P(0.3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(integral_P_prime_squared(linear_P(0.3)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(quadratic_profile().validate());
  CHECK_THROWS_AS((MollifierSpec{{0.1, 0.9}, 0.4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((MollifierSpec{{0.0, 0.9}, 0.4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((MollifierSpec{{}, 0.4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((MollifierSpec{{0.0, 1.0}, 0.5}).validate(), std::invalid_argument);
  CHECK_NOTHROW((MollifierSpec{{0.0, 1.0}, 0.7}).validate(1.0));
  CHECK_THROWS_AS((MollifierSpec{{0.0, 1.0}, 0.0}).validate(1.0), std::invalid_argument);
}

TEST_CASE("spec JSON") {
  const auto spec = optimal_P_truncated(2, 0.49, 9);
  const auto back = MollifierSpec::from_json(spec.to_json());
  CHECK(back == spec);
  const auto defaulted = MollifierSpec::from_json(R"({"coefficients": [0, 1]})", 0.3);
  CHECK(defaulted.theta == 0.3);
  CHECK(defaulted.coefficients == std::vector<double>{0.0, 1.0});
  // a bare array is the coefficient list
  CHECK(MollifierSpec::from_json("[0, 1]", 0.2) == MollifierSpec{{0.0, 1.0}, 0.2});
  CHECK_THROWS_AS(MollifierSpec::from_json("3"), std::invalid_argument);
  CHECK_THROWS_AS(MollifierSpec::from_json(R"({"coefficients": "x"})"), std::invalid_argument);
  CHECK_THROWS_AS(MollifierSpec::from_json(R"({"coefficients": [0, 1], "degree": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(MollifierSpec::from_json("{not json"), std::invalid_argument);
}

TEST_CASE("truncated sinh profile is normalized exactly") {
  for (unsigned k : {1u, 2u, 3u, 5u, 10u, 25u}) {
    for (double theta : {0.1, 0.25, 0.49, 0.5 - 1e-8}) {
      for (unsigned degree : {3u, 5u, 9u, 15u}) {
        const auto P = optimal_P_truncated(k, theta, degree);
        CHECK(P.coefficients.size() == degree + 1);
        CHECK(P.coefficients[0] == 0.0);
        CHECK(eval_P(P, 0.0) == 0.0);
        CHECK(eval_P(P, 1.0) == 1.0);
        CHECK(P.theta == theta);
      }
    }
  }
  CHECK_THROWS(optimal_P_truncated(0, 0.4));
  CHECK_THROWS(optimal_P_truncated(1, 0.5));
  CHECK_THROWS(optimal_P_truncated(1, 0.4, 8));
}

TEST_CASE("truncated sinh profile converges to the sinh solution") {
  const unsigned k = 2;
  const double theta = 0.49;
  const double L = theta * k * std::sqrt((2.0 * k + 1) / (2.0 * k - 1));
  double previous = 1e300;
  for (unsigned degree : {3u, 5u, 9u, 15u}) {
    const auto P = optimal_P_truncated(k, theta, degree);
    double worst = 0.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) worst = std::max(worst, std::abs(eval_P(P, t) - std::sinh(L * t) / std::sinh(L)));
    CHECK(worst < previous);
    previous = worst;
  }
  CHECK(previous < 1e-12);
}

TEST_CASE("mollifier of length below 2 is P(1)") {
  for (const auto& chi : characters::enumerate_even_primitive(13)) {
    CHECK(mollifier_value(chi, quadratic_profile(), 1.9) == cplx(1.0));
  }
}

TEST_CASE("three-term mollifier") {
  const auto trivial = characters::enumerate_characters(1).front();
  const double expected = 1.0 - std::log(1.5) / std::log(3.0) / std::sqrt(2.0);
  CHECK(std::abs(mollifier_value(trivial, linear_P(0.4), 3.0) - expected) < 1e-15);
  CHECK(std::abs(expected - 0.7390) < 1e-4);
}

TEST_CASE("mollifier matches the direct sum") {
  const auto spec = optimal_P_truncated(1, 0.49, 9);
  for (std::uint64_t q : {101, 1009}) {
    const double y = spec.y(q);
    CHECK(y == doctest::Approx(std::pow(static_cast<double>(q), 0.49)));
    const Mollifier M(spec, y);
    for (const auto& chi : characters::enumerate_even_primitive(q)) {
      const cplx expected = direct_mollifier(chi, spec, y);
      REQUIRE(std::abs(M(chi) - expected) < 1e-12);
      REQUIRE(std::abs(M(chi.values(M.support())) - expected) < 1e-12);
    }
  }
}

TEST_CASE("mollifier terms are squarefree and bounded") {
  const auto spec = optimal_P_truncated(3, 0.45, 9);
  const double y = 400.0;
  const Mollifier M(spec, y);
  double bound = 0.0, maxP = 0.0;
  for (std::uint64_t n = 1; n <= 400; ++n) bound += 1.0 / std::sqrt(static_cast<double>(n));
  for (double t = 0.0; t <= 1.0; t += 0.001) maxP = std::max(maxP, std::abs(eval_P(spec, t)));
  for (const auto& term : M.terms()) CHECK(arithmetic::moebius(term.n) != 0);
  CHECK(M.support() <= 400);
  for (const auto& chi : characters::enumerate_characters(41)) CHECK(std::abs(M(chi)) <= bound * maxP);
}

TEST_CASE("mollifier is linear in the coefficients") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  const auto family = characters::enumerate_even_primitive(211);
  for (int trial = 0; trial < 20; ++trial) {
    MollifierSpec a{{0.0}, 0.45}, b{{0.0}, 0.45}, sum{{0.0}, 0.45};
    for (int j = 1; j <= 6; ++j) {
      const double c = gauss(rng), split = gauss(rng);
      a.coefficients.push_back(split);
      b.coefficients.push_back(c - split);
      sum.coefficients.push_back(c);
    }
    const double y = 90.0;
    const auto& chi = family[static_cast<std::size_t>(trial) % family.size()];
    const cplx lhs = mollifier_value(chi, sum, y);
    const cplx rhs = mollifier_value(chi, a, y) + mollifier_value(chi, b, y);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}
