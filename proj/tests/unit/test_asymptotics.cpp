#include "mollified/arithmetic.hpp"
#include "mollified/asymptotics.hpp"
#include "mollified/errors.hpp"
#include "mollified/mollifier.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace mollified;
using namespace mollified::asymptotics;

namespace {

const MollifierSpec kLinear{{0.0, 1.0}, 0.5};

double direct_S(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec) {
  double sum = 0.0;
  const double ly = std::log(y);
  for (std::uint64_t n = 1; static_cast<double>(n) <= y / d; ++n) {
    if (std::gcd(n, d * q) != 1) continue;
    const int mu = arithmetic::moebius(n);
    if (mu == 0) continue;
    const double ln = std::log(static_cast<double>(n));
    sum += mu / static_cast<double>(n) * std::pow(ln, j) * mollifier::eval_P(spec, std::log(y / (d * n)) / ly);
  }
  return sum;
}

}  // namespace

TEST_CASE("S_j with a single surviving term") {
  const auto spec = mollifier::optimal_P_truncated(1, 0.45, 9);
  const double y = 100.0;
  const std::uint64_t d = 60;  // y / d < 2
  CHECK(S_j_exact(d, 0, y, 1, spec) == doctest::Approx(mollifier::eval_P(spec, std::log(y / d) / std::log(y))).epsilon(1e-15));
  CHECK(S_j_exact(d, 1, y, 1, spec) == 0.0);
  CHECK(S_j_exact(d, 3, y, 1, spec) == 0.0);
}

TEST_CASE("S_j matches the direct sum") {
  CHECK(S_j_exact(1, 0, 100.0, 1, kLinear) == doctest::Approx(direct_S(1, 0, 100.0, 1, kLinear)).epsilon(1e-13));
  const auto spec = mollifier::optimal_P_truncated(2, 0.45, 9);
  for (unsigned j : {0u, 1u, 2u}) {
    for (std::uint64_t d : {1, 2, 5, 11}) CHECK(S_j_exact(d, j, 5000.0, 7, spec) == doctest::Approx(direct_S(d, j, 5000.0, 7, spec)).epsilon(1e-12));
  }
}

TEST_CASE("S_j depends on q only through its prime divisors") {
  const auto spec = mollifier::optimal_P_truncated(1, 0.45, 9);
  for (unsigned j : {0u, 1u}) {
    CHECK(S_j_exact(5, j, 3000.0, 12, spec) == S_j_exact(5, j, 3000.0, 6, spec));
    CHECK(S_j_exact(1, j, 3000.0, 49, spec) == S_j_exact(1, j, 3000.0, 7, spec));
    // q = 0 is read as 1
    CHECK(S_j_exact(3, j, 3000.0, 0, spec) == S_j_exact(3, j, 3000.0, 1, spec));
  }
  CHECK_THROWS_AS(S_j_exact(6, 0, 100.0, 3, spec), std::invalid_argument);
  CHECK_THROWS_AS(S_j_exact(200, 0, 100.0, 1, spec), std::invalid_argument);
}

TEST_CASE("main terms") {
  CHECK(M_j_main(1, 2, 1e4, 1, kLinear) == 0.0);
  CHECK(M_j_main(3, 5, 1e4, 7, kLinear) == 0.0);
  CHECK(M_j_main(1, 0, std::exp(10.0), 1, kLinear) == doctest::Approx(0.1).epsilon(1e-14));
  for (double y : {50.0, 1e3, 1e7}) CHECK(M_j_main(1, 1, y, 1, kLinear) == doctest::Approx(-1.0).epsilon(1e-14));
  // dq / phi(dq) = 7/6 at d = 1, q = 7
  CHECK(M_j_main(1, 1, 1e4, 7, kLinear) == doctest::Approx(-7.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("error envelope") {
  for (double y : {1e3, 1e5}) {
    for (unsigned j = 0; j < 3; ++j) CHECK(E_j_envelope(4, j + 1, y, 7) / E_j_envelope(4, j, y, 7) == doctest::Approx(std::log(y)).epsilon(1e-13));
  }
  const double y = 1e4, ly = std::log(y), lly = std::log(ly), t = 1.0 / lly;
  const double bare = std::pow(ly, -2.0) * std::pow(lly, 4) * (1 + ly / std::pow(y, t));
  CHECK(E_j_envelope(1, 0, y, 1) == doctest::Approx(bare).epsilon(1e-14));
  const double factor3 = std::pow(1 + std::pow(3.0, 2 * t - 1), 2);
  CHECK(E_j_envelope(1, 0, y, 3) == doctest::Approx(bare * factor3).epsilon(1e-14));
  CHECK_THROWS_AS(E_j_envelope(1, 0, 15.0, 1), std::invalid_argument);
}

TEST_CASE("Euler product constant") {
  const auto one = lemma_constant(PrimeFunction::one(), 1);
  CHECK(one.value == doctest::Approx(6.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-7));
  CHECK(one.cutoff == kEulerCutoff);
  CHECK(one.tail_correction < 1.0);
  CHECK(std::abs(std::log(one.tail_correction)) < 1e-3);
  CHECK(one.value == doctest::Approx(one.truncated * one.tail_correction).epsilon(1e-15));

  // removing the factors at p | q
  const auto seven = lemma_constant(PrimeFunction::one(), 7);
  CHECK(seven.value == doctest::Approx(one.value / (1.0 + 1.0 / 7.0)).epsilon(1e-14));
  const auto f = PrimeFunction::power(0.5, 0.5);
  CHECK(f.name == "1+0.5p^-0.5");
  CHECK(f.at_prime(4) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(lemma_constant(f, 1).value > one.value);
  CHECK_THROWS_AS(lemma_constant(PrimeFunction::power(0.5, 0.01), 1), AccuracyError);
  CHECK_THROWS(PrimeFunction::power(0.5, 0.0));
  CHECK_THROWS(PrimeFunction::power(-1.0, 1.0));
}

TEST_CASE("J_j summation order") {
  const auto f = PrimeFunction::power(0.5, 0.5);
  for (unsigned j : {0u, 1u, 2u}) {
    for (double y : {1e3, 1e5}) {
      const double up = J_j_exact(j, y, 7, f, SummationOrder::ascending);
      const double down = J_j_exact(j, y, 7, f, SummationOrder::descending);
      CHECK(std::abs(up - down) <= 1e-12 * std::abs(up));
    }
  }
}

TEST_CASE("J_j against its main term") {
  const auto one = PrimeFunction::one();
  const double c = lemma_constant(one, 1).value;
  for (double y : {1e3, 1e4, 1e5}) CHECK(J_j_main(0, y, 1, one) == doctest::Approx(c * std::log(y)).epsilon(1e-15));
  CHECK(J_j_main(2, 1e4, 1, one) == doctest::Approx(c * std::pow(std::log(1e4), 3) / 3).epsilon(1e-15));

  // relative gap ~ C / log y for j = 0
  std::vector<double> logs, gaps;
  for (double y : {1e3, 1e4, 1e5}) {
    const auto r = J_j_check(0, y, 1, one);
    CHECK(r.lemma == "J_j");
    CHECK(r.relative_gap == doctest::Approx(std::abs(r.exact - r.main) / std::abs(r.main)).epsilon(1e-15));
    logs.push_back(std::log(y));
    gaps.push_back(r.relative_gap);
  }
  const auto fit = loglog_fit(logs, gaps);
  CHECK(std::abs(fit.slope + 1.0) <= 0.15);
}

TEST_CASE("gap halves from y to y squared") {
  for (unsigned j : {0u, 1u}) {
    const auto g = gap_scaling(j, 1, PrimeFunction::one(), GridSize::small);
    CHECK(g.records.size() == 4);
    CHECK(g.ratios.size() == 2);
    for (double r : g.ratios) CHECK(std::abs(std::log2(r) + 1.0) <= 0.15);
    CHECK(std::abs(g.fit.slope + 1.0) <= 0.15);
  }
  const auto g = gap_scaling(0, 7, PrimeFunction::power(0.5, 0.5), GridSize::small);
  CHECK(std::abs(g.fit.slope + 1.0) <= 0.15);
}

TEST_CASE("envelope fit holds with one constant") {
  const auto fit = envelope_fit(mollifier::optimal_P_truncated(1, 0.49, 9), GridSize::small);
  CHECK_FALSE(fit.fit_records.empty());
  CHECK_FALSE(fit.holdout_records.empty());
  CHECK(fit.constant > 0.0);
  CHECK(fit.holds);
  CHECK(fit.holdout_max <= fit.constant);
  for (const auto& r : fit.fit_records) {
    CHECK(r.lemma == "S_j");
    CHECK(std::abs(r.exact - r.main) <= fit.constant * r.envelope * (1 + 1e-12));
    CHECK(std::gcd(r.d, std::max<std::uint64_t>(r.q, 1)) == 1);
    if (r.j >= 2) CHECK(r.main == 0.0);
  }
}

TEST_CASE("log-log fit") {
  const std::vector<double> x = {1.0, 10.0, 100.0, 1000.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  const auto fit = loglog_fit(x, y);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-13));
  CHECK_THROWS(loglog_fit({1.0}, {1.0}));
  CHECK_THROWS(loglog_fit({1.0, 1.0}, {1.0, 2.0}));
  CHECK_THROWS(loglog_fit({1.0, 2.0}, {0.0, 2.0}));
}

TEST_CASE("diagonal decay rate") {
  const lfunction::ShiftPair pair{0.01, 0.01};
  for (auto sign : {lfunction::Sign::plus, lfunction::Sign::minus}) {
    const auto rate = diagonal_rate(pair, sign, 7, {1e2, 1e3, 1e4});
    CHECK(rate.error.size() == 3);
    CHECK(rate.fit.slope <= -0.4);
    // the error stays under C tau(7) x^-0.49 with C fitted at the first point
    const double C = rate.error[0] / (2 * std::pow(1e2, -0.49));
    for (std::size_t i = 0; i < 3; ++i) CHECK(rate.error[i] <= 1.0001 * C * 2 * std::pow(rate.x[i], -0.49));
  }
}
