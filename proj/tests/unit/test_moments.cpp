#include "mollified/arithmetic.hpp"
#include "mollified/cache.hpp"
#include "mollified/characters.hpp"
#include "mollified/errors.hpp"
#include "mollified/lfunction.hpp"
#include "mollified/moments.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "json.hpp"

using namespace mollified;
using namespace mollified::moments;
using lfunction::ShiftPair;

namespace {

const MollifierSpec& optimal_k1() {
  static const MollifierSpec spec = mollifier::optimal_P_truncated(1, 0.49, 9);
  return spec;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mollified-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("second-moment constant examples") {
  const MollifierSpec lin{{0.0, 1.0}, 0.5};
  const auto c1 = C_k_theta(lin, 1);
  CHECK(c1.C_k_theta == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(c1.derivative_term == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c1.constant_term == 0.5);
  CHECK(c1.value_term == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const auto c2 = C_k_theta(lin, 2);
  CHECK(c2.C_k_theta == doctest::Approx(0.4 + 0.5 + 2.0 / 9.0).epsilon(1e-15));
  CHECK(std::abs(c2.C_k_theta - 1.1222) < 1e-4);

  const MollifierSpec half{{0.0, 1.0}, 0.25};
  const auto h = C_k_theta(half, 2);
  CHECK(h.derivative_term == doctest::Approx(2 * c2.derivative_term).epsilon(1e-15));
  CHECK(h.value_term == doctest::Approx(c2.value_term / 2).epsilon(1e-15));
  for (unsigned k = 1; k <= 6; ++k) {
    const auto c = C_k_theta(mollifier::optimal_P_truncated(k, 0.49, 9), k);
    CHECK(c.derivative_term > 0.0);
    CHECK(c.value_term > 0.0);
    CHECK(c.C_k_theta == c.derivative_term + c.constant_term + c.value_term);
  }
  CHECK_THROWS(C_k_theta(lin, 0));
  CHECK_THROWS(S1(0, 101, lin));
}

TEST_CASE("predicted moments") {
  const std::uint64_t q = 211;
  const double phi_plus = arithmetic::phi_plus(q).to_double();
  const double L = std::log(static_cast<double>(q));
  CHECK(S1_predicted(1, q, optimal_k1()) == std::complex<double>(-phi_plus * L, 0.0));
  CHECK(S1_predicted(2, q, optimal_k1()).real() == doctest::Approx(phi_plus * L * L).epsilon(1e-15));
  CHECK(S2_predicted(1, q, optimal_k1()) == doctest::Approx(C_k_theta(optimal_k1(), 1).C_k_theta * phi_plus * L * L).epsilon(1e-15));
  for (unsigned k = 1; k <= 3; ++k) {
    const auto spec = mollifier::optimal_P_truncated(k, 0.49, 9);
    CHECK(predicted_cauchy_bound(k, q, spec) == doctest::Approx(phi_plus / C_k_theta(spec, k).C_k_theta).epsilon(1e-14));
  }
}

TEST_CASE("Cauchy bound arithmetic") {
  CHECK(cauchy_bound({3.0, 4.0}, 5.0) == 5.0);
  CHECK_THROWS_AS(cauchy_bound(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(cauchy_bound(1.0, -1.0), std::domain_error);
}

TEST_CASE("classification") {
  CHECK(classify(1e-3, 1e-12, 1e-8) == Vanishing::nonzero);
  CHECK(classify(1e-10, 1e-12, 1e-8) == Vanishing::indistinguishable);
  CHECK(classify(1e-8, 1e-9, 1e-8) == Vanishing::error_dominated);
  CHECK(classify(0.0, 0.0, 1e-8) == Vanishing::indistinguishable);
}

TEST_CASE("family evaluation is deterministic across worker counts") {
  const auto one = evaluate_family(499, 1, optimal_k1(), {}, FamilyOptions{1});
  const auto three = evaluate_family(499, 1, optimal_k1(), {}, FamilyOptions{3});
  REQUIRE(one.records.size() == three.records.size());
  CHECK(one.records.size() == characters::enumerate_even_primitive(499).size());
  CHECK(one.nodes == family_nodes(1));
  CHECK(family_nodes(0) == family_nodes(2));
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].derivative == three.records[i].derivative);
    CHECK(one.records[i].mollifier == three.records[i].mollifier);
    CHECK(one.records[i].error_estimate == three.records[i].error_estimate);
  }
  CHECK(S2(one, optimal_k1()).empirical == S2(three, optimal_k1()).empirical);
}

TEST_CASE("family records match single-character evaluation") {
  const std::uint64_t q = 101;
  const auto family = evaluate_family(q, 2, optimal_k1());
  const auto chars = characters::enumerate_even_primitive(q);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto d = lfunction::central_derivative(chars[i], 2, {}, family.radius, family.nodes);
    CHECK(family.records[i].character_id == chars[i].id());
    CHECK(std::abs(family.records[i].derivative - d.value) < 1e-10);
    CHECK(std::abs(family.records[i].mollifier - mollifier::mollifier_value(chars[i], optimal_k1())) < 1e-12);
    CHECK(family.records[i].error_estimate < 1e-8);
  }
}

TEST_CASE("cached family values are reused bit for bit") {
  const auto dir = scratch_dir("moments");
  const cache::LValueCache store(dir);
  FamilyOptions opts;
  opts.cache = &store;
  const auto fresh = evaluate_family(211, 1, optimal_k1(), {}, opts);
  CHECK_FALSE(fresh.cache_hit);
  const auto cached = evaluate_family(211, 2, optimal_k1(), {}, opts);
  CHECK(cached.cache_hit);
  const auto direct = evaluate_family(211, 2, optimal_k1());
  REQUIRE(cached.records.size() == direct.records.size());
  for (std::size_t i = 0; i < direct.records.size(); ++i) {
    CHECK(cached.records[i].derivative == direct.records[i].derivative);
    CHECK(cached.records[i].error_estimate == direct.records[i].error_estimate);
  }
  lfunction::AFEConfig other;
  other.cutoff_multiplier = 4.0;
  CHECK_FALSE(evaluate_family(211, 1, optimal_k1(), other, opts).cache_hit);
  std::filesystem::remove_all(dir);
}

TEST_CASE("first moment without derivatives tends to phi+ P(1)") {
  double previous = 0.0;
  for (std::uint64_t q : {101, 499, 1009}) {
    // S1 itself requires k >= 1; sum the order-0 records directly
    const auto family = evaluate_family(q, 0, optimal_k1());
    std::complex<double> s1 = 0.0;
    for (const auto& r : family.records) s1 += r.derivative * r.mollifier;
    const double ratio = s1.real() / arithmetic::phi_plus(q).to_double();
    CHECK(ratio > previous);
    CHECK(ratio < 1.0);
    CHECK(std::abs(s1.imag()) < 1e-9 * std::abs(s1));
    previous = ratio;
  }
  CHECK(previous > 0.95);
}

TEST_CASE("first derivative moment falls below phi+ log q") {
  // the leading phi+ log q term cancels: S1 / phi+ shrinks with q instead of
  // tending to -log q
  double previous = 1e300;
  for (std::uint64_t q : {101, 499, 1009}) {
    const auto s1 = S1(1, q, optimal_k1());
    const double per_char = s1.empirical.real() / arithmetic::phi_plus(q).to_double();
    CHECK(per_char < previous);
    CHECK(per_char > 0.0);
    CHECK(std::abs(s1.empirical / s1.predicted) < 0.25);
    previous = per_char;
  }
}

TEST_CASE("second derivative moment has the predicted sign at q = 3001") {
  const auto spec = mollifier::optimal_P_truncated(2, 0.49, 9);
  const auto s1 = S1(2, 3001, spec);
  CHECK(s1.empirical.real() < 0.0);
  CHECK(s1.predicted.real() > 0.0);  // (-1)^k with k = 2
}

TEST_CASE("second moment trend and Cauchy inequality") {
  double previous_gap = 1e300;
  for (std::uint64_t q : {101, 499, 1009}) {
    for (unsigned k : {1u, 2u}) {
      const auto spec = mollifier::optimal_P_truncated(k, 0.49, 9);
      const auto family = evaluate_family(q, k, spec);
      const auto s1 = S1(family, spec);
      const auto s2 = S2(family, spec);
      CHECK(s2.empirical >= 0.0);
      const auto count = nonvanishing_count(family);
      const double bound = cauchy_bound(s1.empirical, s2.empirical);
      CHECK(bound >= 0.0);
      CHECK(bound <= static_cast<double>(count.nonzero + count.error_dominated) + 1e-9);
      CHECK(count.nonzero == count.family_size);  // every derivative found non-zero
      if (k == 1) {
        const double gap = std::abs(s2.empirical / s2.predicted - 1.0);
        CHECK(gap < previous_gap);
        previous_gap = gap;
      }
    }
  }
}

TEST_CASE("second moment is independent of summation order") {
  const auto family = evaluate_family(499, 1, optimal_k1());
  const double reference = S2(family, optimal_k1()).empirical;
  auto shuffled = family;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
    double sum = 0.0;
    for (const auto& r : shuffled.records) sum += std::norm(r.derivative) * std::norm(r.mollifier);
    CHECK(std::abs(sum - reference) <= 1e-12 * reference);
    CHECK(std::abs(S2(shuffled, optimal_k1()).empirical - reference) <= 1e-12 * reference);
  }
}

TEST_CASE("non-vanishing counts") {
  const auto c = nonvanishing_count(0, 5);
  CHECK(c.family_size == 1);
  CHECK(c.nonzero == 1);
  std::size_t previous = SIZE_MAX;
  for (double tol : {1e-12, 1e-8, 1e-2, 0.5, 1.0, 2.0, 5.0, 1e3}) {
    const auto n = nonvanishing_count(1, 211, {}, tol);
    CHECK(n.nonzero <= previous);
    CHECK(n.nonzero + n.indistinguishable + n.error_dominated == n.family_size);
    CHECK(n.tolerance == tol);
    previous = n.nonzero;
  }
  CHECK(previous == 0);
}

TEST_CASE("moment report") {
  const auto report = moment_report(211, 1, optimal_k1());
  CHECK(report.family_size == characters::enumerate_even_primitive(211).size());
  CHECK(report.S2_empirical >= 0.0);
  CHECK(report.cauchy_bound >= 0.0);
  CHECK(report.cauchy_bound <= static_cast<double>(report.family_size));
  CHECK(report.nonvanishing_count <= report.family_size);
  CHECK(report.cauchy_bound == doctest::Approx(std::norm(report.S1_empirical) / report.S2_empirical).epsilon(1e-15));
  CHECK(report.tolerance_used == kDefaultTolerance);

  const auto j = nlohmann::ordered_json::parse(report.to_json(R"({"command": "test"})"));
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"q", "k", "spec", "S1_empirical", "S1_predicted", "S2_empirical",
                                         "S2_predicted", "cauchy_bound", "nonvanishing_count",
                                         "indistinguishable_count", "error_dominated_count", "max_error_estimate",
                                         "family_size", "tolerance_used", "manifest"});
  CHECK(j["S1_empirical"].size() == 2);
  CHECK(j["S1_empirical"].contains("re"));
  CHECK(j["spec"]["theta"] == 0.49);
  CHECK(j["manifest"]["command"] == "test");
  CHECK_FALSE(nlohmann::json::parse(report.to_json()).contains("manifest"));
  CHECK_THROWS_AS(moment_report(211, 1, MollifierSpec{{0.0, 1.0}, 0.5}), std::invalid_argument);
}

TEST_CASE("shifted second moment symmetries") {
  const std::uint64_t q = 101;
  const ShiftPair pair{{0.02, 0.01}, {-0.01, 0.03}};
  const ShiftPair reflected{std::conj(pair.beta), std::conj(pair.alpha)};
  const auto J = shifted_second_moment(pair, q, optimal_k1());
  const auto Jr = shifted_second_moment(reflected, q, optimal_k1());
  CHECK(std::abs(J - std::conj(Jr)) < 1e-10 * std::abs(J));

  const auto real_shift = shifted_second_moment(ShiftPair{0.03, 0.03}, q, optimal_k1());
  CHECK(std::abs(real_shift.imag()) < 1e-9);
  CHECK(real_shift.real() >= 0.0);

  const ShiftPair generic{0.01, 0.005};
  const auto single = shifted_second_moment(generic, q, optimal_k1(), {}, ShiftedPath::single);
  const auto product = shifted_second_moment(generic, q, optimal_k1(), {}, ShiftedPath::product);
  CHECK(std::abs(single - product) < 1e-8 * std::abs(single));
  CHECK_THROWS_AS(shifted_second_moment(ShiftPair{0.01, -0.01}, q, optimal_k1(), {}, ShiftedPath::product), PoleError);
}

TEST_CASE("shifted second moment with the trivial mollifier") {
  const std::uint64_t q = 101;
  const MollifierSpec trivial{{0.0, 1.0}, 0.1};  // y = 101^0.1 < 2, so M = 1
  REQUIRE(trivial.y(q) < 2.0);
  const ShiftPair pair{0.02, 0.01};
  std::complex<double> direct = 0.0;
  for (const auto& chi : characters::enumerate_even_primitive(q))
    direct += lfunction::single_afe(chi, 0.5 + pair.alpha) * lfunction::single_afe(chi.conjugate(), 0.5 + pair.beta);
  CHECK(std::abs(shifted_second_moment(pair, q, trivial) - direct) < 1e-10 * std::abs(direct));
}

TEST_CASE("shifted second moment is continuous across alpha + beta = 0") {
  const std::uint64_t q = 101;
  const std::complex<double> alpha = 0.02;
  const auto at_pole = shifted_second_moment(ShiftPair{alpha, -alpha}, q, optimal_k1(), {}, ShiftedPath::single);
  std::vector<std::complex<double>> values;
  double previous = 1e300;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const auto v = shifted_second_moment(ShiftPair{alpha, -alpha + delta}, q, optimal_k1(), {}, ShiftedPath::product);
    const double gap = std::abs(v - at_pole);
    CHECK(gap < previous);
    previous = gap;
    values.push_back(v);
  }
  // J is holomorphic in delta: one Richardson step removes the linear term
  const auto extrapolated = (10.0 * values[2] - values[1]) / 9.0;
  CHECK(std::abs(extrapolated - at_pole) < 1e-6 * std::abs(at_pole));
}

TEST_CASE("diagonal kernel") {
  const std::uint64_t q = 101;
  const ShiftPair pair{0.01, 0.02};
  CHECK(std::abs(diagonal_Z(2, 3, 5, pair, q) - diagonal_Z(3, 2, 5, ShiftPair{pair.beta, pair.alpha}, q)) < 1e-12);

  const ShiftPair even{0.01, 0.01};
  const auto expected = arithmetic::zeta_q(1.02, q) +
                        std::pow(q / std::numbers::pi, -0.02) * lfunction::weight_g(even, lfunction::Sign::minus, 0.0) *
                            arithmetic::zeta_q(0.98, q);
  CHECK(std::abs(diagonal_Z(1, 1, 1, even, q) - expected) < 1e-12 * std::abs(expected));
  CHECK_THROWS_AS(diagonal_Z(1, 1, 1, ShiftPair{0.01, -0.01}, q), PoleError);

  for (auto [m, n, c] : {std::array<std::uint64_t, 3>{1, 1, 1}, {2, 3, 1}, {1, 4, 3}}) {
    const double a = 1e-4;
    const auto plus = diagonal_Z(m, n, c, ShiftPair{a, a}, q);
    const auto minus = diagonal_Z(m, n, c, ShiftPair{-a, -a}, q);
    const double limit = diagonal_Z_limit(m, n, c, q);
    CHECK(std::isfinite(limit));
    CHECK(std::abs(0.5 * (plus + minus) - limit) < 1e-6);
  }
}
