#pragma once

// Check suites shared by the verify-identities / verify-lemmas commands and
// the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include "mollified/asymptotics.hpp"
#include "mollified/lfunction.hpp"

namespace mollified::cli {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  double worst = 0.0;       // worst deviation in the suite's own metric
  double tolerance = 0.0;
  std::string detail;       // first failing case, if any
};

/// Divisor formula for sum chi(m) conj chi(n) over even primitive chi against
/// the brute-force character sum, q <= q_max, m, n <= mn_max coprime to q.
/// Absolute tolerance 1e-10.
SuiteResult orthogonality_suite(std::uint64_t q_max, std::int64_t mn_max = 50, unsigned jobs = 0);

/// phi*(q) against a count of primitive characters, q <= q_max; exact.
SuiteResult primitive_count_suite(std::uint64_t q_max, unsigned jobs = 0);

/// | |tau(chi)| / sqrt(q) - 1 | <= 1e-12 for every primitive chi, q <= q_max.
SuiteResult gauss_sum_suite(std::uint64_t q_max, unsigned jobs = 0);

/// |Lambda(s, chi) - eps Lambda(1 - s, conj chi)| <= 1e-9 max(|Lambda|, 1) over
/// even primitive chi mod each q, `samples` points with Re s in [0.3, 0.7] and
/// |Im s| <= 10 (fixed seed).
SuiteResult functional_equation_suite(const std::vector<std::uint64_t>& moduli, unsigned samples = 20,
                                      const lfunction::AFEConfig& cfg = {}, unsigned jobs = 0);

struct LemmaSuite {
  std::vector<asymptotics::LemmaCheckRecord> records;
  std::vector<SuiteResult> checks;

  bool passed() const;
};

/// Diagonal-sum decay (slope <= -0.4 for both signs, q = 7, a = b = 0.01,
/// x in {1e2, 1e3, 1e4}), the S_j envelope fit with one constant, and the
/// J_j gap halving (log-log slope -1 +- 0.15 and every y -> y^2 ratio in
/// [2^-1.15, 2^-0.85]).
LemmaSuite lemma_suite(asymptotics::GridSize grid = asymptotics::GridSize::full);

}  // namespace mollified::cli
