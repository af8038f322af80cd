#pragma once

// Desk-scale checks of the auxiliary mollifier sums:
//   S_j(d) = sum_{n <= y/d, (n, dq) = 1} mu(n)/n (log n)^j P(log(y/dn) / log y)
// against its main terms M_j(d) and error envelope E_j(d), and
//   J_j(y) = sum_{d <= y, (d, q) = 1} mu(d)^2/d f(d) (log(y/d))^j
// against (1/(j+1)) C_f (log y)^{j+1}, plus log-log rate fits.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mollified/lfunction.hpp"
#include "mollified/mollifier.hpp"

namespace mollified::asymptotics {

using mollifier::MollifierSpec;

/// Exact finite sum. Requires 1 <= d <= y, gcd(d, q) = 1 (q = 0 is treated
/// as 1).
double S_j_exact(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec);

/// dq/(phi(dq) log y) P'(t) for j = 0, -dq/phi(dq) P(t) for j = 1, 0 for
/// j >= 2, with t = log(y/d) / log y.
double M_j_main(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec);

/// (log y)^{j-2} (log log y)^4 (1 + d^t log y / y^t) prod_{p | dq} (1 + p^{2u-1})^2
/// with t = u = 1 / log log y. Requires y >= 16.
double E_j_envelope(std::uint64_t d, unsigned j, double y, std::uint64_t q);

/// A multiplicative f given on primes, with f(p) = 1 + amplitude p^{-exponent}
/// + (faster terms). amplitude and exponent drive the tail correction of the
/// Euler product; amplitude = 0 means f(p) - 1 decays faster than any power
/// used here.
struct PrimeFunction {
  std::string name;
  std::function<double(std::uint64_t)> at_prime;
  double amplitude = 0.0;
  double exponent = 1.0;

  /// f = 1.
  static PrimeFunction one();
  /// f(p) = 1 + a p^{-c}; requires c > 0 and a > -1 (so 1 + f(p)/p > 0).
  static PrimeFunction power(double a, double c);
};

struct EulerProduct {
  double value = 0.0;            // truncated product times tail correction
  double truncated = 0.0;        // prod over p <= cutoff
  double tail_correction = 1.0;  // exp(-1/(P ln P) + a P^{-c}/(c ln P))
  std::uint64_t cutoff = 0;
};

inline constexpr std::uint64_t kEulerCutoff = 100000;

/// prod_p (1 - 1/p)(1 + f(p)/p) prod_{p | q} (1 + f(p)/p)^{-1}. The primes
/// past the cutoff P contribute log(1 - 1/p) + log(1 + f(p)/p)
///   = (f(p) - 1)/p - 1/p^2 + O(p^{-2-c}),
/// and sum_{p > P} p^{-1-s} ~ P^{-s}/(s ln P) by the prime number theorem,
/// which gives the correction factor. Throws AccuracyError if the correction
/// moves the product by more than 1e-3 relative (the descriptor is then too
/// slowly convergent for the cutoff).
EulerProduct lemma_constant(const PrimeFunction& f, std::uint64_t q, std::uint64_t cutoff = kEulerCutoff);

enum class SummationOrder { ascending, descending };

double J_j_exact(unsigned j, double y, std::uint64_t q, const PrimeFunction& f,
                 SummationOrder order = SummationOrder::ascending);
double J_j_main(unsigned j, double y, std::uint64_t q, const PrimeFunction& f);

struct LemmaCheckRecord {
  std::string lemma;  // "S_j" or "J_j"
  std::uint64_t d = 0;
  std::string f;      // descriptor name for J_j
  unsigned j = 0;
  double y = 0.0;
  std::uint64_t q = 0;
  double exact = 0.0;
  double main = 0.0;
  double relative_gap = 0.0;  // |exact - main| / max(|main|, 1e-300)
  double envelope = 0.0;      // E_j for S_j records, 0 otherwise
};

LemmaCheckRecord S_j_check(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec);
LemmaCheckRecord J_j_check(unsigned j, double y, std::uint64_t q, const PrimeFunction& f);

/// Least-squares line through (log x, log y).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
};
RateFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Grid runners

enum class GridSize { small, full };

/// |S_j - M_j| <= C E_j with one C: C is fitted on the fit grid (the maximum
/// ratio) and checked on the hold-out grid.
struct EnvelopeFit {
  std::vector<LemmaCheckRecord> fit_records;
  std::vector<LemmaCheckRecord> holdout_records;
  double constant = 0.0;       // max ratio on the fit grid
  double holdout_max = 0.0;    // max ratio on the hold-out grid
  bool holds = false;          // holdout_max <= constant
};

/// d <= 50 (20 for the small grid) coprime to q, j in {0, 1, 2}, q in {1, 7};
/// fit on y in {1e3, 1e4}, hold out y = 1e5.
EnvelopeFit envelope_fit(const MollifierSpec& spec, GridSize grid = GridSize::full);

/// Relative gap of J_j from y to y^2. slope is the log-log slope of the gap
/// against log y over all points (expected -1).
struct GapScaling {
  std::vector<LemmaCheckRecord> records;  // pairs (y, y^2) in order
  std::vector<double> ratios;             // gap(y^2) / gap(y) per pair
  RateFit fit;
};

/// y in {1e2, 1e3} (small) or {1e2, 1e3, 3e3} (full), each with y^2.
GapScaling gap_scaling(unsigned j, std::uint64_t q, const PrimeFunction& f, GridSize grid = GridSize::full);

/// |S(x) - main term| of the diagonal sums at the given x and its log-log
/// slope (expected about -1/2).
struct DiagonalRate {
  std::vector<double> x;
  std::vector<double> error;
  RateFit fit;
};
DiagonalRate diagonal_rate(const lfunction::ShiftPair& pair, lfunction::Sign sign, std::uint64_t q,
                           const std::vector<double>& xs, const lfunction::AFEConfig& cfg = {});

}  // namespace mollified::asymptotics
