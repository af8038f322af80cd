#pragma once

// Mollified moments over the even primitive characters mod q:
//   S1 = sum L^(k)(1/2, chi) M(chi),  S2 = sum |L^(k)(1/2, chi)|^2 |M(chi)|^2,
// their main terms, the Cauchy lower bound |S1|^2 / S2 for the number of
// non-vanishing derivatives, and the shifted second moment with its diagonal
// kernel Z.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mollified/lfunction.hpp"
#include "mollified/mollifier.hpp"

namespace mollified::cache {
class LValueCache;
}

namespace mollified::moments {

using cplx = std::complex<double>;
using lfunction::AFEConfig;
using mollifier::MollifierSpec;

inline constexpr double kDefaultTolerance = 1e-8;

struct MomentPrediction {
  double C_k_theta = 0.0;
  double derivative_term = 0.0;  // theta^{-1}/(2k+1) int P'^2
  double constant_term = 0.5;
  double value_term = 0.0;       // theta k^2/(2k-1) int P^2
};

/// Exact monomial integration; theta from the profile. Requires k >= 1.
MomentPrediction C_k_theta(const MollifierSpec& spec, unsigned k);

// ---------------------------------------------------------------------------
// Family evaluation

struct FamilyOptions {
  unsigned jobs = 0;                         // 0: hardware parallelism
  double radius = lfunction::kDefaultRadius;
  unsigned nodes = 0;                        // 0: 64 + 16 max(k, 2)
  const cache::LValueCache* cache = nullptr; // node values are read/written here when set
};

/// Node count used when FamilyOptions::nodes is 0. Orders k <= 2 share one
/// node set so that a cached family serves k = 0, 1, 2.
unsigned family_nodes(unsigned k);

struct CharacterRecord {
  std::uint64_t character_id = 0;
  cplx derivative;            // L^(k)(1/2, chi)
  double error_estimate = 0.0;
  cplx mollifier;             // M(chi)
};

struct FamilyEvaluation {
  std::uint64_t q = 0;
  unsigned k = 0;
  double radius = 0.0;
  unsigned nodes = 0;
  bool cache_hit = false;
  std::vector<CharacterRecord> records;  // enumeration order
};

/// L^(k)(1/2, chi) and M(chi) for every even primitive chi mod q. Requires
/// q >= 3 and a spec valid for theta < 1. Records are independent of the
/// worker count.
FamilyEvaluation evaluate_family(std::uint64_t q, unsigned k, const MollifierSpec& spec,
                                 const AFEConfig& cfg = {}, const FamilyOptions& options = {});

struct FirstMoment {
  cplx empirical;
  cplx predicted;
};
struct SecondMoment {
  double empirical = 0.0;
  double predicted = 0.0;
};

/// (-1)^k phi+(q) P(1) log^k q.
cplx S1_predicted(unsigned k, std::uint64_t q, const MollifierSpec& spec);
/// C_k_theta phi+(q) log^{2k} q.
double S2_predicted(unsigned k, std::uint64_t q, const MollifierSpec& spec);

/// Sums in enumeration order.
FirstMoment S1(const FamilyEvaluation& family, const MollifierSpec& spec);
SecondMoment S2(const FamilyEvaluation& family, const MollifierSpec& spec);

FirstMoment S1(unsigned k, std::uint64_t q, const MollifierSpec& spec, const AFEConfig& cfg = {},
               const FamilyOptions& options = {});
SecondMoment S2(unsigned k, std::uint64_t q, const MollifierSpec& spec, const AFEConfig& cfg = {},
                const FamilyOptions& options = {});

/// |S1|^2 / S2. Throws std::domain_error for S2 <= 0.
double cauchy_bound(cplx s1, double s2);
/// |S1_predicted|^2 / S2_predicted, which is phi+(q) P(1)^2 / C_k_theta.
double predicted_cauchy_bound(unsigned k, std::uint64_t q, const MollifierSpec& spec);

// ---------------------------------------------------------------------------
// Non-vanishing

enum class Vanishing {
  nonzero,               // |v| - err > tol
  indistinguishable,     // |v| + err <= tol
  error_dominated,       // the error estimate straddles tol
};

Vanishing classify(cplx value, double error_estimate, double tol);

struct NonvanishingCount {
  std::size_t nonzero = 0;
  std::size_t indistinguishable = 0;
  std::size_t error_dominated = 0;
  std::size_t family_size = 0;
  double tolerance = 0.0;
  double max_error_estimate = 0.0;
};

/// Tri-state count at tolerance tol > 0; `nonzero` is the number of
/// characters with |L^(k)(1/2, chi)| > tol beyond doubt.
NonvanishingCount nonvanishing_count(const FamilyEvaluation& family, double tol = kDefaultTolerance);
/// Evaluates the family without a mollifier (M is not needed for counting).
NonvanishingCount nonvanishing_count(unsigned k, std::uint64_t q, const AFEConfig& cfg = {},
                                     double tol = kDefaultTolerance, const FamilyOptions& options = {});

// ---------------------------------------------------------------------------
// Report

struct MomentReport {
  std::uint64_t q = 0;
  unsigned k = 0;
  MollifierSpec spec;
  cplx S1_empirical;
  cplx S1_predicted;
  double S2_empirical = 0.0;
  double S2_predicted = 0.0;
  double cauchy_bound = 0.0;
  std::size_t nonvanishing_count = 0;
  std::size_t indistinguishable_count = 0;
  std::size_t error_dominated_count = 0;
  double max_error_estimate = 0.0;
  std::size_t family_size = 0;
  double tolerance_used = kDefaultTolerance;

  /// Keys, in order: q, k, spec, S1_empirical, S1_predicted, S2_empirical,
  /// S2_predicted, cauchy_bound, nonvanishing_count, indistinguishable_count,
  /// error_dominated_count, max_error_estimate, family_size, tolerance_used.
  /// Complex values are {"re", "im"}. A non-empty manifest (a JSON object
  /// text) is embedded under "manifest".
  std::string to_json(const std::string& manifest_json = {}) const;
};

MomentReport make_report(const FamilyEvaluation& family, const MollifierSpec& spec, double tol);
MomentReport moment_report(std::uint64_t q, unsigned k, const MollifierSpec& spec, const AFEConfig& cfg = {},
                           double tol = kDefaultTolerance, const FamilyOptions& options = {});

// ---------------------------------------------------------------------------
// Shifted second moment

enum class ShiftedPath {
  single,   // L(1/2+a, chi) conj(L(1/2+conj b, chi)) from the single formula; any shifts
  product,  // ProductKernel double sums; requires a + b != 0
};

/// J(a, b) = sum L(1/2+a, chi) L(1/2+b, conj chi) |M(chi)|^2.
cplx shifted_second_moment(const lfunction::ShiftPair& pair, std::uint64_t q, const MollifierSpec& spec,
                           const AFEConfig& cfg = {}, ShiftedPath path = ShiftedPath::single,
                           unsigned jobs = 0);

/// zeta_q(1+a+b) / (c^{a+b} m^b n^a)
///   + (q/pi)^{-a-b} g-(0) zeta_q(1-a-b) c^{a+b} m^a n^b.
/// Throws PoleError for a + b = 0.
cplx diagonal_Z(std::uint64_t m, std::uint64_t n, std::uint64_t c, const lfunction::ShiftPair& pair,
                std::uint64_t q);

/// The a, b -> 0 limit of diagonal_Z:
///   2 gamma_q + r_q (log(q / (pi c^2 m n)) + psi(1/4)),
/// with zeta_q(1+w) = r_q / w + gamma_q + O(w).
double diagonal_Z_limit(std::uint64_t m, std::uint64_t n, std::uint64_t c, std::uint64_t q);

}  // namespace mollified::moments
