#pragma once

// The closed-form optimum of the quadratic functional
//   F_k(P) = theta^{-1}/(2k+1) int P'^2 + theta k^2/(2k-1) int P^2
// over profiles with P(0) = 0, P(1) = 1, and the non-vanishing proportions
// 1 / (1/2 + F_k) it yields.

#include <cstdint>
#include <string>
#include <vector>

#include "mollified/mollifier.hpp"

namespace mollified::optimizer {

/// theta used for the reference table.
inline constexpr double kTableTheta = 0.5 - 1e-8;

/// theta k sqrt((2k+1)/(2k-1)). Requires k >= 1, theta > 0.
double lambda_opt(unsigned k, double theta);

/// cosh/sinh, switching to 1 + 2 e^{-2x} for x > 20.
double coth(double x);

struct FkForms {
  double from_lambda;  // L coth L / (theta (2k+1))
  double from_k;       // k coth L / sqrt(4k^2 - 1)
};
FkForms F_k_forms(unsigned k, double theta);

/// Minimum of F_k. Evaluates both closed forms and throws std::logic_error if
/// they differ by more than 1e-12 relative.
double F_k_closed(unsigned k, double theta);

/// F_k of a polynomial profile by exact monomial integration (theta taken
/// from the profile).
double F_k_quadrature(const mollifier::MollifierSpec& spec, unsigned k);

/// 1 / (1/2 + F_k_closed).
double proportion_star(unsigned k, double theta);

/// 1 - 1/(16 k^2), the leading large-k behaviour.
double asymptotic_proportion(unsigned k);

/// Floors |v| to `digits` decimals, keeping the sign; tolerant of values that
/// sit a few ulps below a decimal boundary.
double truncate_decimals(double v, int digits);

struct Table1Row {
  unsigned k;
  double reference_P_k;          // printed as (2/3) x mantissa
  double reference_P_k_mantissa;
  double reference_P_star;
  double computed_P_star;
  double computed_truncated;
  bool matches;
};

/// Rows k in {1,2,3,4,5,10,15,20,25}, with the stored reference columns.
std::vector<Table1Row> table1(double theta = kTableTheta);

/// The lower bounds quoted for P_k* (k = 1..5 and 25).
struct QuotedBound {
  unsigned k;
  double bound;
};
const std::vector<QuotedBound>& quoted_bounds();

struct AsymptoticFit {
  std::vector<unsigned> ks;
  std::vector<double> scaled_residual;  // k^4 |F_k - 1/2 - 1/(16k^2)|
  double max_over_min = 0.0;
  double fitted_c = 0.0;  // k^4 (1 - 1/(16k^2) - P_k*) at the largest k
};
AsymptoticFit asymptotic_fit(double theta = 0.5, unsigned k_min = 10, unsigned k_max = 50);

struct PerturbationReport {
  unsigned k = 0;
  double theta = 0.0;
  unsigned trials = 0;
  unsigned evaluations = 0;
  unsigned violations = 0;
  double baseline = 0.0;       // F_k of the truncated optimum
  double worst_change = 0.0;   // min over trials of F(P + e eta) - F(P)
};

/// F_k(P_opt + e eta) >= F_k(P_opt) - 1e-9 for random eta = x(1-x)Q(x),
/// deg Q <= 4, and e in {+-1e-2, +-1e-3}. Deterministic for a fixed seed.
PerturbationReport perturbation_test(unsigned k, double theta, unsigned trials, std::uint64_t seed = 1,
                                     unsigned degree = 9);

struct OptimizerResult {
  unsigned k = 0;
  double theta = 0.0;
  double lambda = 0.0;
  double F_k = 0.0;
  double P_k_star = 0.0;
  double asymptotic_estimate = 0.0;
  double quadrature_F_k = 0.0;
  unsigned degree = 0;

  std::string to_json() const;
};

OptimizerResult optimize(unsigned k, double theta, unsigned degree = 9);

}  // namespace mollified::optimizer
