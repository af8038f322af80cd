#pragma once

// The mollifier M(chi) = sum_{n <= y} mu(n) chi(n) n^{-1/2} P(log(y/n) / log y)
// and the polynomial profiles P that feed it.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mollified/characters.hpp"

namespace mollified::mollifier {

/// P(x) = sum_j coefficients[j] x^j together with the length exponent theta;
/// the mollifier length for modulus q is y = q^theta.
struct MollifierSpec {
  std::vector<double> coefficients;
  double theta = 0.49;

  double y(std::uint64_t q) const;

  /// Checks P(0) = 0 exactly, |P(1) - 1| <= 1e-12 and 0 < theta < theta_bound
  /// (1/2 for second-moment use, 1 for first-moment use). Throws
  /// std::invalid_argument.
  void validate(double theta_bound = 0.5) const;

  /// {"coefficients": [...], "theta": t}
  std::string to_json() const;
  /// Parses the same object; missing theta keeps `default_theta`. Throws
  /// std::invalid_argument on malformed input.
  static MollifierSpec from_json(std::string_view text, double default_theta = 0.49);

  friend bool operator==(const MollifierSpec&, const MollifierSpec&) = default;
};

/// Horner evaluation on [0, 1]; throws std::domain_error outside.
double eval_P(const MollifierSpec& spec, double x);
double eval_P_prime(const MollifierSpec& spec, double x);

/// Exact integrals from the coefficients: int_0^1 P(x)^2 dx and
/// int_0^1 P'(x)^2 dx.
double integral_P_squared(const MollifierSpec& spec);
double integral_P_prime_squared(const MollifierSpec& spec);

/// Taylor polynomial of sinh(L t) / sinh(L) through odd degree D, with
/// L = theta k sqrt((2k+1)/(2k-1)), rescaled so that P(1) == 1 exactly in
/// floating point. Requires k >= 1, 0 < theta < 1/2 and odd D >= 3.
MollifierSpec optimal_P_truncated(unsigned k, double theta, unsigned degree = 9);

/// The linear profile P(x) = x.
MollifierSpec linear_P(double theta);

/// Coefficients mu(n) n^{-1/2} P(log(y/n) / log y) for squarefree n <= y,
/// computed once per (spec, y) and reused for every character.
class Mollifier {
 public:
  Mollifier(const MollifierSpec& spec, double y);

  double length() const { return y_; }
  /// Largest n with a (possibly zero) coefficient; chi values up to here are
  /// needed.
  std::uint64_t support() const { return terms_.empty() ? 1 : terms_.back().n; }

  std::complex<double> operator()(const characters::DirichletCharacter& chi) const;
  /// chi_values[n - 1] = chi(n), for n up to support().
  std::complex<double> operator()(std::span<const std::complex<double>> chi_values) const;

  struct Term {
    std::uint64_t n;
    double coefficient;
  };
  const std::vector<Term>& terms() const { return terms_; }

 private:
  double y_;
  std::vector<Term> terms_;
};

/// M(chi) with y = q^theta for chi's modulus q.
std::complex<double> mollifier_value(const characters::DirichletCharacter& chi, const MollifierSpec& spec);
/// M(chi) with an explicit length; y < 2 gives P(1).
std::complex<double> mollifier_value(const characters::DirichletCharacter& chi, const MollifierSpec& spec,
                                     double y);

}  // namespace mollified::mollifier
