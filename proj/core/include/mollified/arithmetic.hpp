#pragma once

// Exact multiplicative number theory and the (restricted) Riemann zeta
// function. Everything here is a pure function of its arguments.

#include <complex>
#include <cstdint>
#include <vector>

#include "mollified/rational.hpp"

namespace mollified::arithmetic {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod p^e with primes strictly increasing. factorize(1) has no factors.
struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  std::uint64_t product() const;
};

/// Deterministic trial division. Rejects n = 0.
Factorization factorize(std::uint64_t n);

int moebius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

/// Number of primitive characters mod q: sum_{k | q} phi(k) mu(q/k).
std::uint64_t phi_star(std::uint64_t q);

/// phi*(q) / 2, exact.
Rational phi_plus(std::uint64_t q);

std::uint64_t divisor_count(std::uint64_t n);

/// All positive divisors of n in increasing order.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Squarefree kernel: product of the distinct primes dividing n.
std::uint64_t radical(std::uint64_t n);

/// mu(0..limit) by a linear sieve; entry 0 is unused (set to 0).
std::vector<int> moebius_table(std::uint64_t limit);

/// Primes p <= limit.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// ---------------------------------------------------------------------------
// Riemann zeta

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Euler-Maclaurin with N = max(20, ceil|Im s| + 20) terms and Bernoulli
/// corrections through B_12. Supported region: Re s > 0, s != 1; targets 12
/// significant digits on 0.5 <= Re s <= 3, |Im s| <= 50.
///
/// Throws PoleError at s = 1, std::domain_error for Re s <= 0, and
/// AccuracyError when the first omitted correction term is too large.
std::complex<double> zeta(std::complex<double> s);

/// Same scheme with caller-chosen term count and Bernoulli depth (1..10
/// correction terms, i.e. up to B_20); exposed so the truncation can be
/// studied. No accuracy check.
std::complex<double> zeta_euler_maclaurin(std::complex<double> s, unsigned terms,
                                          unsigned corrections);

/// f(1 + w) = residue / w + constant + O(w).
struct LaurentAtOne {
  double residue;
  double constant;
};

/// zeta(1+w) = 1/w + gamma + O(w).
LaurentAtOne zeta_laurent_at_one();

/// zeta(s) * prod_{p | q} (1 - p^{-s}).
std::complex<double> zeta_q(std::complex<double> s, std::uint64_t q);

/// Laurent data of zeta_q at 1: residue r_q = prod (1 - 1/p) and constant
/// r_q (gamma + sum_{p | q} log p / (p - 1)).
LaurentAtOne zeta_q_laurent_at_one(std::uint64_t q);

}  // namespace mollified::arithmetic
