#include "mollified/arithmetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mollified/errors.hpp"

namespace mollified::arithmetic {

std::uint64_t Factorization::product() const {
  std::uint64_t out = 1;
  for (const auto& [p, e] : factors)
    for (unsigned i = 0; i < e; ++i) out *= p;
  return out;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  f.n = n;
  auto strip = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.factors.push_back({p, e});
  };
  strip(2);
  for (std::uint64_t p = 3; p <= n / p; p += 2) strip(p);
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

int moebius(std::uint64_t n) {
  const auto f = factorize(n);
  for (const auto& pe : f.factors)
    if (pe.exponent > 1) return 0;
  return (f.factors.size() % 2) ? -1 : 1;
}

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t out = n;
  for (const auto& pe : factorize(n).factors) out = out / pe.prime * (pe.prime - 1);
  return out;
}

std::uint64_t phi_star(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("phi_star: q must be positive");
  std::int64_t total = 0;
  for (const auto d : divisors(q))
    total += static_cast<std::int64_t>(euler_phi(d)) * moebius(q / d);
  return static_cast<std::uint64_t>(total);
}

Rational phi_plus(std::uint64_t q) {
  return Rational(static_cast<std::int64_t>(phi_star(q)), 2);
}

std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t out = 1;
  for (const auto& pe : factorize(n).factors) out *= pe.exponent + 1;
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : factorize(n).factors) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t radical(std::uint64_t n) {
  std::uint64_t out = 1;
  for (const auto& pe : factorize(n).factors) out *= pe.prime;
  return out;
}

std::vector<int> moebius_table(std::uint64_t limit) {
  std::vector<int> mu(limit + 1, 1);
  std::vector<std::uint64_t> primes;
  std::vector<char> composite(limit + 1, 0);
  mu[0] = 0;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (const auto p : primes) {
      if (i * p > limit) break;
      composite[i * p] = 1;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<char> sieve(limit + 1, 1);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = 0;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// B_{2j} / (2j)! for j = 1..11.
constexpr std::array<double, 11> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
};

using cplx = std::complex<double>;

// Returns the value and the magnitude of the first omitted correction.
std::pair<cplx, double> euler_maclaurin(cplx s, unsigned terms, unsigned corrections) {
  cplx sum = 0.0;
  for (unsigned n = 1; n < terms; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double N = terms;
  const double logN = std::log(N);
  const cplx N_minus_s = std::exp(-s * logN);
  sum += N * N_minus_s / (s - 1.0);
  sum += 0.5 * N_minus_s;

  // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
  cplx rising = s;             // s (s+1) ... (s+2j-2)
  cplx power = N_minus_s / N;  // N^{-s-2j+1}
  double omitted = 0.0;
  for (unsigned j = 1; j <= corrections + 1 && j <= kBernoulliOverFactorial.size(); ++j) {
    const cplx term = kBernoulliOverFactorial[j - 1] * rising * power;
    if (j <= corrections)
      sum += term;
    else
      omitted = std::abs(term);
    rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
    power /= N * N;
  }
  return {sum, omitted};
}

}  // namespace

std::complex<double> zeta_euler_maclaurin(std::complex<double> s, unsigned terms,
                                          unsigned corrections) {
  if (terms < 2 || corrections < 1 || corrections > 10)
    throw std::invalid_argument("zeta_euler_maclaurin: need terms >= 2 and 1..10 corrections");
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
  return euler_maclaurin(s, terms, corrections).first;
}

std::complex<double> zeta(std::complex<double> s) {
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
  if (!(s.real() > 0.0))
    throw std::domain_error("zeta: only Re s > 0 is supported");
  const auto terms = static_cast<unsigned>(std::max(20.0, std::ceil(std::abs(s.imag())) + 20.0));
  const auto [value, omitted] = euler_maclaurin(s, terms, 6);
  if (omitted > 1e-12 * std::max(1.0, std::abs(value)))
    throw AccuracyError("zeta: Euler-Maclaurin tail " + std::to_string(omitted) +
                        " exceeds target at s = (" + std::to_string(s.real()) + ", " +
                        std::to_string(s.imag()) + ")");
  return value;
}

LaurentAtOne zeta_laurent_at_one() { return {1.0, kEulerGamma}; }

std::complex<double> zeta_q(std::complex<double> s, std::uint64_t q) {
  cplx out = zeta(s);
  for (const auto& pe : factorize(q).factors)
    out *= 1.0 - std::exp(-s * std::log(static_cast<double>(pe.prime)));
  return out;
}

LaurentAtOne zeta_q_laurent_at_one(std::uint64_t q) {
  // prod (1 - p^{-1-w}) = r_q (1 + w sum log p / (p - 1) + O(w^2)).
  double r = 1.0;
  double log_sum = 0.0;
  for (const auto& pe : factorize(q).factors) {
    const double p = static_cast<double>(pe.prime);
    r *= 1.0 - 1.0 / p;
    log_sum += std::log(p) / (p - 1.0);
  }
  return {r, r * (kEulerGamma + log_sum)};
}

}  // namespace mollified::arithmetic
