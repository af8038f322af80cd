#include "mollified/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mollified/errors.hpp"

namespace mollified::lfunction {

namespace {

using cplx = std::complex<double>;

constexpr double kShiftTarget = 12.0;

// B_{2j} / (2j (2j - 1)), j = 1..8.
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

// B_{2j} / (2j), j = 1..8, for the digamma asymptotic series.
constexpr std::array<double, 8> kDigamma = {
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
};

void check_pole(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleError("gamma: pole at non-positive integer");
}

unsigned shift_count(cplx z) {
  return z.real() >= kShiftTarget ? 0u : static_cast<unsigned>(std::ceil(kShiftTarget - z.real()));
}

cplx expm1(cplx z) {
  if (std::abs(z) > 0.5) return std::exp(z) - 1.0;
  cplx term = z, sum = z;
  for (int k = 2; k < 40; ++k) {
    term *= z / static_cast<double>(k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kEulerGamma = 0.57721566490153286060651209;

// zeta(k) for k = 2..64.
const std::array<double, 65>& zeta_integers() {
  static const std::array<double, 65> table = [] {
    std::array<double, 65> t{};
    for (int k = 2; k <= 64; ++k) {
      // 39 terms plus an Euler-Maclaurin tail.
      const int n_terms = 40;
      double s = 0.0;
      for (int n = n_terms - 1; n >= 1; --n) s += std::pow(static_cast<double>(n), -k);
      const double N = n_terms;
      s += std::pow(N, 1.0 - k) / (k - 1.0) + 0.5 * std::pow(N, -k) +
           k / 12.0 * std::pow(N, -k - 1.0) -
           k * (k + 1.0) * (k + 2.0) / 720.0 * std::pow(N, -k - 3.0);
      t[k] = s;
    }
    return t;
  }();
  return table;
}

// log Gamma(1 + a) = -gamma a + sum_{k>=2} (-1)^k zeta(k) a^k / k, |a| < 0.5.
cplx log_gamma_one_plus(cplx a) {
  const auto& z = zeta_integers();
  cplx sum = -kEulerGamma * a;
  cplx power = -a;  // (-a)^k after the update
  for (int k = 2; k <= 64; ++k) {
    power *= -a;
    const cplx t = z[k] * power / static_cast<double>(k);
    sum += t;
    if (std::abs(t) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  check_pole(z);
  const unsigned shift = shift_count(z);
  cplx correction = 0.0;
  for (unsigned k = 0; k < shift; ++k) correction += std::log(z + static_cast<double>(k));
  const cplx w = z + static_cast<double>(shift);
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (const double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (w - 0.5) * std::log(w) - w + half_log_two_pi + series - correction;
}

std::complex<double> gamma(std::complex<double> z) { return std::exp(log_gamma(z)); }

std::complex<double> digamma(std::complex<double> z) {
  check_pole(z);
  const unsigned shift = shift_count(z);
  cplx correction = 0.0;
  for (unsigned k = 0; k < shift; ++k) correction += 1.0 / (z + static_cast<double>(k));
  const cplx w = z + static_cast<double>(shift);
  const cplx inv2 = 1.0 / (w * w);
  cplx series = 0.0;
  cplx power = inv2;
  for (const double c : kDigamma) {
    series += c * power;
    power *= inv2;
  }
  return std::log(w) - 0.5 / w - series - correction;
}

std::complex<double> upper_incomplete_gamma(std::complex<double> a, double y) {
  if (!(y > 0.0)) throw std::domain_error("upper_incomplete_gamma: y must be positive");
  const double eps = 1e-17;
  const double log_y = std::log(y);

  if (y < 2.5) {
    // gamma(a, y) = y^a sum_k (-y)^k / (k! (a + k)).
    if (std::abs(a) < 0.5) {
      // Gamma(a, y) = (Gamma(1+a) - 1)/a - (y^a - 1)/a - y^a sum_{k>=1} (-y)^k / (k!(a+k))
      const bool at_zero = a == cplx(0.0, 0.0);
      const cplx head = at_zero ? cplx(-kEulerGamma, 0.0) : expm1(log_gamma_one_plus(a)) / a;
      const cplx mid = at_zero ? cplx(log_y, 0.0) : expm1(a * log_y) / a;
      cplx sum = 0.0;
      double term = 1.0;
      for (int k = 1; k < 200; ++k) {
        term *= -y / static_cast<double>(k);
        const cplx t = term / (a + static_cast<double>(k));
        sum += t;
        if (std::abs(t) < eps * std::abs(sum)) break;
      }
      return head - mid - std::exp(a * log_y) * sum;
    }
    cplx sum = 0.0;
    double term = 1.0;  // (-y)^k / k!
    for (int k = 0; k < 200; ++k) {
      if (k > 0) term *= -y / static_cast<double>(k);
      const cplx t = term / (a + static_cast<double>(k));
      sum += t;
      if (k > 2 && std::abs(t) < eps * std::abs(sum)) break;
    }
    return gamma(a) - std::exp(a * log_y) * sum;
  }

  // Modified Lentz for Gamma(a, y) = e^{-y} y^a / (y + 1 - a - 1(1-a)/(y + 3 - a - ...)).
  const double tiny = 1e-300;
  cplx b = y + 1.0 - a;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 20000; ++i) {
    const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return std::exp(a * log_y - y) * h;
  }
  throw AccuracyError("upper_incomplete_gamma: continued fraction did not converge");
}

}  // namespace mollified::lfunction
