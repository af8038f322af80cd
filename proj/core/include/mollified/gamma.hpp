#pragma once

#include <complex>

namespace mollified::lfunction {

/// Principal branch of log Gamma (branch cut on the negative real axis,
/// real on the positive axis). Upward recurrence to Re z >= 12, then the
/// Stirling series through B_16. Throws PoleError at non-positive integers.
std::complex<double> log_gamma(std::complex<double> z);

std::complex<double> gamma(std::complex<double> z);

/// Gamma'/Gamma, same scheme as log_gamma.
std::complex<double> digamma(std::complex<double> z);

/// Upper incomplete gamma Gamma(a, y) for complex a and real y > 0. Entire in
/// a. Power series for y < 2.5 (with a cancellation-free form for small |a|),
/// Legendre continued fraction otherwise. Throws AccuracyError if the
/// continued fraction fails to converge.
std::complex<double> upper_incomplete_gamma(std::complex<double> a, double y);

}  // namespace mollified::lfunction
