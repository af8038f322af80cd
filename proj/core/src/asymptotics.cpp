#include "mollified/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mollified/arithmetic.hpp"
#include "mollified/errors.hpp"

namespace mollified::asymptotics {

namespace {

// mu(0..limit), grown on demand and shared between calls.
std::shared_ptr<const std::vector<int>> moebius_upto(std::uint64_t limit) {
  static std::mutex mutex;
  static std::shared_ptr<const std::vector<int>> table;
  const std::lock_guard lock(mutex);
  if (!table || table->size() <= limit) {
    const std::uint64_t grown = std::max<std::uint64_t>(limit, table ? 2 * (table->size() - 1) : 1024);
    table = std::make_shared<const std::vector<int>>(arithmetic::moebius_table(grown));
  }
  return table;
}

std::uint64_t floor_ratio(double y, std::uint64_t d) {
  return static_cast<std::uint64_t>(std::floor(y / static_cast<double>(d) * (1.0 + 1e-14)));
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n <= 1) return out;
  for (const auto& f : arithmetic::factorize(n).factors) out.push_back(f.prime);
  return out;
}

void check_d(std::uint64_t d, double y, std::uint64_t q) {
  if (d < 1) throw std::invalid_argument("S_j: d must be positive");
  if (!(y >= static_cast<double>(d))) throw std::invalid_argument("S_j: requires d <= y");
  if (std::gcd(d, std::max<std::uint64_t>(q, 1)) != 1) throw std::invalid_argument("S_j: requires gcd(d, q) = 1");
}

double unit_clamp(double t) { return std::clamp(t, 0.0, 1.0); }

}  // namespace

double S_j_exact(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec) {
  check_d(d, y, q);
  const std::uint64_t limit = floor_ratio(y, d);
  const auto mu = moebius_upto(limit);
  const std::uint64_t dq = d * std::max<std::uint64_t>(q, 1);
  const double log_y = std::log(y);
  const double yd = y / static_cast<double>(d);
  double sum = 0.0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    const int m = (*mu)[n];
    if (m == 0 || std::gcd(n, dq) != 1) continue;
    const double nd = static_cast<double>(n);
    const double lp = j == 0 ? 1.0 : std::pow(std::log(nd), static_cast<double>(j));
    sum += m / nd * lp * mollifier::eval_P(spec, unit_clamp(std::log(yd / nd) / log_y));
  }
  return sum;
}

double M_j_main(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec) {
  check_d(d, y, q);
  if (j >= 2) return 0.0;
  const std::uint64_t dq = d * std::max<std::uint64_t>(q, 1);
  const double ratio = static_cast<double>(dq) / static_cast<double>(arithmetic::euler_phi(dq));
  const double log_y = std::log(y);
  const double t = unit_clamp(std::log(y / static_cast<double>(d)) / log_y);
  if (j == 0) return ratio / log_y * mollifier::eval_P_prime(spec, t);
  return -ratio * mollifier::eval_P(spec, t);
}

double E_j_envelope(std::uint64_t d, unsigned j, double y, std::uint64_t q) {
  if (!(y >= 16.0)) throw std::invalid_argument("E_j_envelope: requires y >= 16");
  if (d < 1) throw std::invalid_argument("E_j_envelope: d must be positive");
  const double log_y = std::log(y);
  const double loglog = std::log(log_y);
  const double t = 1.0 / loglog;  // both the length exponent and delta
  double e = std::pow(log_y, static_cast<double>(j) - 2.0) * std::pow(loglog, 4.0) *
             (1.0 + std::pow(static_cast<double>(d), t) * log_y / std::pow(y, t));
  for (const std::uint64_t p : prime_divisors(d * std::max<std::uint64_t>(q, 1))) {
    const double f = 1.0 + std::pow(static_cast<double>(p), 2.0 * t - 1.0);
    e *= f * f;
  }
  return e;
}

PrimeFunction PrimeFunction::one() {
  return {"one", [](std::uint64_t) { return 1.0; }, 0.0, 1.0};
}

PrimeFunction PrimeFunction::power(double a, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("PrimeFunction::power: exponent must be positive");
  if (!(a > -1.0)) throw std::invalid_argument("PrimeFunction::power: amplitude must exceed -1");
  std::ostringstream name;
  name << "1+" << a << "p^-" << c;
  return {name.str(),
          [a, c](std::uint64_t p) { return 1.0 + a * std::pow(static_cast<double>(p), -c); }, a, c};
}

EulerProduct lemma_constant(const PrimeFunction& f, std::uint64_t q, std::uint64_t cutoff) {
  if (cutoff < 2) throw std::invalid_argument("lemma_constant: cutoff must be at least 2");
  EulerProduct out;
  out.cutoff = cutoff;
  double log_product = 0.0;
  for (const std::uint64_t p : arithmetic::primes_up_to(cutoff)) {
    const double pd = static_cast<double>(p);
    log_product += std::log1p(-1.0 / pd) + std::log1p(f.at_prime(p) / pd);
  }
  for (const std::uint64_t p : prime_divisors(q)) log_product -= std::log1p(f.at_prime(p) / static_cast<double>(p));
  out.truncated = std::exp(log_product);

  const double P = static_cast<double>(cutoff);
  const double lnP = std::log(P);
  double log_tail = -1.0 / (P * lnP);
  if (f.amplitude != 0.0) log_tail += f.amplitude * std::pow(P, -f.exponent) / (f.exponent * lnP);
  if (std::abs(log_tail) > 1e-3)
    throw AccuracyError("lemma_constant: Euler product tail too large for cutoff " + std::to_string(cutoff));
  out.tail_correction = std::exp(log_tail);
  out.value = out.truncated * out.tail_correction;
  return out;
}

double J_j_exact(unsigned j, double y, std::uint64_t q, const PrimeFunction& f, SummationOrder order) {
  if (!(y >= 1.0)) throw std::invalid_argument("J_j_exact: requires y >= 1");
  const std::uint64_t limit = floor_ratio(y, 1);
  const auto mu = moebius_upto(limit);
  // f(d) for squarefree d via a prime sieve; zero on d sharing a factor with q.
  std::vector<double> fd(limit + 1, 1.0);
  for (const std::uint64_t p : arithmetic::primes_up_to(limit)) {
    const double fp = f.at_prime(p);
    for (std::uint64_t m = p; m <= limit; m += p) fd[m] *= fp;
  }
  for (const std::uint64_t p : prime_divisors(q))
    for (std::uint64_t m = p; m <= limit; m += p) fd[m] = 0.0;

  auto term = [&](std::uint64_t d) {
    if ((*mu)[d] == 0 || fd[d] == 0.0) return 0.0;
    const double dd = static_cast<double>(d);
    const double lp = j == 0 ? 1.0 : std::pow(std::log(y / dd), static_cast<double>(j));
    return fd[d] / dd * lp;
  };
  double sum = 0.0;
  if (order == SummationOrder::ascending) {
    for (std::uint64_t d = 1; d <= limit; ++d) sum += term(d);
  } else {
    for (std::uint64_t d = limit; d >= 1; --d) sum += term(d);
  }
  return sum;
}

double J_j_main(unsigned j, double y, std::uint64_t q, const PrimeFunction& f) {
  const double jd = j;
  return lemma_constant(f, q).value / (jd + 1.0) * std::pow(std::log(y), jd + 1.0);
}

LemmaCheckRecord S_j_check(std::uint64_t d, unsigned j, double y, std::uint64_t q, const MollifierSpec& spec) {
  LemmaCheckRecord r;
  r.lemma = "S_j";
  r.d = d;
  r.j = j;
  r.y = y;
  r.q = q;
  r.exact = S_j_exact(d, j, y, q, spec);
  r.main = M_j_main(d, j, y, q, spec);
  r.relative_gap = std::abs(r.exact - r.main) / std::max(std::abs(r.main), 1e-300);
  r.envelope = E_j_envelope(d, j, y, q);
  return r;
}

LemmaCheckRecord J_j_check(unsigned j, double y, std::uint64_t q, const PrimeFunction& f) {
  LemmaCheckRecord r;
  r.lemma = "J_j";
  r.f = f.name;
  r.j = j;
  r.y = y;
  r.q = q;
  r.exact = J_j_exact(j, y, q, f);
  r.main = J_j_main(j, y, q, f);
  r.relative_gap = std::abs(r.exact - r.main) / std::max(std::abs(r.main), 1e-300);
  return r;
}

RateFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_fit: need two or more points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("loglog_fit: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("loglog_fit: degenerate abscissae");
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

EnvelopeFit envelope_fit(const MollifierSpec& spec, GridSize grid) {
  const std::uint64_t d_max = grid == GridSize::full ? 50 : 20;
  EnvelopeFit out;
  auto ratio = [](const LemmaCheckRecord& r) { return std::abs(r.exact - r.main) / r.envelope; };
  for (const double y : {1e3, 1e4, 1e5}) {
    const bool holdout = y > 1e4 + 1.0;
    for (const std::uint64_t q : {1ULL, 7ULL}) {
      for (std::uint64_t d = 1; d <= d_max; ++d) {
        if (std::gcd(d, q) != 1) continue;
        for (unsigned j = 0; j <= 2; ++j) {
          const LemmaCheckRecord r = S_j_check(d, j, y, q, spec);
          if (holdout) {
            out.holdout_max = std::max(out.holdout_max, ratio(r));
            out.holdout_records.push_back(r);
          } else {
            out.constant = std::max(out.constant, ratio(r));
            out.fit_records.push_back(r);
          }
        }
      }
    }
  }
  out.holds = out.holdout_max <= out.constant;
  return out;
}

GapScaling gap_scaling(unsigned j, std::uint64_t q, const PrimeFunction& f, GridSize grid) {
  std::vector<double> ys = {1e2, 1e3};
  if (grid == GridSize::full) ys.push_back(3e3);
  GapScaling out;
  std::vector<double> log_y, gaps;
  for (const double y : ys) {
    const LemmaCheckRecord a = J_j_check(j, y, q, f);
    const LemmaCheckRecord b = J_j_check(j, y * y, q, f);
    out.ratios.push_back(b.relative_gap / a.relative_gap);
    for (const auto& r : {a, b}) {
      log_y.push_back(std::log(r.y));
      gaps.push_back(r.relative_gap);
      out.records.push_back(r);
    }
  }
  out.fit = loglog_fit(log_y, gaps);
  return out;
}

DiagonalRate diagonal_rate(const lfunction::ShiftPair& pair, lfunction::Sign sign, std::uint64_t q,
                           const std::vector<double>& xs, const lfunction::AFEConfig& cfg) {
  DiagonalRate out;
  out.x = xs;
  for (const double x : xs) {
    const auto s = lfunction::diagonal_S(pair, sign, x, q, cfg);
    out.error.push_back(std::abs(s.value - s.main_term));
  }
  out.fit = loglog_fit(out.x, out.error);
  return out;
}

}  // namespace mollified::asymptotics
