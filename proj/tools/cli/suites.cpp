#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "mollified/arithmetic.hpp"
#include "mollified/characters.hpp"
#include "mollified/parallel.hpp"

namespace mollified::cli {

namespace {

struct Partial {
  std::size_t cases = 0;
  double worst = 0.0;
  std::string failure;
};

// Merges per-modulus partials in order so the first failure reported does not
// depend on the worker count.
SuiteResult reduce(std::string name, double tolerance, const std::vector<Partial>& parts) {
  SuiteResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  for (const auto& p : parts) {
    r.cases += p.cases;
    r.worst = std::max(r.worst, p.worst);
    if (!p.failure.empty() && r.detail.empty()) r.detail = p.failure;
  }
  r.passed = r.detail.empty();
  return r;
}

}  // namespace

SuiteResult orthogonality_suite(std::uint64_t q_max, std::int64_t mn_max, unsigned jobs) {
  constexpr double kTol = 1e-10;
  std::vector<Partial> parts(q_max);
  parallel_for(q_max, jobs, [&](std::size_t i) {
    const std::uint64_t q = i + 1;
    Partial& p = parts[i];
    const auto family = characters::enumerate_even_primitive(q);
    std::vector<std::vector<std::complex<double>>> values;
    for (const auto& chi : family) values.push_back(chi.values(static_cast<std::size_t>(mn_max)));
    for (std::int64_t m = 1; m <= mn_max; ++m) {
      for (std::int64_t n = 1; n <= mn_max; ++n) {
        if (std::gcd(static_cast<std::uint64_t>(m * n), q) != 1) continue;
        std::complex<double> brute = 0.0;
        for (const auto& v : values) brute += v[m - 1] * std::conj(v[n - 1]);
        const double exact = characters::orthogonality_even_primitive(q, m, n).to_double();
        const double dev = std::abs(brute - exact);
        ++p.cases;
        p.worst = std::max(p.worst, dev);
        if (!(dev <= kTol) && p.failure.empty()) {
          std::ostringstream os;
          os << "q=" << q << " m=" << m << " n=" << n << " brute=" << brute << " formula=" << exact;
          p.failure = os.str();
        }
      }
    }
  });
  return reduce("orthogonality", kTol, parts);
}

SuiteResult primitive_count_suite(std::uint64_t q_max, unsigned jobs) {
  std::vector<Partial> parts(q_max);
  parallel_for(q_max, jobs, [&](std::size_t i) {
    const std::uint64_t q = i + 1;
    Partial& p = parts[i];
    std::uint64_t count = 0;
    for (const auto& chi : characters::enumerate_characters(q))
      if (chi.is_primitive()) ++count;
    const std::uint64_t formula = arithmetic::phi_star(q);
    ++p.cases;
    if (count != formula) {
      p.worst = 1.0;
      p.failure = "q=" + std::to_string(q) + " count=" + std::to_string(count) + " phi*=" + std::to_string(formula);
    }
  });
  return reduce("primitive_count", 0.0, parts);
}

SuiteResult gauss_sum_suite(std::uint64_t q_max, unsigned jobs) {
  constexpr double kTol = 1e-12;
  std::vector<Partial> parts(q_max);
  parallel_for(q_max, jobs, [&](std::size_t i) {
    const std::uint64_t q = i + 1;
    Partial& p = parts[i];
    const double root = std::sqrt(static_cast<double>(q));
    for (const auto& chi : characters::enumerate_characters(q)) {
      if (!chi.is_primitive()) continue;
      const double dev = std::abs(std::abs(characters::gauss_sum(chi)) / root - 1.0);
      ++p.cases;
      p.worst = std::max(p.worst, dev);
      if (!(dev <= kTol) && p.failure.empty())
        p.failure = "q=" + std::to_string(q) + " chi=" + std::to_string(chi.id()) + " deviation=" + std::to_string(dev);
    }
  });
  return reduce("gauss_sum", kTol, parts);
}

SuiteResult functional_equation_suite(const std::vector<std::uint64_t>& moduli, unsigned samples,
                                      const lfunction::AFEConfig& cfg, unsigned jobs) {
  constexpr double kTol = 1e-9;
  std::vector<Partial> parts(moduli.size());
  parallel_for(moduli.size(), jobs, [&](std::size_t i) {
    const std::uint64_t q = moduli[i];
    Partial& p = parts[i];
    std::mt19937_64 rng(0x5eed + q);
    std::uniform_real_distribution<double> re(0.3, 0.7);
    std::uniform_real_distribution<double> im(-10.0, 10.0);
    for (const auto& chi : characters::enumerate_even_primitive(q)) {
      const auto conj = chi.conjugate();
      const auto eps = characters::root_number(chi);
      for (unsigned t = 0; t < samples; ++t) {
        const std::complex<double> s(re(rng), im(rng));
        const auto left = lfunction::completed_lambda(chi, s, cfg);
        const auto right = eps * lfunction::completed_lambda(conj, 1.0 - s, cfg);
        const double dev = std::abs(left - right) / std::max(std::abs(left), 1.0);
        ++p.cases;
        p.worst = std::max(p.worst, dev);
        if (!(dev <= kTol) && p.failure.empty()) {
          std::ostringstream os;
          os << "q=" << q << " chi=" << chi.id() << " s=" << s << " relative residual=" << dev;
          p.failure = os.str();
        }
      }
    }
  });
  return reduce("functional_equation", kTol, parts);
}

}  // namespace mollified::cli

namespace mollified::cli {

bool LemmaSuite::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteResult& c) { return c.passed; });
}

LemmaSuite lemma_suite(asymptotics::GridSize grid) {
  using namespace asymptotics;
  LemmaSuite suite;

  const lfunction::ShiftPair pair{{0.01, 0.0}, {0.01, 0.0}};
  for (const auto sign : {lfunction::Sign::plus, lfunction::Sign::minus}) {
    const DiagonalRate rate = diagonal_rate(pair, sign, 7, {1e2, 1e3, 1e4});
    SuiteResult c;
    c.name = sign == lfunction::Sign::plus ? "diagonal_plus_slope" : "diagonal_minus_slope";
    c.cases = rate.x.size();
    c.worst = rate.fit.slope;
    c.tolerance = -0.4;
    c.passed = rate.fit.slope <= -0.4;
    if (!c.passed) c.detail = "slope " + std::to_string(rate.fit.slope) + " > -0.4";
    suite.checks.push_back(c);
  }

  const EnvelopeFit env = envelope_fit(mollifier::optimal_P_truncated(1, 0.49, 9), grid);
  {
    SuiteResult c;
    c.name = "envelope_constant";
    c.cases = env.fit_records.size() + env.holdout_records.size();
    c.worst = env.holdout_max;
    c.tolerance = env.constant;
    c.passed = env.holds;
    if (!c.passed)
      c.detail = "hold-out ratio " + std::to_string(env.holdout_max) + " exceeds fitted " + std::to_string(env.constant);
    suite.checks.push_back(c);
  }
  suite.records.insert(suite.records.end(), env.fit_records.begin(), env.fit_records.end());
  suite.records.insert(suite.records.end(), env.holdout_records.begin(), env.holdout_records.end());

  struct GapCase {
    unsigned j;
    std::uint64_t q;
    PrimeFunction f;
  };
  const std::vector<GapCase> cases = {
      {0, 1, PrimeFunction::one()}, {1, 1, PrimeFunction::one()}, {0, 7, PrimeFunction::power(0.5, 0.5)}};
  const double lo = std::pow(2.0, -1.15);
  const double hi = std::pow(2.0, -0.85);
  for (const auto& gc : cases) {
    const GapScaling g = gap_scaling(gc.j, gc.q, gc.f, grid);
    SuiteResult c;
    c.name = "gap_halving_j" + std::to_string(gc.j) + "_q" + std::to_string(gc.q) + "_" + gc.f.name;
    c.cases = g.ratios.size();
    c.worst = g.fit.slope;
    c.tolerance = 0.15;
    c.passed = std::abs(g.fit.slope + 1.0) <= 0.15;
    for (const double r : g.ratios) c.passed = c.passed && r >= lo && r <= hi;
    if (!c.passed) c.detail = "slope " + std::to_string(g.fit.slope);
    suite.checks.push_back(c);
    suite.records.insert(suite.records.end(), g.records.begin(), g.records.end());
  }
  return suite;
}

}  // namespace mollified::cli
