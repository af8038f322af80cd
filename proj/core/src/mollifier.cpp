#include "mollified/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "mollified/arithmetic.hpp"
#include "mollified/optimizer.hpp"

namespace mollified::mollifier {

double MollifierSpec::y(std::uint64_t q) const { return std::pow(static_cast<double>(q), theta); }

void MollifierSpec::validate(double theta_bound) const {
  if (coefficients.empty()) throw std::invalid_argument("mollifier spec: no coefficients");
  for (const double c : coefficients)
    if (!std::isfinite(c)) throw std::invalid_argument("mollifier spec: non-finite coefficient");
  if (coefficients[0] != 0.0) throw std::invalid_argument("mollifier spec: P(0) must be 0");
  const double p1 = eval_P(*this, 1.0);
  if (std::abs(p1 - 1.0) > 1e-12) throw std::invalid_argument("mollifier spec: P(1) must be 1");
  if (!(theta > 0.0 && theta < theta_bound))
    throw std::invalid_argument("mollifier spec: theta outside (0, " + std::to_string(theta_bound) + ")");
}

std::string MollifierSpec::to_json() const {
  nlohmann::ordered_json j;
  j["coefficients"] = coefficients;
  j["theta"] = theta;
  return j.dump();
}

MollifierSpec MollifierSpec::from_json(std::string_view text, double default_theta) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("mollifier spec: ") + e.what());
  }
  MollifierSpec spec;
  spec.theta = default_theta;
  // A bare array is accepted as the coefficient list.
  const nlohmann::json* coeffs = &j;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      if (key != "coefficients" && key != "theta")
        throw std::invalid_argument("mollifier spec: unknown key '" + key + "'");
    if (!j.contains("coefficients")) throw std::invalid_argument("mollifier spec: missing coefficients");
    coeffs = &j["coefficients"];
    if (j.contains("theta")) {
      if (!j["theta"].is_number()) throw std::invalid_argument("mollifier spec: theta must be a number");
      spec.theta = j["theta"].get<double>();
    }
  }
  if (!coeffs->is_array()) throw std::invalid_argument("mollifier spec: coefficients must be an array");
  for (const auto& c : *coeffs) {
    if (!c.is_number()) throw std::invalid_argument("mollifier spec: coefficients must be numbers");
    spec.coefficients.push_back(c.get<double>());
  }
  return spec;
}

namespace {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("P is evaluated on [0, 1] only");
}

}  // namespace

double eval_P(const MollifierSpec& spec, double x) {
  check_unit_interval(x);
  double v = 0.0;
  for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it) v = v * x + *it;
  return v;
}

double eval_P_prime(const MollifierSpec& spec, double x) {
  check_unit_interval(x);
  double v = 0.0;
  for (std::size_t j = spec.coefficients.size(); j-- > 1;) v = v * x + static_cast<double>(j) * spec.coefficients[j];
  return v;
}

double integral_P_squared(const MollifierSpec& spec) {
  const auto& c = spec.coefficients;
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) s += c[i] * c[j] / static_cast<double>(i + j + 1);
  return s;
}

double integral_P_prime_squared(const MollifierSpec& spec) {
  const auto& c = spec.coefficients;
  double s = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i)
    for (std::size_t j = 1; j < c.size(); ++j)
      s += static_cast<double>(i * j) * c[i] * c[j] / static_cast<double>(i + j - 1);
  return s;
}

MollifierSpec optimal_P_truncated(unsigned k, double theta, unsigned degree) {
  if (k < 1) throw std::invalid_argument("optimal_P_truncated: k must be positive");
  if (!(theta > 0.0 && theta < 0.5)) throw std::invalid_argument("optimal_P_truncated: theta must lie in (0, 1/2)");
  if (degree < 3 || degree % 2 == 0) throw std::invalid_argument("optimal_P_truncated: degree must be odd and >= 3");
  const double lambda = optimizer::lambda_opt(k, theta);

  MollifierSpec spec;
  spec.theta = theta;
  spec.coefficients.assign(degree + 1, 0.0);
  double term = lambda;  // lambda^j / j!
  double total = 0.0;
  for (unsigned j = 1; j <= degree; j += 2) {
    spec.coefficients[j] = term;
    total += term;
    term *= lambda * lambda / (static_cast<double>(j + 1) * static_cast<double>(j + 2));
  }
  for (double& c : spec.coefficients) c /= total;

  // Absorb the last few ulps of rounding into the linear coefficient.
  for (int pass = 0; pass < 64; ++pass) {
    const double p1 = eval_P(spec, 1.0);
    if (p1 == 1.0) break;
    double& c1 = spec.coefficients[1];
    const double nudged = c1 + (1.0 - p1);
    c1 = nudged != c1 ? nudged : std::nextafter(c1, p1 < 1.0 ? 2.0 : 0.0);
  }
  return spec;
}

MollifierSpec linear_P(double theta) { return MollifierSpec{{0.0, 1.0}, theta}; }

Mollifier::Mollifier(const MollifierSpec& spec, double y) : y_(y) {
  if (!(y >= 1.0)) throw std::invalid_argument("Mollifier: y must be at least 1");
  if (y < 2.0) {
    terms_.push_back({1, eval_P(spec, 1.0)});
    return;
  }
  const auto limit = static_cast<std::uint64_t>(std::floor(y * (1.0 + 1e-14)));
  const auto mu = arithmetic::moebius_table(limit);
  const double log_y = std::log(y);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (mu[n] == 0) continue;
    const double nd = static_cast<double>(n);
    const double x = std::clamp(std::log(y / nd) / log_y, 0.0, 1.0);
    terms_.push_back({n, static_cast<double>(mu[n]) / std::sqrt(nd) * eval_P(spec, x)});
  }
}

std::complex<double> Mollifier::operator()(const characters::DirichletCharacter& chi) const {
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) sum += t.coefficient * chi(static_cast<std::int64_t>(t.n));
  return sum;
}

std::complex<double> Mollifier::operator()(std::span<const std::complex<double>> chi_values) const {
  if (chi_values.size() < support()) throw std::invalid_argument("Mollifier: too few character values");
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) sum += t.coefficient * chi_values[t.n - 1];
  return sum;
}

std::complex<double> mollifier_value(const characters::DirichletCharacter& chi, const MollifierSpec& spec) {
  return mollifier_value(chi, spec, spec.y(chi.modulus()));
}

std::complex<double> mollifier_value(const characters::DirichletCharacter& chi, const MollifierSpec& spec,
                                     double y) {
  return Mollifier(spec, y)(chi);
}

}  // namespace mollified::mollifier
