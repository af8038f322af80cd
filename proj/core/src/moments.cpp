#include "mollified/moments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "mollified/arithmetic.hpp"
#include "mollified/cache.hpp"
#include "mollified/characters.hpp"
#include "mollified/diagnostics.hpp"
#include "mollified/errors.hpp"
#include "mollified/parallel.hpp"

namespace mollified::moments {

namespace {

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

double phi_plus_d(std::uint64_t q) { return arithmetic::phi_plus(q).to_double(); }

// Shared by evaluate_family and the mollifier-free count.
FamilyEvaluation evaluate(std::uint64_t q, unsigned k, const MollifierSpec* spec, const AFEConfig& cfg,
                          const FamilyOptions& options) {
  if (q < 3) throw std::invalid_argument("evaluate_family: q must be at least 3");
  cfg.validate();
  if (spec) spec->validate(1.0);
  const unsigned M = options.nodes ? options.nodes : family_nodes(k);
  if (M < 8 * k + 16) throw std::invalid_argument("evaluate_family: need at least 8k + 16 nodes");
  const unsigned jobs = resolve_jobs(options.jobs);

  const auto group = characters::build_group(q);
  const auto family = characters::enumerate_even_primitive(group);
  const std::size_t size = family.size();

  FamilyEvaluation out;
  out.q = q;
  out.k = k;
  out.radius = options.radius;
  out.nodes = M;

  std::vector<cplx> node_values;
  const std::uint64_t key = cache::family_key(cfg, options.radius, M);
  if (options.cache) {
    if (auto stored = options.cache->get(q, key)) {
      if (stored->size() == size * M) {
        node_values = std::move(*stored);
        out.cache_hit = true;
      } else {
        diagnostics::warn("cache: entry for q = " + std::to_string(q) + " has the wrong length; recomputing");
      }
    }
  }
  if (!out.cache_hit) {
    const lfunction::CircleKernel kernel(q, cfg, options.radius, M, jobs);
    node_values.resize(size * M);
    parallel_for(size, jobs, [&](std::size_t i) {
      const lfunction::LFunction L(family[i], cfg);
      const auto v = kernel.node_values(L);
      std::copy(v.begin(), v.end(), node_values.begin() + static_cast<std::ptrdiff_t>(i * M));
    });
    if (options.cache) options.cache->put(q, key, node_values);
  }

  // The kernel guarantees every node's truncation bound is below the target,
  // so the target bounds the truncation part of the error whether or not the
  // values came from the cache.
  const double truncation = factorial(k) / std::pow(options.radius, static_cast<double>(k)) * cfg.target_accuracy;
  std::unique_ptr<mollifier::Mollifier> mol;
  if (spec) mol = std::make_unique<mollifier::Mollifier>(*spec, spec->y(q));

  out.records.resize(size);
  parallel_for(size, jobs, [&](std::size_t i) {
    const std::span<const cplx> v(node_values.data() + i * M, M);
    const auto d = lfunction::circle_derivative(v, k, options.radius);
    CharacterRecord& r = out.records[i];
    r.character_id = family[i].id();
    r.derivative = d.value;
    r.error_estimate = d.error_estimate + truncation;
    r.mollifier = mol ? (*mol)(family[i]) : cplx(1.0, 0.0);
  });
  return out;
}

}  // namespace

MomentPrediction C_k_theta(const MollifierSpec& spec, unsigned k) {
  if (k < 1) throw std::invalid_argument("C_k_theta: k must be positive");
  if (!(spec.theta > 0.0)) throw std::invalid_argument("C_k_theta: theta must be positive");
  const double kd = k;
  MomentPrediction p;
  p.derivative_term = mollifier::integral_P_prime_squared(spec) / (spec.theta * (2.0 * kd + 1.0));
  p.constant_term = 0.5;
  p.value_term = spec.theta * kd * kd / (2.0 * kd - 1.0) * mollifier::integral_P_squared(spec);
  p.C_k_theta = p.derivative_term + p.constant_term + p.value_term;
  return p;
}

unsigned family_nodes(unsigned k) { return lfunction::default_circle_nodes(std::max(k, 2u)); }

FamilyEvaluation evaluate_family(std::uint64_t q, unsigned k, const MollifierSpec& spec, const AFEConfig& cfg,
                                 const FamilyOptions& options) {
  return evaluate(q, k, &spec, cfg, options);
}

cplx S1_predicted(unsigned k, std::uint64_t q, const MollifierSpec& spec) {
  const double sign = k % 2 ? -1.0 : 1.0;
  return sign * phi_plus_d(q) * mollifier::eval_P(spec, 1.0) *
         std::pow(std::log(static_cast<double>(q)), static_cast<double>(k));
}

double S2_predicted(unsigned k, std::uint64_t q, const MollifierSpec& spec) {
  return C_k_theta(spec, k).C_k_theta * phi_plus_d(q) *
         std::pow(std::log(static_cast<double>(q)), 2.0 * static_cast<double>(k));
}

FirstMoment S1(const FamilyEvaluation& family, const MollifierSpec& spec) {
  FirstMoment m;
  for (const auto& r : family.records) m.empirical += r.derivative * r.mollifier;
  m.predicted = S1_predicted(family.k, family.q, spec);
  return m;
}

SecondMoment S2(const FamilyEvaluation& family, const MollifierSpec& spec) {
  SecondMoment m;
  for (const auto& r : family.records) m.empirical += std::norm(r.derivative) * std::norm(r.mollifier);
  m.predicted = S2_predicted(family.k, family.q, spec);
  return m;
}

FirstMoment S1(unsigned k, std::uint64_t q, const MollifierSpec& spec, const AFEConfig& cfg,
               const FamilyOptions& options) {
  if (k < 1) throw std::invalid_argument("S1: k must be positive");
  return S1(evaluate_family(q, k, spec, cfg, options), spec);
}

SecondMoment S2(unsigned k, std::uint64_t q, const MollifierSpec& spec, const AFEConfig& cfg,
                const FamilyOptions& options) {
  if (k < 1) throw std::invalid_argument("S2: k must be positive");
  spec.validate(0.5);
  return S2(evaluate_family(q, k, spec, cfg, options), spec);
}

double cauchy_bound(cplx s1, double s2) {
  if (!(s2 > 0.0)) throw std::domain_error("cauchy_bound: S2 must be positive");
  return std::norm(s1) / s2;
}

double predicted_cauchy_bound(unsigned k, std::uint64_t q, const MollifierSpec& spec) {
  return cauchy_bound(S1_predicted(k, q, spec), S2_predicted(k, q, spec));
}

Vanishing classify(cplx value, double error_estimate, double tol) {
  const double a = std::abs(value);
  if (a - error_estimate > tol) return Vanishing::nonzero;
  if (a + error_estimate <= tol) return Vanishing::indistinguishable;
  return Vanishing::error_dominated;
}

NonvanishingCount nonvanishing_count(const FamilyEvaluation& family, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("nonvanishing_count: tol must be positive");
  NonvanishingCount c;
  c.family_size = family.records.size();
  c.tolerance = tol;
  for (const auto& r : family.records) {
    c.max_error_estimate = std::max(c.max_error_estimate, r.error_estimate);
    switch (classify(r.derivative, r.error_estimate, tol)) {
      case Vanishing::nonzero: ++c.nonzero; break;
      case Vanishing::indistinguishable: ++c.indistinguishable; break;
      case Vanishing::error_dominated: ++c.error_dominated; break;
    }
  }
  return c;
}

NonvanishingCount nonvanishing_count(unsigned k, std::uint64_t q, const AFEConfig& cfg, double tol,
                                     const FamilyOptions& options) {
  if (!(tol > 0.0)) throw std::invalid_argument("nonvanishing_count: tol must be positive");
  return nonvanishing_count(evaluate(q, k, nullptr, cfg, options), tol);
}

namespace {

nlohmann::ordered_json complex_json(cplx z) {
  nlohmann::ordered_json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

}  // namespace

std::string MomentReport::to_json(const std::string& manifest_json) const {
  nlohmann::ordered_json j;
  j["q"] = q;
  j["k"] = k;
  j["spec"] = nlohmann::ordered_json::parse(spec.to_json());
  j["S1_empirical"] = complex_json(S1_empirical);
  j["S1_predicted"] = complex_json(S1_predicted);
  j["S2_empirical"] = S2_empirical;
  j["S2_predicted"] = S2_predicted;
  j["cauchy_bound"] = cauchy_bound;
  j["nonvanishing_count"] = nonvanishing_count;
  j["indistinguishable_count"] = indistinguishable_count;
  j["error_dominated_count"] = error_dominated_count;
  j["max_error_estimate"] = max_error_estimate;
  j["family_size"] = family_size;
  j["tolerance_used"] = tolerance_used;
  if (!manifest_json.empty()) j["manifest"] = nlohmann::ordered_json::parse(manifest_json);
  return j.dump(2);
}

MomentReport make_report(const FamilyEvaluation& family, const MollifierSpec& spec, double tol) {
  MomentReport r;
  r.q = family.q;
  r.k = family.k;
  r.spec = spec;
  const FirstMoment s1 = S1(family, spec);
  const SecondMoment s2 = S2(family, spec);
  r.S1_empirical = s1.empirical;
  r.S1_predicted = s1.predicted;
  r.S2_empirical = s2.empirical;
  r.S2_predicted = s2.predicted;
  if (s2.empirical > 0.0) {
    r.cauchy_bound = cauchy_bound(s1.empirical, s2.empirical);
  } else {
    diagnostics::warn("moment report: S2 vanishes; Cauchy bound set to 0");
  }
  const NonvanishingCount c = nonvanishing_count(family, tol);
  r.nonvanishing_count = c.nonzero;
  r.indistinguishable_count = c.indistinguishable;
  r.error_dominated_count = c.error_dominated;
  r.max_error_estimate = c.max_error_estimate;
  r.family_size = c.family_size;
  r.tolerance_used = tol;
  return r;
}

MomentReport moment_report(std::uint64_t q, unsigned k, const MollifierSpec& spec, const AFEConfig& cfg, double tol,
                           const FamilyOptions& options) {
  if (k < 1) throw std::invalid_argument("moment_report: k must be positive");
  spec.validate(0.5);
  return make_report(evaluate_family(q, k, spec, cfg, options), spec, tol);
}

cplx shifted_second_moment(const lfunction::ShiftPair& pair, std::uint64_t q, const MollifierSpec& spec,
                           const AFEConfig& cfg, ShiftedPath path, unsigned jobs) {
  if (q < 3) throw std::invalid_argument("shifted_second_moment: q must be at least 3");
  spec.validate(1.0);
  pair.check_range(q);
  const auto family = characters::enumerate_even_primitive(q);
  const mollifier::Mollifier mol(spec, spec.y(q));
  std::vector<cplx> terms(family.size());

  if (path == ShiftedPath::single) {
    // L(1/2 + b, conj chi) = conj L(1/2 + conj b, chi).
    const auto weights_a = lfunction::afe_weights(q, 0.5 + pair.alpha, cfg);
    const auto weights_b = lfunction::afe_weights(q, std::conj(0.5 + pair.beta), cfg);
    parallel_for(family.size(), jobs, [&](std::size_t i) {
      const lfunction::LFunction L(family[i], cfg);
      terms[i] = L(weights_a) * std::conj(L(weights_b)) * std::norm(mol(family[i]));
    });
  } else {
    const lfunction::ProductKernel kernel(q, pair, cfg);
    const std::size_t count = std::max<std::size_t>(kernel.length(), mol.support());
    parallel_for(family.size(), jobs, [&](std::size_t i) {
      const auto values = family[i].values(count);
      terms[i] = kernel(values) * std::norm(mol(values));
    });
  }
  cplx total = 0.0;
  for (const cplx t : terms) total += t;
  return total;
}

cplx diagonal_Z(std::uint64_t m, std::uint64_t n, std::uint64_t c, const lfunction::ShiftPair& pair,
                std::uint64_t q) {
  if (m == 0 || n == 0 || c == 0) throw std::invalid_argument("diagonal_Z: m, n, c must be positive");
  const cplx shift = pair.alpha + pair.beta;
  if (shift == 0.0) throw PoleError("diagonal_Z: alpha + beta = 0; use diagonal_Z_limit");
  const double lm = std::log(static_cast<double>(m));
  const double ln = std::log(static_cast<double>(n));
  const double lc = std::log(static_cast<double>(c));
  const cplx first = arithmetic::zeta_q(1.0 + shift, q) * std::exp(-shift * lc - pair.beta * lm - pair.alpha * ln);
  const cplx second = std::exp(-shift * std::log(static_cast<double>(q) / std::numbers::pi)) *
                      lfunction::weight_g(pair, lfunction::Sign::minus, 0.0) * arithmetic::zeta_q(1.0 - shift, q) *
                      std::exp(shift * lc + pair.alpha * lm + pair.beta * ln);
  return first + second;
}

double diagonal_Z_limit(std::uint64_t m, std::uint64_t n, std::uint64_t c, std::uint64_t q) {
  if (m == 0 || n == 0 || c == 0) throw std::invalid_argument("diagonal_Z_limit: m, n, c must be positive");
  const auto laurent = arithmetic::zeta_q_laurent_at_one(q);
  // psi(1/4) = -gamma - pi/2 - 3 log 2.
  const double psi_quarter = -arithmetic::kEulerGamma - std::numbers::pi / 2.0 - 3.0 * std::numbers::ln2;
  const double cd = static_cast<double>(c);
  const double scale = static_cast<double>(q) / (std::numbers::pi * cd * cd * static_cast<double>(m) *
                                                 static_cast<double>(n));
  return 2.0 * laurent.constant + laurent.residue * (std::log(scale) + psi_quarter);
}

}  // namespace mollified::moments
