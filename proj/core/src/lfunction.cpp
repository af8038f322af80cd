#include "mollified/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "mollified/arithmetic.hpp"
#include "mollified/diagnostics.hpp"
#include "mollified/errors.hpp"
#include "mollified/parallel.hpp"

namespace mollified::lfunction {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUlp = std::numeric_limits<double>::epsilon();

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

void require_even_primitive(const characters::DirichletCharacter& chi) {
  if (chi.modulus() < 3) throw std::invalid_argument("L-function: modulus must be at least 3");
  if (!chi.is_primitive()) throw std::invalid_argument("L-function: character must be primitive");
  if (!chi.is_even()) throw std::invalid_argument("L-function: character must be even");
}

void require_nonzero_sum(const ShiftPair& pair) {
  if (pair.alpha + pair.beta == cplx(0.0, 0.0))
    throw PoleError("shifted weights need alpha + beta != 0");
}

}  // namespace

// ---------------------------------------------------------------------------

bool ShiftPair::in_range(std::uint64_t q) const {
  if (q < 3) return false;
  const double bound = 2.0 / std::log(static_cast<double>(q));
  return std::abs(alpha) <= bound && std::abs(beta) <= bound;
}

void ShiftPair::check_range(std::uint64_t q) const {
  if (!in_range(q)) {
    std::ostringstream os;
    os << "shifts (" << alpha << ", " << beta << ") exceed 2/log q for q = " << q;
    diagnostics::warn(os.str());
  }
}

AFEConfig AFEConfig::gaussian() {
  AFEConfig cfg;
  cfg.smoothing = Smoothing::gaussian;
  cfg.sigma0 = 1.0;
  cfg.height = 12.0;
  cfg.step = 0.05;
  return cfg;
}

void AFEConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(std::isfinite(sigma0) && sigma0 > 0.5))
    throw std::invalid_argument("AFEConfig: sigma0 must exceed 1/2");
  if (!positive(height) || !positive(step) || !positive(cutoff_multiplier) || !positive(target_accuracy))
    throw std::invalid_argument("AFEConfig: parameters must be positive and finite");
  if (step >= height) throw std::invalid_argument("AFEConfig: step must be smaller than height");
  if (target_accuracy >= 1.0) throw std::invalid_argument("AFEConfig: target accuracy must be below 1");
}

std::uint64_t AFEConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const auto tag = static_cast<std::uint32_t>(smoothing);
  mix(&tag, sizeof tag);
  for (const double v : {sigma0, height, step, cutoff_multiplier, target_accuracy}) mix(&v, sizeof v);
  return h;
}

cplx smoothing_G(const AFEConfig& cfg, cplx s) {
  return cfg.smoothing == Smoothing::gaussian ? std::exp(s * s) : cplx(1.0, 0.0);
}

cplx weight_H(const ShiftPair& pair, cplx s) {
  require_nonzero_sum(pair);
  const cplx k = pair.half_sum();
  const cplx k2 = k * k;
  return (k2 - s * s) / k2;
}

cplx weight_g(const ShiftPair& pair, Sign sign, cplx s) {
  const cplx a = sign == Sign::plus ? pair.alpha : -pair.alpha;
  const cplx b = sign == Sign::plus ? pair.beta : -pair.beta;
  const cplx num = log_gamma(0.5 * (0.5 + a + s)) + log_gamma(0.5 * (0.5 + b + s));
  const cplx den = log_gamma(0.5 * (0.5 + pair.alpha)) + log_gamma(0.5 * (0.5 + pair.beta));
  return std::exp(num - den);
}

std::shared_ptr<const ContourNodes> contour_nodes(const AFEConfig& cfg) {
  return contour_nodes(cfg, cfg.sigma0, cfg.step);
}

std::shared_ptr<const ContourNodes> contour_nodes(const AFEConfig& cfg, double sigma, double step) {
  cfg.validate();
  if (!(step > 0.0)) throw std::invalid_argument("contour_nodes: step must be positive");
  static std::mutex mutex;
  static std::map<std::tuple<std::uint64_t, double, double>, std::shared_ptr<const ContourNodes>> cache;
  const auto key = std::make_tuple(cfg.hash(), sigma, step);
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto nodes = std::make_shared<ContourNodes>();
  const auto half = static_cast<long>(std::ceil(cfg.height / step - 1e-9));
  nodes->s.reserve(2 * half + 1);
  nodes->factor.reserve(2 * half + 1);
  for (long j = -half; j <= half; ++j) {
    const cplx s(sigma, static_cast<double>(j) * step);
    nodes->s.push_back(s);
    nodes->factor.push_back(step / (2.0 * kPi) * smoothing_G(cfg, s));
  }
  cache.emplace(key, nodes);
  return nodes;
}

// ---------------------------------------------------------------------------

WeightFunction::Line WeightFunction::build_line(const ShiftPair& pair, Sign sign, const AFEConfig& cfg,
                                                double sigma, double step) const {
  const auto nodes = contour_nodes(cfg, sigma, step);
  Line line;
  line.sigma = sigma;
  line.s = nodes->s;
  line.weight.resize(line.s.size());
  for (std::size_t j = 0; j < line.s.size(); ++j) {
    line.weight[j] = nodes->factor[j] * weight_H(pair, line.s[j]) * weight_g(pair, sign, line.s[j]) / line.s[j];
    line.abs_sum += std::abs(line.weight[j]);
  }
  // The integrand decays monotonically near the ends; extrapolate the
  // neglected tails geometrically from the last two nodes on each side.
  auto tail_side = [&](std::size_t end, std::size_t inner) {
    const double a = std::abs(line.weight[end]);
    const double b = std::abs(line.weight[inner]);
    if (a == 0.0) return 0.0;
    const double ratio = b > 0.0 ? a / b : 1.0;
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return a * ratio / (1.0 - ratio);
  };
  const std::size_t last = line.weight.size() - 1;
  line.tail = (tail_side(0, 1) + tail_side(last, last - 1)) / line.abs_sum;
  return line;
}

cplx WeightFunction::sum_line(const Line& line, double log_x) {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < line.s.size(); ++j) sum += line.weight[j] * std::exp(-line.s[j] * log_x);
  return sum;
}

WeightFunction::WeightFunction(const ShiftPair& pair, Sign sign, const AFEConfig& cfg) {
  require_nonzero_sum(pair);
  cfg.validate();
  right_ = build_line(pair, sign, cfg, cfg.sigma0, cfg.step);
  tail_ = right_.tail;
  if (!(tail_ <= cfg.target_accuracy)) {
    std::ostringstream os;
    os << "weight quadrature tail " << tail_ << " exceeds target " << cfg.target_accuracy;
    throw AccuracyError(os.str());
  }

  // Left line halfway between s = 0 and the nearest Gamma pole at
  // s = -1/2 -+ shift. The trapezoid error decays like exp(-2 pi d / step)
  // with d the distance to the nearest singularity, so the step shrinks with
  // the gap.
  const double worst = std::max({std::abs(pair.alpha.real()), std::abs(pair.beta.real())});
  const double c = 0.5 * (0.5 - worst);
  if (c > 0.05) {
    residue_ = smoothing_G(cfg, 0.0) * weight_g(pair, sign, 0.0);
    const double step = std::min(cfg.step, 2.0 * kPi * c / 40.0);
    Line left = build_line(pair, sign, cfg, -c, step);
    if (left.tail <= cfg.target_accuracy) left_ = std::move(left);
  }

  // Scan outward geometrically until |W| stays below the threshold.
  auto threshold = [&](double x) { return std::max(cfg.target_accuracy, 64.0 * kUlp * mass(x)); };
  double x = 1.0;
  int quiet = 0;
  while (quiet < 3) {
    if (x > 1e15) throw AccuracyError("weight function does not decay to the target");
    if (std::abs((*this)(x)) < threshold(x)) {
      if (quiet++ == 0) cutoff_ = x;
    } else {
      quiet = 0;
    }
    x *= 1.1;
  }
}

cplx WeightFunction::operator()(double x) const {
  if (!(x > 0.0)) throw std::domain_error("weight function: x must be positive");
  const double log_x = std::log(x);
  if (x < 1.0 && !left_.s.empty()) return residue_ + sum_line(left_, log_x);
  return sum_line(right_, log_x);
}

double WeightFunction::mass(double x) const {
  const Line& line = (x < 1.0 && !left_.s.empty()) ? left_ : right_;
  return line.abs_sum * std::pow(x, -line.sigma);
}

cplx weight_W(const ShiftPair& pair, Sign sign, double x, const AFEConfig& cfg) {
  return WeightFunction(pair, sign, cfg)(x);
}

// ---------------------------------------------------------------------------

std::size_t afe_length(std::uint64_t q, const AFEConfig& cfg) {
  cfg.validate();
  const double qd = static_cast<double>(q);
  const double depth = -std::log(cfg.target_accuracy) + 4.0;
  const double by_multiplier = cfg.cutoff_multiplier * std::sqrt(qd / kPi) * std::log(qd);
  const double by_decay = std::sqrt(qd * depth / kPi);
  return static_cast<std::size_t>(std::ceil(std::max({by_multiplier, by_decay, 2.0})));
}

AFEWeights afe_weights(std::uint64_t q, cplx s, const AFEConfig& cfg) {
  if (q < 3) throw std::invalid_argument("afe_weights: modulus must be at least 3");
  if (!(s.real() > 0.0)) throw std::domain_error("afe_weights: requires Re s > 0");
  const std::size_t N = afe_length(q, cfg);
  const double qd = static_cast<double>(q);
  const cplx a = 0.5 * s;
  const cplx b = 0.5 * (1.0 - s);
  const cplx inv_gamma = std::exp(-log_gamma(a));
  const cplx dual_scale = std::exp((0.5 - s) * std::log(qd / kPi)) * inv_gamma;

  AFEWeights w;
  w.q = q;
  w.s = s;
  w.direct.resize(N);
  w.dual.resize(N);
  auto terms = [&](std::size_t n, cplx& direct, cplx& dual) {
    const double log_n = std::log(static_cast<double>(n));
    const double y = kPi * static_cast<double>(n) * static_cast<double>(n) / qd;
    direct = std::exp(-s * log_n) * upper_incomplete_gamma(a, y) * inv_gamma;
    dual = dual_scale * std::exp((s - 1.0) * log_n) * upper_incomplete_gamma(b, y);
  };
  for (std::size_t n = 1; n <= N; ++n) terms(n, w.direct[n - 1], w.dual[n - 1]);

  cplx next_direct, next_dual;
  terms(N + 1, next_direct, next_dual);
  const double ratio = std::exp(-kPi * (2.0 * static_cast<double>(N) + 1.0) / qd);
  w.truncation_bound = (std::abs(next_direct) + std::abs(next_dual)) / (1.0 - ratio);
  return w;
}

cplx afe_combine(const AFEWeights& w, std::span<const cplx> chi_values, cplx root_number) {
  const std::size_t N = w.direct.size();
  if (chi_values.size() < N) throw std::invalid_argument("afe_combine: too few character values");
  cplx direct = 0.0, dual = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    direct += chi_values[i] * w.direct[i];
    dual += std::conj(chi_values[i]) * w.dual[i];
  }
  return direct + root_number * dual;
}

LFunction::LFunction(characters::DirichletCharacter chi, AFEConfig cfg)
    : chi_(std::move(chi)), cfg_(cfg) {
  require_even_primitive(chi_);
  cfg_.validate();
  eps_ = characters::root_number(chi_);
  values_ = chi_.values(afe_length(chi_.modulus(), cfg_));
}

cplx LFunction::operator()(cplx s) const { return (*this)(afe_weights(chi_.modulus(), s, cfg_)); }

cplx LFunction::operator()(const AFEWeights& w) const {
  if (w.q != chi_.modulus()) throw std::invalid_argument("LFunction: weights for another modulus");
  if (w.truncation_bound > cfg_.target_accuracy) {
    std::ostringstream os;
    os << "L-series truncation bound " << w.truncation_bound << " exceeds target";
    throw AccuracyError(os.str());
  }
  return afe_combine(w, values_, eps_);
}

cplx single_afe(const characters::DirichletCharacter& chi, cplx s, const AFEConfig& cfg) {
  return LFunction(chi, cfg)(s);
}

cplx completed_lambda(const characters::DirichletCharacter& chi, cplx s, const AFEConfig& cfg) {
  const double qd = static_cast<double>(chi.modulus());
  return std::exp(0.5 * s * std::log(qd / kPi) + log_gamma(0.5 * s)) * single_afe(chi, s, cfg);
}

cplx H_q_factor(std::uint64_t q, cplx s) {
  if (q == 0) throw std::invalid_argument("H_q_factor: q must be positive");
  const double log_qhat = 0.5 * std::log(static_cast<double>(q) / kPi);
  // 1/Gamma is entire; at its zeros the value is exactly 0.
  const cplx half = 0.5 * s;
  if (half.imag() == 0.0 && half.real() <= 0.0 && half.real() == std::floor(half.real()))
    return 0.0;
  return std::exp(-s * log_qhat - log_gamma(half));
}

// ---------------------------------------------------------------------------

ProductKernel::ProductKernel(std::uint64_t q, const ShiftPair& pair, const AFEConfig& cfg)
    : q_(q), pair_(pair) {
  if (q < 3) throw std::invalid_argument("ProductKernel: modulus must be at least 3");
  require_nonzero_sum(pair);
  pair.check_range(q);
  const WeightFunction plus(pair, Sign::plus, cfg);
  const WeightFunction minus(pair, Sign::minus, cfg);
  const double qd = static_cast<double>(q);
  const double x_max = std::max(plus.cutoff(), minus.cutoff());
  const double length = std::ceil(x_max * qd / kPi);
  if (length > 5e7)
    throw AccuracyError("ProductKernel: weights decay too slowly for a tabulated double sum");
  const auto U = static_cast<std::size_t>(length);
  const cplx scale = std::exp(-(pair.alpha + pair.beta) * std::log(qd / kPi));

  plus_.resize(U);
  minus_.resize(U);
  m_plus_.resize(U);
  n_plus_.resize(U);
  m_minus_.resize(U);
  n_minus_.resize(U);
  for (std::size_t u = 1; u <= U; ++u) {
    const double x = kPi * static_cast<double>(u) / qd;
    plus_[u - 1] = plus(x);
    minus_[u - 1] = scale * minus(x);
    const double log_u = std::log(static_cast<double>(u));
    m_plus_[u - 1] = std::exp(-(0.5 + pair.alpha) * log_u);
    n_plus_[u - 1] = std::exp(-(0.5 + pair.beta) * log_u);
    m_minus_[u - 1] = std::exp(-(0.5 - pair.alpha) * log_u);
    n_minus_[u - 1] = std::exp(-(0.5 - pair.beta) * log_u);
  }
}

cplx ProductKernel::operator()(std::span<const cplx> chi_values) const {
  const std::size_t U = plus_.size();
  if (chi_values.size() < U) throw std::invalid_argument("ProductKernel: too few character values");
  // Dirichlet convolutions a(u) = sum_{mn = u} c1(m) c2(n).
  std::vector<cplx> first(U, 0.0), second(U, 0.0);
  for (std::size_t m = 1; m <= U; ++m) {
    const cplx chi_m = chi_values[m - 1];
    if (chi_m == cplx(0.0, 0.0)) continue;
    const cplx c_plus = chi_m * m_plus_[m - 1];
    const cplx c_minus = std::conj(chi_m) * m_minus_[m - 1];
    for (std::size_t n = 1; m * n <= U; ++n) {
      const cplx chi_n = chi_values[n - 1];
      first[m * n - 1] += c_plus * std::conj(chi_n) * n_plus_[n - 1];
      second[m * n - 1] += c_minus * chi_n * n_minus_[n - 1];
    }
  }
  cplx sum = 0.0;
  for (std::size_t u = 0; u < U; ++u) sum += first[u] * plus_[u] + second[u] * minus_[u];
  return sum;
}

cplx product_afe(const characters::DirichletCharacter& chi, const ShiftPair& pair, const AFEConfig& cfg) {
  require_even_primitive(chi);
  const ProductKernel kernel(chi.modulus(), pair, cfg);
  const auto values = chi.values(kernel.length());
  return kernel(values);
}

// ---------------------------------------------------------------------------

CircleKernel::CircleKernel(std::uint64_t q, const AFEConfig& cfg, double radius, unsigned nodes, unsigned jobs)
    : q_(q), radius_(radius) {
  if (!(radius > 0.0 && radius <= 0.25)) throw std::invalid_argument("CircleKernel: radius must lie in (0, 1/4]");
  if (nodes < 4) throw std::invalid_argument("CircleKernel: too few nodes");
  length_ = afe_length(q, cfg);
  weights_.resize(nodes);
  // Node M - j is the conjugate of node j, and so are its weights.
  parallel_for(nodes / 2 + 1, jobs, [&](std::size_t j) {
    const cplx s = 0.5 + radius * characters::unit_root(static_cast<std::int64_t>(j), nodes);
    weights_[j] = afe_weights(q, s, cfg);
    if (weights_[j].truncation_bound > cfg.target_accuracy)
      throw AccuracyError("CircleKernel: truncation bound exceeds target");
  });
  for (unsigned j = nodes / 2 + 1; j < nodes; ++j) {
    const AFEWeights& mirror = weights_[nodes - j];
    AFEWeights& w = weights_[j];
    w.q = q;
    w.s = std::conj(mirror.s);
    w.truncation_bound = mirror.truncation_bound;
    w.direct.resize(mirror.direct.size());
    w.dual.resize(mirror.dual.size());
    std::transform(mirror.direct.begin(), mirror.direct.end(), w.direct.begin(),
                   [](cplx z) { return std::conj(z); });
    std::transform(mirror.dual.begin(), mirror.dual.end(), w.dual.begin(),
                   [](cplx z) { return std::conj(z); });
  }
}

std::vector<cplx> CircleKernel::node_values(std::span<const cplx> chi_values, cplx root_number) const {
  std::vector<cplx> out(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j) out[j] = afe_combine(weights_[j], chi_values, root_number);
  return out;
}

std::vector<cplx> CircleKernel::node_values(const LFunction& L) const {
  if (L.character().modulus() != q_) throw std::invalid_argument("CircleKernel: modulus mismatch");
  return node_values(L.values(), L.root_number());
}

CentralDerivative circle_derivative(std::span<const cplx> node_values, unsigned k, double radius) {
  const auto M = static_cast<unsigned>(node_values.size());
  if (!(radius > 0.0)) throw std::invalid_argument("circle_derivative: radius must be positive");
  if (M < 8 * k + 16) throw std::invalid_argument("circle_derivative: need at least 8k + 16 nodes");
  auto mode = [&](unsigned m) {
    cplx c = 0.0;
    for (unsigned j = 0; j < M; ++j)
      c += node_values[j] * characters::unit_root(-static_cast<std::int64_t>((static_cast<std::uint64_t>(j) * m) % M), M);
    return c / static_cast<double>(M);
  };
  double peak = 0.0;
  for (const cplx v : node_values) peak = std::max(peak, std::abs(v));
  const double scale = factorial(k) / std::pow(radius, static_cast<double>(k));

  CentralDerivative d;
  d.order = k;
  d.radius = radius;
  d.nodes = M;
  d.value = scale * mode(k);
  d.error_estimate = scale * (std::abs(mode(M / 2)) + 64.0 * kUlp * peak);
  return d;
}

CentralDerivative CircleKernel::derivative(std::span<const cplx> node_values, unsigned k) const {
  if (node_values.size() != weights_.size()) throw std::invalid_argument("CircleKernel: node count mismatch");
  CentralDerivative d = circle_derivative(node_values, k, radius_);
  d.modulus = q_;
  double truncation = 0.0;
  for (const auto& w : weights_) truncation = std::max(truncation, w.truncation_bound);
  d.error_estimate += factorial(k) / std::pow(radius_, static_cast<double>(k)) * truncation;
  return d;
}

CentralDerivative central_derivative(const characters::DirichletCharacter& chi, unsigned k,
                                     const AFEConfig& cfg, double radius, unsigned nodes) {
  if (nodes == 0) nodes = default_circle_nodes(k);
  if (nodes < 8 * k + 16) throw std::invalid_argument("central_derivative: need at least 8k + 16 nodes");
  const LFunction L(chi, cfg);
  const CircleKernel kernel(chi.modulus(), cfg, radius, nodes);
  CentralDerivative d = kernel.derivative(kernel.node_values(L), k);
  d.character_id = chi.id();
  return d;
}

CentralDerivative H_q_derivative(std::uint64_t q, unsigned k, double radius, unsigned nodes) {
  if (nodes == 0) nodes = default_circle_nodes(k);
  if (!(radius > 0.0 && radius <= 0.25)) throw std::invalid_argument("H_q_derivative: radius must lie in (0, 1/4]");
  std::vector<cplx> values(nodes);
  for (unsigned j = 0; j < nodes; ++j) values[j] = H_q_factor(q, 0.5 + radius * characters::unit_root(j, nodes));
  CentralDerivative d = circle_derivative(values, k, radius);
  d.modulus = q;
  return d;
}

// ---------------------------------------------------------------------------

DiagonalSum diagonal_S(const ShiftPair& pair, Sign sign, double x, std::uint64_t q, const AFEConfig& cfg) {
  if (!(x > 0.0)) throw std::domain_error("diagonal_S: x must be positive");
  if (q == 0) throw std::invalid_argument("diagonal_S: q must be positive");
  const WeightFunction W(pair, sign, cfg);
  const cplx shift = pair.alpha + pair.beta;
  const cplx exponent = sign == Sign::plus ? 1.0 + shift : 1.0 - shift;
  const auto n_max = static_cast<std::uint64_t>(std::ceil(std::sqrt(x * W.cutoff())));

  DiagonalSum out;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (std::gcd(n, q) != 1) continue;
    const double nd = static_cast<double>(n);
    out.value += W(nd * nd / x) * std::exp(-exponent * std::log(nd));
    ++out.terms;
  }
  out.main_term = sign == Sign::plus ? arithmetic::zeta_q(1.0 + shift, q)
                                     : weight_g(pair, Sign::minus, 0.0) * arithmetic::zeta_q(1.0 - shift, q);
  return out;
}

cplx B_main_term(std::uint64_t m1, std::uint64_t n1, const ShiftPair& pair, std::uint64_t q) {
  require_nonzero_sum(pair);
  const double qd = static_cast<double>(q);
  const double lm = std::log(static_cast<double>(m1));
  const double ln = std::log(static_cast<double>(n1));
  const cplx shift = pair.alpha + pair.beta;
  const cplx first = arithmetic::zeta_q(1.0 + shift, q) * std::exp(-pair.beta * lm - pair.alpha * ln);
  const cplx second = std::exp(-shift * std::log(qd / kPi)) * weight_g(pair, Sign::minus, 0.0) *
                      arithmetic::zeta_q(1.0 - shift, q) * std::exp(pair.alpha * lm + pair.beta * ln);
  return arithmetic::phi_plus(q).to_double() / std::sqrt(static_cast<double>(m1) * static_cast<double>(n1)) *
         (first + second);
}

BSum B_sum(std::uint64_t m1, std::uint64_t n1, const ShiftPair& pair, std::uint64_t q, const AFEConfig& cfg) {
  if (m1 == 0 || n1 == 0) throw std::invalid_argument("B_sum: m1, n1 must be positive");
  if (std::gcd(m1, n1) != 1 || std::gcd(m1 * n1, q) != 1)
    throw std::invalid_argument("B_sum: requires gcd(m1, n1) = gcd(m1 n1, q) = 1");
  require_nonzero_sum(pair);
  pair.check_range(q);

  BSum out;
  const cplx s_a = 0.5 + pair.alpha;
  const cplx s_b = std::conj(0.5 + pair.beta);
  const auto weights_a = afe_weights(q, s_a, cfg);
  const auto weights_b = afe_weights(q, s_b, cfg);
  for (const auto& chi : characters::enumerate_even_primitive(q)) {
    const LFunction L(chi, cfg);
    // L(s, conj chi) = conj L(conj s, chi).
    const cplx value = L(weights_a) * std::conj(L(weights_b)) * chi(static_cast<std::int64_t>(m1)) *
                       std::conj(chi(static_cast<std::int64_t>(n1)));
    out.empirical += value;
  }
  out.predicted = B_main_term(m1, n1, pair, q);
  return out;
}

}  // namespace mollified::lfunction
