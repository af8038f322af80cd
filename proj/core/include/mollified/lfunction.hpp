#pragma once

// Dirichlet L-functions of even primitive characters: L(s, chi), the
// completed Lambda(s, chi), the shifted product formula with the weight
// functions W+ and W-, central derivatives by a Cauchy circle, and the
// diagonal sums that carry the main terms of the shifted second moment.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mollified/characters.hpp"
#include "mollified/gamma.hpp"

namespace mollified::lfunction {

using cplx = std::complex<double>;

/// Shifts away from the central point: L(1/2 + alpha, .) L(1/2 + beta, .).
struct ShiftPair {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};

  /// (alpha + beta) / 2, the zero of H.
  cplx half_sum() const { return 0.5 * (alpha + beta); }
  /// |alpha|, |beta| <= 2 / log q.
  bool in_range(std::uint64_t q) const;
  /// Emits a warning (and carries on) when the shifts leave the range.
  void check_range(std::uint64_t q) const;
};

enum class Sign { plus, minus };

/// The even entire factor G in the weight integrals. `unit` is G = 1, where
/// the Gamma factors alone give exponential decay in the imaginary direction
/// and W(x) decays like exp(-2x). `gaussian` is G(s) = exp(s^2), for which
/// W(x) only decays like erfc(log(x) / 2).
enum class Smoothing { unit, gaussian };

struct AFEConfig {
  Smoothing smoothing = Smoothing::unit;
  double sigma0 = 1.0;             // abscissa of the vertical contour
  double height = 40.0;            // quadrature truncated at |Im s| <= height
  double step = 0.1;               // trapezoid step on the contour
  double cutoff_multiplier = 3.0;  // series kept to n <= c sqrt(q/pi) log q at least
  double target_accuracy = 1e-12;

  /// G(s) = exp(s^2) with sigma0 = 1, height 12, step 0.05.
  static AFEConfig gaussian();

  /// Throws std::invalid_argument on non-positive or non-finite parameters
  /// and on sigma0 <= 1/2.
  void validate() const;

  /// FNV-1a over the parameter bytes; keys the L-value cache.
  std::uint64_t hash() const;

  friend bool operator==(const AFEConfig&, const AFEConfig&) = default;
};

cplx smoothing_G(const AFEConfig& cfg, cplx s);

/// ((a+b)/2)^2 - s^2) / ((a+b)/2)^2. Throws PoleError when a + b = 0.
cplx weight_H(const ShiftPair& pair, cplx s);

/// g+(s) = G((1/2+a+s)/2) G((1/2+b+s)/2) / (G((1/2+a)/2) G((1/2+b)/2)) with G
/// the Gamma function; g- replaces a, b by -a, -b in the numerator only.
cplx weight_g(const ShiftPair& pair, Sign sign, cplx s);

/// Trapezoid nodes on Re s = sigma, |Im s| <= height, with the contour
/// factor step/(2 pi) G(s) already applied. One table per (AFEConfig, sigma,
/// step), built once and shared; sigma and step default to the config's.
struct ContourNodes {
  std::vector<cplx> s;
  std::vector<cplx> factor;
};
std::shared_ptr<const ContourNodes> contour_nodes(const AFEConfig& cfg);
std::shared_ptr<const ContourNodes> contour_nodes(const AFEConfig& cfg, double sigma, double step);

/// W(x) = (1/2 pi i) int G(s) H(s) g(s) x^{-s} ds / s on Re s = sigma0.
///
/// For x < 1 the value is taken instead as the residue at s = 0 (which is
/// g(0)) plus the same integral on a line Re s = -c between the pole at 0 and
/// the first Gamma pole, so that it tends to g(0) as x -> 0 without the
/// x^{-sigma0} growth of the right-hand line.
class WeightFunction {
 public:
  /// Throws PoleError for a + b = 0 and AccuracyError when the estimated
  /// quadrature tail exceeds cfg.target_accuracy relative to the L1 mass of
  /// the integrand.
  WeightFunction(const ShiftPair& pair, Sign sign, const AFEConfig& cfg);

  cplx operator()(double x) const;

  /// Sum of |node weight| |x^{-s}| on the line used for x; the size that
  /// rounding acts on.
  double mass(double x) const;
  /// Estimated contribution of the truncated contour tails, relative to mass.
  double tail_estimate() const { return tail_; }
  /// Point past which |W| stays below max(target, 64 ulp * mass).
  double cutoff() const { return cutoff_; }
  /// Abscissa -c of the left line, or 0 when no left line is used.
  double left_abscissa() const { return left_.sigma; }

 private:
  struct Line {
    double sigma = 0.0;
    std::vector<cplx> s;
    std::vector<cplx> weight;
    double abs_sum = 0.0;
    double tail = 0.0;
  };
  Line build_line(const ShiftPair& pair, Sign sign, const AFEConfig& cfg, double sigma, double step) const;
  static cplx sum_line(const Line& line, double log_x);

  Line right_;
  Line left_;
  cplx residue_{1.0, 0.0};
  double tail_ = 0.0;
  double cutoff_ = 0.0;
};

cplx weight_W(const ShiftPair& pair, Sign sign, double x, const AFEConfig& cfg);

// ---------------------------------------------------------------------------
// Single L-function

/// Number of terms kept in each sum of the single formula.
std::size_t afe_length(std::uint64_t q, const AFEConfig& cfg);

/// Character-independent coefficients of
///   L(s, chi) = sum chi(n) direct[n-1] + eps_chi sum conj(chi(n)) dual[n-1]
/// where direct[n-1] = n^{-s} G(s/2, pi n^2/q) / G(s/2) and
/// dual[n-1] = (q/pi)^{1/2-s} n^{s-1} G((1-s)/2, pi n^2/q) / G(s/2), with G(a, y)
/// the upper incomplete Gamma function. Exact for every s off the poles of
/// G(s/2); the only approximation is the truncation at `length` terms.
struct AFEWeights {
  std::uint64_t q = 0;
  cplx s;
  std::vector<cplx> direct;
  std::vector<cplx> dual;
  double truncation_bound = 0.0;  // estimated size of the dropped terms
};

AFEWeights afe_weights(std::uint64_t q, cplx s, const AFEConfig& cfg);

/// Combines weights with chi(1..N) (N >= weights length) and the root number.
cplx afe_combine(const AFEWeights& w, std::span<const cplx> chi_values, cplx root_number);

/// An even primitive character with its values and root number cached.
class LFunction {
 public:
  /// Throws std::invalid_argument unless chi is even, primitive and q >= 3.
  LFunction(characters::DirichletCharacter chi, AFEConfig cfg = {});

  const characters::DirichletCharacter& character() const { return chi_; }
  const AFEConfig& config() const { return cfg_; }
  cplx root_number() const { return eps_; }
  std::span<const cplx> values() const { return values_; }

  /// L(s, chi). Requires Re s > 0; throws AccuracyError if the truncation
  /// bound exceeds the target.
  cplx operator()(cplx s) const;
  cplx operator()(const AFEWeights& w) const;

 private:
  characters::DirichletCharacter chi_;
  AFEConfig cfg_;
  cplx eps_;
  std::vector<cplx> values_;
};

cplx single_afe(const characters::DirichletCharacter& chi, cplx s, const AFEConfig& cfg = {});

/// (q/pi)^{s/2} Gamma(s/2) L(s, chi).
cplx completed_lambda(const characters::DirichletCharacter& chi, cplx s, const AFEConfig& cfg = {});

/// qhat^{-s} / Gamma(s/2) with qhat = sqrt(q/pi), so that L = H_q Lambda.
cplx H_q_factor(std::uint64_t q, cplx s);

// ---------------------------------------------------------------------------
// Shifted products

/// W+ and W- tabulated at pi u / q for u = 1..U, shared by every character of
/// one modulus.
class ProductKernel {
 public:
  ProductKernel(std::uint64_t q, const ShiftPair& pair, const AFEConfig& cfg = {});

  std::uint64_t modulus() const { return q_; }
  const ShiftPair& pair() const { return pair_; }
  std::size_t length() const { return plus_.size(); }

  /// L(1/2+a, chi) L(1/2+b, conj chi) from the two convolution sums.
  cplx operator()(std::span<const cplx> chi_values) const;

 private:
  std::uint64_t q_;
  ShiftPair pair_;
  std::vector<cplx> plus_;   // W+(pi u / q)
  std::vector<cplx> minus_;  // (q/pi)^{-a-b} W-(pi u / q)
  std::vector<cplx> m_plus_, n_plus_, m_minus_, n_minus_;  // n^{-1/2 -+ shift}
};

/// The shifted product L(1/2+a, chi) L(1/2+b, conj chi) through the W+/W-
/// double sums. Throws PoleError for a + b = 0.
cplx product_afe(const characters::DirichletCharacter& chi, const ShiftPair& pair,
                 const AFEConfig& cfg = {});

// ---------------------------------------------------------------------------
// Central derivatives

inline constexpr double kDefaultRadius = 0.2;
inline unsigned default_circle_nodes(unsigned k) { return 64 + 16 * k; }

struct CentralDerivative {
  std::uint64_t modulus = 0;
  std::uint64_t character_id = 0;
  unsigned order = 0;
  cplx value;
  double radius = kDefaultRadius;
  unsigned nodes = 0;
  double error_estimate = 0.0;
};

/// AFE weights at the M circle nodes 1/2 + r e(j/M) for one modulus. Building
/// it is the expensive step; evaluating a character is O(M N).
class CircleKernel {
 public:
  /// The node weights are built on `jobs` threads (0: hardware parallelism).
  CircleKernel(std::uint64_t q, const AFEConfig& cfg = {}, double radius = kDefaultRadius,
               unsigned nodes = default_circle_nodes(0), unsigned jobs = 1);

  std::uint64_t modulus() const { return q_; }
  double radius() const { return radius_; }
  unsigned nodes() const { return static_cast<unsigned>(weights_.size()); }
  std::size_t length() const { return length_; }

  /// L(1/2 + r e(j/M), chi) for j = 0..M-1.
  std::vector<cplx> node_values(std::span<const cplx> chi_values, cplx root_number) const;
  std::vector<cplx> node_values(const LFunction& L) const;

  /// Cauchy formula of order k from node values (any function, not only L).
  CentralDerivative derivative(std::span<const cplx> node_values, unsigned k) const;

 private:
  std::uint64_t q_;
  double radius_;
  std::size_t length_ = 0;
  std::vector<AFEWeights> weights_;
};

/// Cauchy formula of order k on the circle |s - 1/2| = radius with `nodes`
/// trapezoid points, for arbitrary node values.
CentralDerivative circle_derivative(std::span<const cplx> node_values, unsigned k, double radius);

/// L^(k)(1/2, chi). nodes = 0 selects 64 + 16 k. Requires 0 < r <= 1/4 and
/// nodes >= 8k + 16.
CentralDerivative central_derivative(const characters::DirichletCharacter& chi, unsigned k,
                                     const AFEConfig& cfg = {}, double radius = kDefaultRadius,
                                     unsigned nodes = 0);

/// H_q^(k)(1/2) by the same circle rule.
CentralDerivative H_q_derivative(std::uint64_t q, unsigned k, double radius = kDefaultRadius,
                                 unsigned nodes = 0);

// ---------------------------------------------------------------------------
// Diagonal sums

struct DiagonalSum {
  cplx value;      // the truncated sum
  cplx main_term;  // zeta_q(1 + a + b), or g-(0) zeta_q(1 - a - b)
  std::size_t terms = 0;
};

/// S+(x) = sum_{(n,q)=1} W+(n^2/x) / n^{1+a+b}, S-(x) likewise with W- and
/// n^{1-a-b}.
DiagonalSum diagonal_S(const ShiftPair& pair, Sign sign, double x, std::uint64_t q,
                       const AFEConfig& cfg = {});

struct BSum {
  cplx empirical;
  cplx predicted;
};

/// Twisted family sum of L(1/2+a, chi) L(1/2+b, conj chi) chi(m1) conj chi(n1)
/// over the even primitive characters, and its main term
///   phi+(q)/sqrt(m1 n1) (zeta_q(1+a+b)/(m1^b n1^a)
///                        + (q/pi)^{-a-b} g-(0) zeta_q(1-a-b) m1^a n1^b).
/// Requires gcd(m1, n1) = gcd(m1 n1, q) = 1 and a + b != 0.
BSum B_sum(std::uint64_t m1, std::uint64_t n1, const ShiftPair& pair, std::uint64_t q,
           const AFEConfig& cfg = {});

/// Main term of B_sum alone.
cplx B_main_term(std::uint64_t m1, std::uint64_t n1, const ShiftPair& pair, std::uint64_t q);

}  // namespace mollified::lfunction
