#pragma once

// Dirichlet character groups mod q, the even primitive family, Gauss sums
// and root numbers.
//
// A character is stored as an exponent vector over a fixed set of unit-group
// generators. Values are roots of unity exp(2 pi i k / L) where L is the
// exponent of (Z/qZ)*; the integer k is computed exactly and only the final
// root is a floating-point number, so cancellation between characters is
// exact at the level of root indices.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mollified/rational.hpp"

namespace mollified::characters {

inline constexpr std::uint64_t kMaxModulus = 1'000'000;

/// exp(2 pi i k / n) with k reduced mod n before any trigonometry. Values at
/// multiples of n/8 are exact and unit_root(n - k, n) == conj(unit_root(k, n)).
std::complex<double> unit_root(std::int64_t k, std::uint64_t n);

struct Generator {
  std::uint64_t value;          // unit mod q (CRT lift, 1 at the other prime powers)
  std::uint64_t order;          // multiplicative order
  std::uint64_t local_modulus;  // p^e of the prime power it lives on
};

/// (Z/qZ)* as a product of cyclic groups, one per generator. For p^e with p
/// odd the generator is a primitive root; 2^2 contributes -1; 2^e (e >= 3)
/// contributes the pair (-1, 5).
class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::uint64_t order() const { return phi_; }
  /// Exponent of the group: lcm of generator orders. Character values are
  /// L-th roots of unity.
  std::uint64_t exponent() const { return exponent_; }
  const std::vector<Generator>& generators() const { return generators_; }

  bool is_unit(std::int64_t a) const;

  /// Exponent vector of a unit a: a = prod g_j^{x_j} (mod q). Throws for
  /// non-units.
  std::vector<std::uint64_t> discrete_log(std::int64_t a) const;

  /// Recomputes prod g_j^{x_j} mod q.
  std::uint64_t from_exponents(std::span<const std::uint64_t> x) const;

  /// sum_j e_j x_j (L / ord_j) mod L for the character with exponent vector
  /// e evaluated at unit a; -1 for non-units.
  std::int64_t root_index(std::span<const std::uint64_t> e, std::int64_t a) const;

  /// exp(2 pi i k / L), tabulated.
  std::complex<double> root(std::uint64_t k) const { return roots_[k % exponent_]; }

  /// exp(2 pi i a / q), tabulated.
  std::complex<double> additive(std::int64_t a) const;

 private:
  std::uint64_t reduce(std::int64_t a) const;

  std::uint64_t q_;
  std::uint64_t phi_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<Generator> generators_;
  // dlog_[j][a mod local_modulus_j] = log of a w.r.t. generator j, or kNoLog.
  std::vector<std::vector<std::uint32_t>> dlog_;
  std::vector<std::complex<double>> roots_;
  std::vector<std::complex<double>> additive_;
};

/// Validates 1 <= q <= kMaxModulus.
std::shared_ptr<const CharacterGroup> build_group(std::uint64_t q);

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group,
                     std::vector<std::uint64_t> exponents);

  const CharacterGroup& group() const { return *group_; }
  const std::shared_ptr<const CharacterGroup>& group_ptr() const { return group_; }
  std::uint64_t modulus() const { return group_->modulus(); }
  const std::vector<std::uint64_t>& exponents() const { return exponents_; }

  /// Lexicographic rank of the exponent vector; 0 is the principal character.
  std::uint64_t id() const;

  std::uint64_t conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  /// chi(-1) in {+1, -1}.
  int parity() const { return parity_; }
  bool is_even() const { return parity_ == 1; }
  bool is_principal() const;

  /// chi(n); zero when gcd(n, q) > 1.
  std::complex<double> operator()(std::int64_t n) const;
  /// Root index k with chi(n) = exp(2 pi i k / L), or -1 when gcd(n, q) > 1.
  std::int64_t root_index(std::int64_t n) const { return group_->root_index(exponents_, n); }

  DirichletCharacter conjugate() const;

  /// chi(1..count); index 0 holds chi(1).
  std::vector<std::complex<double>> values(std::size_t count) const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.exponents_ == b.exponents_;
  }

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<std::uint64_t> exponents_;
  std::uint64_t conductor_ = 1;
  int parity_ = 1;
};

/// All phi(q) characters, lexicographic in the exponent vector.
std::vector<DirichletCharacter> enumerate_characters(std::shared_ptr<const CharacterGroup> group);
std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q);

/// The even primitive characters mod q, in enumeration order.
std::vector<DirichletCharacter> enumerate_even_primitive(std::shared_ptr<const CharacterGroup> group);
std::vector<DirichletCharacter> enumerate_even_primitive(std::uint64_t q);

/// Smallest f | q such that chi is trivial on units congruent to 1 mod f.
std::uint64_t conductor(const DirichletCharacter& chi);

std::complex<double> char_value(const DirichletCharacter& chi, std::int64_t n);

/// tau(chi) = sum_{a mod q} chi(a) e(a/q).
std::complex<double> gauss_sum(const DirichletCharacter& chi);

/// tau(chi) / sqrt(q). Throws std::invalid_argument for imprimitive chi.
std::complex<double> root_number(const DirichletCharacter& chi);

/// sum over even primitive chi mod q of chi(m) conj(chi(n)), as the exact
/// divisor-sum formula
///   1/2 [ sum_{q=dr, r | m-n} mu(d) phi(r) + sum_{q=dr, r | m+n} mu(d) phi(r) ].
/// Requires gcd(mn, q) = 1.
Rational orthogonality_even_primitive(std::uint64_t q, std::int64_t m, std::int64_t n);

}  // namespace mollified::characters
