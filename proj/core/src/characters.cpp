#include "mollified/characters.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "mollified/arithmetic.hpp"

__extension__ typedef unsigned __int128 u128;

namespace mollified::characters {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r) {
    const std::int64_t quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  if (r != 1) throw std::logic_error("inverse_mod: not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
  if (p == 2) return 1;
  const auto f = arithmetic::factorize(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (const auto& pe : f.factors)
      if (powmod(g, (p - 1) / pe.prime, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
}

}  // namespace

std::complex<double> unit_root(std::int64_t k, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("unit_root: n must be positive");
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t r = k % nn;
  if (r < 0) r += nn;
  const auto eight_k = static_cast<u128>(r) * 8;
  const auto octant = static_cast<unsigned>(eight_k / n);
  const auto rem = static_cast<std::uint64_t>(eight_k - static_cast<u128>(octant) * n);
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  const double dn = static_cast<double>(n);
  // Even octants measure from the lower axis, odd ones from the upper one,
  // so that k and n - k see bit-identical reduced angles.
  const double b = quarter_pi * (static_cast<double>(rem) / dn);
  const double bp = quarter_pi * (static_cast<double>(n - rem) / dn);
  switch (octant) {
    case 0: return {std::cos(b), std::sin(b)};
    case 1: return {std::sin(bp), std::cos(bp)};
    case 2: return {-std::sin(b), std::cos(b)};
    case 3: return {-std::cos(bp), std::sin(bp)};
    case 4: return {-std::cos(b), -std::sin(b)};
    case 5: return {-std::sin(bp), -std::cos(bp)};
    case 6: return {std::sin(b), -std::cos(b)};
    default: return {std::cos(bp), -std::sin(bp)};
  }
}

// ---------------------------------------------------------------------------
// CharacterGroup

CharacterGroup::CharacterGroup(std::uint64_t q) : q_(q) {
  if (q == 0 || q > kMaxModulus)
    throw std::invalid_argument("CharacterGroup: modulus " + std::to_string(q) +
                                " outside [1, " + std::to_string(kMaxModulus) + "]");
  const auto fact = arithmetic::factorize(q);

  auto lift = [q](std::uint64_t local, std::uint64_t pe) {
    // x = local (mod pe), x = 1 (mod q / pe)
    const std::uint64_t m = q / pe;
    if (m == 1) return local % pe;
    const std::uint64_t t = mulmod((local + pe - 1) % pe, inverse_mod(m % pe, pe), pe);
    return (1 + m * t) % q;
  };

  for (const auto& [p, e] : fact.factors) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;
      if (e == 2) {
        generators_.push_back({lift(3, 4), 2, 4});
        std::vector<std::uint32_t> table(4, kNoLog);
        table[1] = 0;
        table[3] = 1;
        dlog_.push_back(std::move(table));
        continue;
      }
      const std::uint64_t half_order = pe / 4;
      generators_.push_back({lift(pe - 1, pe), 2, pe});
      generators_.push_back({lift(5, pe), half_order, pe});
      std::vector<std::uint32_t> sign(pe, kNoLog), five(pe, kNoLog);
      std::uint64_t x = 1;
      for (std::uint64_t v = 0; v < half_order; ++v) {
        sign[x] = 0;
        five[x] = static_cast<std::uint32_t>(v);
        sign[pe - x] = 1;
        five[pe - x] = static_cast<std::uint32_t>(v);
        x = x * 5 % pe;
      }
      dlog_.push_back(std::move(sign));
      dlog_.push_back(std::move(five));
      continue;
    }
    std::uint64_t g = primitive_root_mod_prime(p);
    if (e >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
    const std::uint64_t order = pe / p * (p - 1);
    generators_.push_back({lift(g, pe), order, pe});
    std::vector<std::uint32_t> table(pe, kNoLog);
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k < order; ++k) {
      table[x] = static_cast<std::uint32_t>(k);
      x = mulmod(x, g, pe);
    }
    dlog_.push_back(std::move(table));
  }

  for (const auto& gen : generators_) {
    phi_ *= gen.order;
    exponent_ = std::lcm(exponent_, gen.order);
  }
  roots_.reserve(exponent_);
  for (std::uint64_t k = 0; k < exponent_; ++k)
    roots_.push_back(unit_root(static_cast<std::int64_t>(k), exponent_));
  additive_.reserve(q_);
  for (std::uint64_t a = 0; a < q_; ++a)
    additive_.push_back(unit_root(static_cast<std::int64_t>(a), q_));
}

std::uint64_t CharacterGroup::reduce(std::int64_t a) const {
  const auto m = static_cast<std::int64_t>(q_);
  std::int64_t r = a % m;
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

bool CharacterGroup::is_unit(std::int64_t a) const { return std::gcd(reduce(a), q_) == 1; }

std::vector<std::uint64_t> CharacterGroup::discrete_log(std::int64_t a) const {
  if (!is_unit(a)) throw std::invalid_argument("discrete_log: not a unit");
  const std::uint64_t r = reduce(a);
  std::vector<std::uint64_t> out(generators_.size());
  for (std::size_t j = 0; j < generators_.size(); ++j)
    out[j] = dlog_[j][r % generators_[j].local_modulus];
  return out;
}

std::uint64_t CharacterGroup::from_exponents(std::span<const std::uint64_t> x) const {
  if (x.size() != generators_.size())
    throw std::invalid_argument("from_exponents: wrong vector length");
  std::uint64_t out = 1 % q_;
  for (std::size_t j = 0; j < x.size(); ++j)
    out = mulmod(out, powmod(generators_[j].value, x[j], q_), q_);
  return out;
}

std::int64_t CharacterGroup::root_index(std::span<const std::uint64_t> e, std::int64_t a) const {
  const std::uint64_t r = reduce(a);
  if (std::gcd(r, q_) != 1) return -1;
  std::uint64_t k = 0;
  for (std::size_t j = 0; j < generators_.size(); ++j) {
    const auto& gen = generators_[j];
    const std::uint64_t x = dlog_[j][r % gen.local_modulus];
    k += (e[j] * x % gen.order) * (exponent_ / gen.order);
    k %= exponent_;
  }
  return static_cast<std::int64_t>(k);
}

std::complex<double> CharacterGroup::additive(std::int64_t a) const { return additive_[reduce(a)]; }

std::shared_ptr<const CharacterGroup> build_group(std::uint64_t q) {
  return std::make_shared<const CharacterGroup>(q);
}

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group,
                                       std::vector<std::uint64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  if (!group_) throw std::invalid_argument("DirichletCharacter: null group");
  const auto& gens = group_->generators();
  if (exponents_.size() != gens.size())
    throw std::invalid_argument("DirichletCharacter: exponent vector has wrong length");
  for (std::size_t j = 0; j < gens.size(); ++j) exponents_[j] %= gens[j].order;
  conductor_ = characters::conductor(*this);
  parity_ = root_index(-1) == 0 ? 1 : -1;
}

std::uint64_t DirichletCharacter::id() const {
  std::uint64_t out = 0;
  const auto& gens = group_->generators();
  for (std::size_t j = 0; j < gens.size(); ++j) out = out * gens[j].order + exponents_[j];
  return out;
}

bool DirichletCharacter::is_principal() const {
  for (const auto e : exponents_)
    if (e) return false;
  return true;
}

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
  const std::int64_t k = root_index(n);
  return k < 0 ? std::complex<double>(0.0, 0.0) : group_->root(static_cast<std::uint64_t>(k));
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<std::uint64_t> e(exponents_.size());
  const auto& gens = group_->generators();
  for (std::size_t j = 0; j < e.size(); ++j)
    e[j] = (gens[j].order - exponents_[j]) % gens[j].order;
  return DirichletCharacter(group_, std::move(e));
}

std::vector<std::complex<double>> DirichletCharacter::values(std::size_t count) const {
  std::vector<std::complex<double>> out(count);
  for (std::size_t n = 1; n <= count; ++n) out[n - 1] = (*this)(static_cast<std::int64_t>(n));
  return out;
}

std::vector<DirichletCharacter> enumerate_characters(std::shared_ptr<const CharacterGroup> group) {
  const auto& gens = group->generators();
  std::vector<DirichletCharacter> out;
  out.reserve(group->order());
  std::vector<std::uint64_t> e(gens.size(), 0);
  for (std::uint64_t count = 0; count < group->order(); ++count) {
    out.emplace_back(group, e);
    for (std::size_t j = gens.size(); j-- > 0;) {
      if (++e[j] < gens[j].order) break;
      e[j] = 0;
    }
  }
  return out;
}

std::vector<DirichletCharacter> enumerate_characters(std::uint64_t q) {
  return enumerate_characters(build_group(q));
}

std::vector<DirichletCharacter> enumerate_even_primitive(std::shared_ptr<const CharacterGroup> group) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : enumerate_characters(std::move(group)))
    if (chi.is_primitive() && chi.is_even()) out.push_back(std::move(chi));
  return out;
}

std::vector<DirichletCharacter> enumerate_even_primitive(std::uint64_t q) {
  return enumerate_even_primitive(build_group(q));
}

std::uint64_t conductor(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  for (const auto f : arithmetic::divisors(q)) {
    bool induced = true;
    for (std::uint64_t a = 1 + f; a < q && induced; a += f)
      if (chi.root_index(static_cast<std::int64_t>(a)) > 0) induced = false;
    if (induced) return f;
  }
  return q;
}

std::complex<double> char_value(const DirichletCharacter& chi, std::int64_t n) { return chi(n); }

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
  const auto& group = chi.group();
  std::complex<double> sum = 0.0;
  for (std::uint64_t a = 0; a < chi.modulus(); ++a) {
    const std::int64_t k = chi.root_index(static_cast<std::int64_t>(a));
    if (k >= 0) sum += group.root(static_cast<std::uint64_t>(k)) * group.additive(static_cast<std::int64_t>(a));
  }
  return sum;
}

std::complex<double> root_number(const DirichletCharacter& chi) {
  if (!chi.is_primitive()) throw std::invalid_argument("root_number: character is not primitive");
  return gauss_sum(chi) / std::sqrt(static_cast<double>(chi.modulus()));
}

Rational orthogonality_even_primitive(std::uint64_t q, std::int64_t m, std::int64_t n) {
  const auto mn_mod = [q](std::int64_t x) {
    const auto qq = static_cast<std::int64_t>(q);
    const std::int64_t r = x % qq;
    return static_cast<std::uint64_t>(r < 0 ? r + qq : r);
  };
  if (std::gcd(mn_mod(m), q) != 1 || std::gcd(mn_mod(n), q) != 1)
    throw std::invalid_argument("orthogonality_even_primitive: need gcd(mn, q) = 1");
  std::int64_t total = 0;
  for (const auto r : arithmetic::divisors(q)) {
    const auto term = arithmetic::moebius(q / r) * static_cast<std::int64_t>(arithmetic::euler_phi(r));
    const auto rr = static_cast<std::int64_t>(r);
    if ((m - n) % rr == 0) total += term;
    if ((m + n) % rr == 0) total += term;
  }
  return Rational(total, 2);
}

}  // namespace mollified::characters
