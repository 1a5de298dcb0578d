#pragma once

// Dirichlet characters mod q with values kept as exact fractions of a turn.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace alladi {

// Exact angle num/den of a full turn, 0 <= num < den.
struct Turn {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  friend bool operator==(const Turn& a, const Turn& b) {
    return a.num * b.den == b.num * a.den;
  }
};

// e^{2 pi i num/den}, reduced to the nearest quarter turn first so the
// trigonometric call only ever sees angles in [-pi/4, pi/4].
std::complex<double> unit_root(std::int64_t num, std::uint64_t den);
inline std::complex<double> to_complex(Turn t) {
  return unit_root(static_cast<std::int64_t>(t.num), t.den);
}

struct PrimeFactor {
  std::uint64_t prime;
  unsigned exponent;
};

// Trial division; meant for moduli, not for sieve-scale inputs.
std::vector<PrimeFactor> factor_small(std::uint64_t n);

int mobius(std::uint64_t q);
std::uint64_t euler_phi(std::uint64_t q);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// c_q(h) = sum_{l <= q, (l,q)=1} e^{2 pi i l h / q}, via sum_{d | (q,h)} mu(q/d) d.
std::int64_t ramanujan_sum(std::uint64_t q, std::int64_t h);

// (Z/qZ)^* as a product of cyclic groups, one or two per prime power of q.
class UnitGroupStructure {
 public:
  explicit UnitGroupStructure(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::span<const std::uint64_t> generators() const { return generators_; }
  std::span<const std::uint64_t> orders() const { return orders_; }
  std::uint64_t size() const { return phi_; }
  // lcm of the orders; every character value is a multiple of 1/exponent turns.
  std::uint64_t exponent() const { return exponent_; }

  // Exponent tuple of a (mod q); nullopt when gcd(a, q) > 1.
  std::optional<std::span<const std::uint32_t>> dlog(std::uint64_t a) const;

 private:
  std::uint64_t q_;
  std::uint64_t phi_;
  std::uint64_t exponent_;
  std::vector<std::uint64_t> generators_;
  std::vector<std::uint64_t> orders_;
  std::vector<std::uint32_t> dlog_;  // q * generators_.size(), row a
  std::vector<std::uint8_t> is_unit_;
};

std::shared_ptr<const UnitGroupStructure> unit_group(std::uint64_t q);

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                     std::vector<std::uint32_t> index);

  std::uint64_t modulus() const { return group_->modulus(); }
  std::span<const std::uint32_t> index() const { return index_; }
  const UnitGroupStructure& group() const { return *group_; }

  bool is_principal() const;
  std::uint64_t order() const;
  // +1 for even characters, -1 for odd ones.
  int parity() const;

  // nullopt means chi(n) = 0.
  std::optional<Turn> turn(std::int64_t n) const;
  std::complex<double> operator()(std::int64_t n) const;

  DirichletCharacter conjugate() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.index_ == b.index_;
  }

 private:
  std::shared_ptr<const UnitGroupStructure> group_;
  std::vector<std::uint32_t> index_;
};

class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint64_t q);

  std::uint64_t modulus() const { return group_->modulus(); }
  const UnitGroupStructure& structure() const { return *group_; }
  std::span<const DirichletCharacter> characters() const { return characters_; }
  const DirichletCharacter& principal() const { return characters_.front(); }
  std::size_t size() const { return characters_.size(); }

  // Position of conj(chi) in characters().
  std::size_t conjugate_index(std::size_t i) const;

 private:
  std::shared_ptr<const UnitGroupStructure> group_;
  std::vector<DirichletCharacter> characters_;  // principal first
};

// Requires q > 2; the mod-2 case has its own identity check.
CharacterGroup enumerate_characters(std::uint64_t q);

// tau(chi) = sum_{l mod q} chi(l) e^{2 pi i l / q}.
std::complex<double> gauss_sum(const DirichletCharacter& chi);

// (1/phi(q)) sum_{chi != chi0} tau(chi) conj(chi(h)) + mu(q)/phi(q); equals e^{2 pi i h/q}.
std::complex<double> reconstruct_unit_root(std::int64_t h, std::uint64_t q);

}  // namespace alladi
