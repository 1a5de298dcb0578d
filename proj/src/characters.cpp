#include "alladi/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace alladi {

std::complex<double> unit_root(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("unit_root: zero denominator");
  const auto d = static_cast<std::int64_t>(den);
  std::int64_t r = num % d;
  if (r < 0) r += d;
  // Nearest quarter turn k, then a residual angle of at most 1/8 turn.
  const std::int64_t k = (8 * r + d) / (2 * d);  // round(4r/d)
  const long double frac =
      static_cast<long double>(4 * r - k * d) / static_cast<long double>(4 * d);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * frac;
  const double c = static_cast<double>(std::cos(angle));
  const double s = static_cast<double>(std::sin(angle));
  switch (k % 4) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<PrimeFactor> factor_small(std::uint64_t n) {
  std::vector<PrimeFactor> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

int mobius(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("mobius: q must be >= 1");
  int mu = 1;
  for (const auto& f : factor_small(q)) {
    if (f.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::uint64_t euler_phi(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("euler_phi: q must be >= 1");
  std::uint64_t phi = q;
  for (const auto& f : factor_small(q)) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

std::int64_t ramanujan_sum(std::uint64_t q, std::int64_t h) {
  if (q == 0) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
  const std::uint64_t g = std::gcd(q, static_cast<std::uint64_t>(h < 0 ? -h : h));
  std::int64_t total = 0;
  for (std::uint64_t d = 1; d * d <= g; ++d) {
    if (g % d) continue;
    total += mobius(q / d) * static_cast<std::int64_t>(d);
    if (d * d != g) total += mobius(q / (g / d)) * static_cast<std::int64_t>(g / d);
  }
  return total;
}

namespace {

std::uint64_t primitive_root(std::uint64_t p, std::uint64_t pe) {
  const std::uint64_t order = pe / p * (p - 1);
  const auto parts = factor_small(order);
  for (std::uint64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& f : parts) {
      if (pow_mod(g, order / f.prime, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

// The residue that is g mod pe and 1 mod q/pe.
std::uint64_t lift(std::uint64_t g, std::uint64_t pe, std::uint64_t q) {
  const std::uint64_t rest = q / pe;
  for (std::uint64_t c = g % pe; c < q; c += pe) {
    if (c % rest == 1 % rest) return c;
  }
  throw std::logic_error("lift: CRT failed");
}

}  // namespace

UnitGroupStructure::UnitGroupStructure(std::uint64_t q) : q_(q) {
  if (q <= 1) throw std::invalid_argument("unit_group: q must be > 1");
  if (q > (std::uint64_t{1} << 24)) throw std::invalid_argument("unit_group: q too large for a dense table");
  phi_ = euler_phi(q);

  for (const auto& [p, e] : factor_small(q)) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 2) {
        generators_.push_back(lift(3, pe, q));
        orders_.push_back(2);
      } else if (e >= 3) {
        generators_.push_back(lift(pe - 1, pe, q));
        orders_.push_back(2);
        generators_.push_back(lift(5, pe, q));
        orders_.push_back(pe / 4);
      }
    } else {
      generators_.push_back(lift(primitive_root(p, pe), pe, q));
      orders_.push_back(pe / p * (p - 1));
    }
  }

  exponent_ = 1;
  for (const auto o : orders_) exponent_ = std::lcm(exponent_, o);

  const std::size_t k = generators_.size();
  dlog_.assign(q * k, 0);
  is_unit_.assign(q, 0);
  std::vector<std::uint32_t> tuple(k, 0);
  for (std::uint64_t count = 0; count < phi_; ++count) {
    std::uint64_t a = 1 % q;
    for (std::size_t i = 0; i < k; ++i) {
      a = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(a) * pow_mod(generators_[i], tuple[i], q) % q);
    }
    if (is_unit_[a]) throw std::logic_error("unit_group: generators are not independent");
    is_unit_[a] = 1;
    std::copy(tuple.begin(), tuple.end(), dlog_.begin() + static_cast<std::ptrdiff_t>(a * k));
    for (std::size_t i = k; i-- > 0;) {
      if (++tuple[i] < orders_[i]) break;
      tuple[i] = 0;
    }
  }
}

std::optional<std::span<const std::uint32_t>> UnitGroupStructure::dlog(std::uint64_t a) const {
  a %= q_;
  if (!is_unit_[a]) return std::nullopt;
  const std::size_t k = generators_.size();
  return std::span<const std::uint32_t>(dlog_.data() + a * k, k);
}

std::shared_ptr<const UnitGroupStructure> unit_group(std::uint64_t q) {
  return std::make_shared<const UnitGroupStructure>(q);
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                                       std::vector<std::uint32_t> index)
    : group_(std::move(group)), index_(std::move(index)) {
  const auto orders = group_->orders();
  if (index_.size() != orders.size()) throw std::invalid_argument("DirichletCharacter: index arity");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (index_[i] >= orders[i]) throw std::invalid_argument("DirichletCharacter: index out of range");
  }
}

bool DirichletCharacter::is_principal() const {
  for (const auto j : index_) {
    if (j != 0) return false;
  }
  return true;
}

std::uint64_t DirichletCharacter::order() const {
  std::uint64_t ord = 1;
  const auto orders = group_->orders();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    ord = std::lcm(ord, orders[i] / std::gcd<std::uint64_t>(orders[i], index_[i]));
  }
  return ord;
}

int DirichletCharacter::parity() const {
  const auto t = turn(-1);
  return t->num == 0 ? 1 : -1;
}

std::optional<Turn> DirichletCharacter::turn(std::int64_t n) const {
  const auto q = static_cast<std::int64_t>(group_->modulus());
  std::int64_t a = n % q;
  if (a < 0) a += q;
  const auto e = group_->dlog(static_cast<std::uint64_t>(a));
  if (!e) return std::nullopt;
  const std::uint64_t E = group_->exponent();
  const auto orders = group_->orders();
  std::uint64_t num = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    num = (num + std::uint64_t{index_[i]} * (*e)[i] % orders[i] * (E / orders[i])) % E;
  }
  return Turn{num, E};
}

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
  const auto t = turn(n);
  return t ? to_complex(*t) : std::complex<double>{};
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<std::uint32_t> idx(index_.size());
  const auto orders = group_->orders();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = static_cast<std::uint32_t>((orders[i] - index_[i]) % orders[i]);
  }
  return DirichletCharacter(group_, std::move(idx));
}

CharacterGroup::CharacterGroup(std::uint64_t q) : group_(unit_group(q)) {
  const auto orders = group_->orders();
  std::vector<std::uint32_t> tuple(orders.size(), 0);
  characters_.reserve(group_->size());
  for (std::uint64_t count = 0; count < group_->size(); ++count) {
    characters_.emplace_back(group_, tuple);
    for (std::size_t i = tuple.size(); i-- > 0;) {
      if (++tuple[i] < orders[i]) break;
      tuple[i] = 0;
    }
  }
}

std::size_t CharacterGroup::conjugate_index(std::size_t i) const {
  const auto conj = characters_.at(i).conjugate();
  const auto orders = group_->orders();
  std::size_t pos = 0;
  for (std::size_t k = 0; k < orders.size(); ++k) pos = pos * orders[k] + conj.index()[k];
  return pos;
}

CharacterGroup enumerate_characters(std::uint64_t q) {
  if (q <= 2) throw std::invalid_argument("enumerate_characters: q must be > 2");
  return CharacterGroup(q);
}

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  std::complex<double> total{};
  for (std::uint64_t l = 1; l <= q; ++l) {
    const auto t = chi.turn(static_cast<std::int64_t>(l));
    if (!t) continue;
    // chi(l) e^{2 pi i l/q} as one exact angle over den * q.
    total += unit_root(static_cast<std::int64_t>(t->num * q + l * t->den), t->den * q);
  }
  return total;
}

std::complex<double> reconstruct_unit_root(std::int64_t h, std::uint64_t q) {
  const auto hq = static_cast<std::int64_t>(q);
  if (std::gcd(static_cast<std::uint64_t>(((h % hq) + hq) % hq), q) != 1) {
    throw std::invalid_argument("reconstruct_unit_root: gcd(h, q) != 1");
  }
  const CharacterGroup group = enumerate_characters(q);
  std::complex<double> total{};
  for (const auto& chi : group.characters()) {
    if (chi.is_principal()) continue;
    const Turn th = *chi.turn(h);
    // tau(chi) conj(chi(h)) = sum_l chi(l) conj(chi(h)) e^{2 pi i l/q}.
    for (std::uint64_t l = 1; l <= q; ++l) {
      const auto tl = chi.turn(static_cast<std::int64_t>(l));
      if (!tl) continue;
      const std::int64_t num = (static_cast<std::int64_t>(tl->num) - static_cast<std::int64_t>(th.num)) * hq +
                               static_cast<std::int64_t>(l * tl->den);
      total += unit_root(num, tl->den * q);
    }
  }
  const double phi = static_cast<double>(euler_phi(q));
  return total / phi + static_cast<double>(mobius(q)) / phi;
}

}  // namespace alladi
