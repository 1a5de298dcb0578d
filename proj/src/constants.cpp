#include "alladi/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "alladi/characters.hpp"
#include "alladi/sieve.hpp"
#include "alladi/special_functions.hpp"

namespace alladi {

namespace {

// Terms below this are dropped; what they could add is charged to the tail.
constexpr double kNegligible = 1e-18;

std::uint64_t reduce(std::int64_t h, std::uint64_t q) {
  const auto qq = static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(((h % qq) + qq) % qq);
}

void validate(double s, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg,
              const char* who) {
  if (q < 2) throw std::invalid_argument(std::string(who) + ": q must be > 1");
  if (q > (std::uint64_t{1} << 31)) throw std::invalid_argument(std::string(who) + ": q too large");
  if (gcd(reduce(h, q), q) != 1) throw std::invalid_argument(std::string(who) + ": gcd(h, q) != 1");
  if (!(s > 0.5)) throw std::domain_error(std::string(who) + ": s must exceed 1/2");
  if (cfg.prime_bound < 100) throw std::invalid_argument(std::string(who) + ": prime bound below 100");
  if (cfg.power_bound < 2) throw std::invalid_argument(std::string(who) + ": power bound below 2");
}

std::vector<std::complex<double>> roots_of_unity(std::uint64_t q) {
  std::vector<std::complex<double>> r(q);
  for (std::uint64_t j = 0; j < q; ++j) r[j] = unit_root(static_cast<std::int64_t>(j), q);
  return r;
}

// sum_{k > last} c p^{-sk}/k <= c p^{-s(last+1)} / ((last+1)(1 - p^{-s})).
double power_tail(double c, double x, double x_last, unsigned last) {
  return c * x_last * x / ((last + 1.0) * (1.0 - x));
}

[[noreturn]] void fail_budget(const char* who, const ConstantResult& r, double target) {
  std::ostringstream msg;
  msg << who << ": tail bound " << r.tail_bound << " exceeds target " << target
      << " with P = " << r.primes_used << ", K = " << r.powers_used;
  throw TruncationError(msg.str(), r);
}

}  // namespace

double prime_power_tail(double a, std::uint64_t P) {
  if (!(a > 1.0)) throw std::domain_error("prime_power_tail: exponent must exceed 1");
  if (P < 2) throw std::domain_error("prime_power_tail: P must be >= 2");
  const double Pd = static_cast<double>(P);
  return 1.25506 * a * std::pow(Pd, 1.0 - a) / ((a - 1.0) * std::log(Pd));
}

ConstantResult higher_power_sum(double s, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg) {
  validate(s, h, q, cfg, "higher_power_sum");
  const std::uint64_t hm = reduce(h, q);
  const auto roots = roots_of_unity(q);
  const unsigned K = cfg.power_bound;

  std::complex<double> sum{};
  double tail = 0.0;
  const auto primes = cached_primes(cfg.prime_bound);
  for (std::size_t idx = 0; idx < primes.size(); ++idx) {
    const std::uint64_t p = primes[idx];
    const double x = std::exp(-s * std::log(static_cast<double>(p)));  // p^{-s}
    if (x * x < kNegligible) {
      // Every remaining prime, up to P and beyond: sum_{n >= p} n^{-2s}.
      const double pd = static_cast<double>(p);
      tail += (x * x + std::pow(pd, 1.0 - 2.0 * s) / (2.0 * s - 1.0)) / (1.0 - x);
      ConstantResult r{sum, tail, cfg.prime_bound, K};
      if (cfg.enforce_target && !r.meets(cfg.target_abs_error)) fail_budget("higher_power_sum", r, cfg.target_abs_error);
      return r;
    }
    const std::uint64_t pm = p % q;
    const std::uint64_t phm = pm * hm % q;
    std::uint64_t pkq = pm;  // p^k mod q
    double pk = x;           // p^{-sk}
    unsigned k = 1;
    while (k < K) {
      ++k;
      pk *= x;
      pkq = pkq * pm % q;
      const std::uint64_t i1 = phm * (k % q) % q;
      const std::uint64_t i2 = pkq * hm % q;
      sum += (roots[i1] - roots[i2]) * (pk / k);
      if (pk < kNegligible) break;
    }
    tail += power_tail(2.0, x, pk, k);
  }
  tail += prime_power_tail(2.0 * s, cfg.prime_bound) /
          (1.0 - std::pow(static_cast<double>(cfg.prime_bound), -s));

  ConstantResult r{sum, tail, cfg.prime_bound, K};
  if (cfg.enforce_target && !r.meets(cfg.target_abs_error)) fail_budget("higher_power_sum", r, cfg.target_abs_error);
  return r;
}

ConstantResult log_correction(double s, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg) {
  validate(s, h, q, cfg, "log_correction");
  TruncationConfig inner = cfg;
  inner.enforce_target = false;
  ConstantResult r = higher_power_sum(s, h, q, inner);

  const std::uint64_t hm = reduce(h, q);
  const auto roots = roots_of_unity(q);
  const double ratio = static_cast<double>(mobius(q)) / static_cast<double>(euler_phi(q));
  for (const auto& f : factor_small(q)) {
    const double x = std::pow(static_cast<double>(f.prime), -s);
    double pk = 1.0;
    std::uint64_t pkq = 1;
    unsigned k = 0;
    while (k < cfg.power_bound) {
      ++k;
      pk *= x;
      pkq = pkq * (f.prime % q) % q;
      r.value += (roots[pkq * hm % q] - ratio) * (pk / k);
      if (pk < kNegligible) break;
    }
    r.tail_bound += power_tail(std::abs(ratio) + 1.0, x, pk, k);
  }

  if (cfg.enforce_target && !r.meets(cfg.target_abs_error)) fail_budget("log_correction", r, cfg.target_abs_error);
  return r;
}

ConstantResult correction_factor(std::int64_t h, std::uint64_t q, const TruncationConfig& cfg) {
  if (q <= 2) throw std::invalid_argument("correction_factor: q must be > 2");
  TruncationConfig inner = cfg;
  inner.enforce_target = false;
  const ConstantResult u = log_correction(1.0, h, q, inner);
  const std::complex<double> v = std::exp(u.value);
  ConstantResult r{v, std::abs(v) * std::expm1(u.tail_bound), u.primes_used, u.powers_used};
  if (cfg.enforce_target && !r.meets(cfg.target_abs_error)) fail_budget("correction_factor", r, cfg.target_abs_error);
  return r;
}

CharacterProduct character_product(double sigma, std::int64_t h, std::uint64_t q) {
  const CharacterGroup group = enumerate_characters(q);
  const double phi = static_cast<double>(euler_phi(q));
  const EvaluationOptions eval;
  CharacterProduct out{{1.0, 0.0}, 0.0};
  for (const auto& chi : group.characters()) {
    if (chi.is_principal()) continue;
    const std::complex<double> w = gauss_sum(chi) * std::conj(chi(h)) / phi;
    const std::complex<double> L = dirichlet_L_real(sigma, chi.conjugate(), eval);
    out.value *= complex_pow(L, w);
    out.relative_error += std::abs(w) * 4.0 * eval.target_abs_error / std::abs(L);
  }
  return out;
}

MainTermConstant main_term_constant(std::int64_t h, std::uint64_t q, const TruncationConfig& cfg) {
  if (q <= 2) throw std::invalid_argument("main_term_constant: q must be > 2");
  const int mu = mobius(q);
  if (mu == 0) {
    if (gcd(reduce(h, q), q) != 1) throw std::invalid_argument("main_term_constant: gcd(h, q) != 1");
    return {true, ConstantResult{{0.0, 0.0}, 0.0, cfg.prime_bound, cfg.power_bound}};
  }
  TruncationConfig inner = cfg;
  inner.enforce_target = false;
  const ConstantResult v = correction_factor(h, q, inner);

  const double ratio = mu / static_cast<double>(euler_phi(q));
  const double prefactor = std::sin(ratio * std::numbers::pi) / std::numbers::pi * gamma_real(1.0 - ratio);
  const CharacterProduct prod = character_product(1.0, h, q);

  const std::complex<double> c = v.value * prefactor * prod.value;
  const double tail = std::abs(prefactor * prod.value) * v.tail_bound + std::abs(c) * prod.relative_error;
  ConstantResult r{c, tail, v.primes_used, v.powers_used};
  if (cfg.enforce_target && !r.meets(cfg.target_abs_error)) fail_budget("main_term_constant", r, cfg.target_abs_error);
  return {false, r};
}

}  // namespace alladi
