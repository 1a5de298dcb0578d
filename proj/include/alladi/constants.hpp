#pragma once

// Truncated prime sums behind the main-term constant of
// sum_{n<=x} e^{2 pi i h A(n)/q}, each carrying a rigorous tail bound.
//
//   higher_power_sum(s) = sum_p sum_{k>=2} (e(phk/q) - e(p^k h/q)) / (k p^{sk})
//   log_correction(s)   = -(mu/phi) sum_{p|q} sum_k 1/(k p^{sk})
//                         + sum_{p|q} sum_k e(h p^k/q)/(k p^{sk}) + higher_power_sum(s)
//   correction_factor   = exp(log_correction(1))
//   main_term_constant  = correction_factor sin(mu pi/phi)/pi Gamma(1 - mu/phi)
//                         prod_{chi != chi0} L(1, chi)^{tau(conj chi) chi(h)/phi}
//
// with e(t) = e^{2 pi i t}, mu = mu(q), phi = phi(q).

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace alladi {

struct TruncationConfig {
  std::uint64_t prime_bound = 10'000'000;
  unsigned power_bound = 64;
  double target_abs_error = 1e-6;
  // When false, results whose tail bound misses the target are returned as-is
  // (the caller propagates tail_bound itself) instead of raising.
  bool enforce_target = true;
};

struct ConstantResult {
  std::complex<double> value;
  double tail_bound = 0.0;
  std::uint64_t primes_used = 0;  // P
  unsigned powers_used = 0;       // K

  bool meets(double target) const { return tail_bound <= target; }
};

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, ConstantResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const ConstantResult& partial() const { return partial_; }

 private:
  ConstantResult partial_;
};

// Rigorous upper bound for sum_{p > P} p^{-a}, a > 1, from pi(t) <= 1.25506 t/log t.
double prime_power_tail(double a, std::uint64_t P);

ConstantResult higher_power_sum(double s, std::int64_t h, std::uint64_t q,
                                const TruncationConfig& cfg = {});

ConstantResult log_correction(double s, std::int64_t h, std::uint64_t q,
                              const TruncationConfig& cfg = {});

ConstantResult correction_factor(std::int64_t h, std::uint64_t q, const TruncationConfig& cfg = {});

struct MainTermConstant {
  // mu(q) = 0: there is no main term and `constant` is zero.
  bool vanishes = false;
  ConstantResult constant;
};

MainTermConstant main_term_constant(std::int64_t h, std::uint64_t q,
                                    const TruncationConfig& cfg = {});

// Product over non-principal chi of L(sigma, conj chi)^{tau(chi) conj(chi(h))/phi(q)}
// (principal branch). At sigma = 1 it equals the L(1, chi)-product above.
struct CharacterProduct {
  std::complex<double> value;
  double relative_error = 0.0;  // propagated from the L evaluations
};
CharacterProduct character_product(double sigma, std::int64_t h, std::uint64_t q);

}  // namespace alladi
