#pragma once

// Slow, independent reference implementations used only by the tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "alladi/characters.hpp"

namespace oracle {

inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t A(std::uint64_t n) {
  std::uint64_t a = 0;
  for (const auto& [p, e] : trial_factor(n)) a += p * e;
  return a;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::complex<double> e(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

// sum_{n <= x} e(h A(n) / q), accumulated directly over n.
inline std::complex<double> exp_sum(std::uint64_t x, std::uint64_t h, std::uint64_t q) {
  std::complex<double> s{};
  for (std::uint64_t n = 1; n <= x; ++n) s += e(static_cast<double>(h * (A(n) % q) % q) / static_cast<double>(q));
  return s;
}

inline std::complex<double> gauss_sum(const alladi::DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  std::complex<double> s{};
  for (std::uint64_t l = 1; l <= q; ++l) s += chi(static_cast<std::int64_t>(l)) * e(static_cast<double>(l) / q);
  return s;
}

inline std::complex<double> ramanujan_direct(std::uint64_t q, std::int64_t h) {
  std::complex<double> s{};
  for (std::uint64_t l = 1; l <= q; ++l) {
    if (std::gcd(l, q) == 1) s += e(static_cast<double>(l) * static_cast<double>(h) / static_cast<double>(q));
  }
  return s;
}

// chi is primitive iff it is not trivial on {n = 1 mod d, (n, q) = 1} for any proper divisor d.
inline bool is_primitive(const alladi::DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  for (std::uint64_t d = 1; d < q; ++d) {
    if (q % d) continue;
    bool trivial = true;
    for (std::uint64_t n = 1; n < q && trivial; ++n) {
      if (std::gcd(n, q) != 1 || (n - 1) % d != 0) continue;
      if (std::abs(chi(static_cast<std::int64_t>(n)) - 1.0) > 1e-9) trivial = false;
    }
    if (trivial) return false;
  }
  return true;
}

// zeta(s) for real s > 0, s != 1, by Euler-Maclaurin at cutoff N, long double.
inline long double zeta_em(long double s, int N = 200) {
  static const long double B[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6};
  long double sum = 0.0L;
  for (int n = 1; n < N; ++n) sum += std::pow(static_cast<long double>(n), -s);
  const long double n = N;
  sum += std::pow(n, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(n, -s);
  long double rising = s;  // s (s+1) ... (s+2k-2)
  long double fact = 2.0L;  // (2k)!
  for (int k = 1; k <= 7; ++k) {
    sum += B[k - 1] / fact * rising * std::pow(n, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return sum;
}

// digamma via recurrence to x >= 20 plus the asymptotic series.
inline long double digamma(long double x) {
  long double r = 0.0L;
  while (x < 20.0L) {
    r -= 1.0L / x;
    x += 1.0L;
  }
  const long double x2 = 1.0L / (x * x);
  return r + std::log(x) - 0.5L / x -
         x2 * (1.0L / 12 - x2 * (1.0L / 120 - x2 * (1.0L / 252 - x2 * (1.0L / 240 - x2 / 132))));
}

// L(1, chi) = -(1/q) sum_a chi(a) digamma(a/q).
inline std::complex<double> l_one_digamma(const alladi::DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  std::complex<long double> s{};
  for (std::uint64_t a = 1; a < q; ++a) {
    const auto c = chi(static_cast<std::int64_t>(a));
    s += std::complex<long double>(c.real(), c.imag()) * digamma(static_cast<long double>(a) / q);
  }
  s /= -static_cast<long double>(q);
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

// sum_{n <= N} chi(n) n^{-s}.
inline std::complex<double> l_direct(double s, const alladi::DirichletCharacter& chi, std::uint64_t N) {
  const std::uint64_t q = chi.modulus();
  std::vector<std::complex<double>> period(q);
  for (std::uint64_t r = 0; r < q; ++r) period[r] = chi(static_cast<std::int64_t>(r));
  std::complex<long double> sum{};
  for (std::uint64_t n = N; n >= 1; --n) {  // small terms first
    const auto c = period[n % q];
    const long double w = std::pow(static_cast<long double>(n), -static_cast<long double>(s));
    sum += std::complex<long double>(c.real() * w, c.imag() * w);
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace oracle
