#include "alladi/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace alladi {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  if (limit > 0xFFFFFFFFull) throw std::overflow_error("primes_up_to: limit exceeds 32 bits");
  out.push_back(2);
  // Odd-only table: index i stands for 2i + 1.
  const std::uint64_t half = (limit - 1) / 2 + 1;
  std::vector<std::uint8_t> composite(half, 0);
  for (std::uint64_t i = 1; i < half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = p * p / 2; j < half; j += p) composite[j] = 1;
  }
  return out;
}

std::span<const std::uint32_t> cached_primes(std::uint64_t limit) {
  static std::mutex mu;
  // Older tables are kept alive so spans handed out earlier never dangle.
  static std::vector<std::unique_ptr<const std::vector<std::uint32_t>>> tables;
  static std::uint64_t covered = 0;

  std::lock_guard lock(mu);
  if (tables.empty() || limit > covered) {
    const std::uint64_t target = std::max<std::uint64_t>(limit, std::min<std::uint64_t>(2 * covered, 0xFFFFFFFFull));
    tables.push_back(std::make_unique<const std::vector<std::uint32_t>>(primes_up_to(target)));
    covered = target;
  }
  const auto& all = *tables.back();
  const auto end = std::upper_bound(all.begin(), all.end(), limit);
  return {all.data(), static_cast<std::size_t>(end - all.begin())};
}

FactorSieve::FactorSieve(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_span)
    : lo_(lo), hi_(hi) {
  if (lo < 1) throw std::invalid_argument("build_sieve: lo must be >= 1");
  if (lo > hi) throw std::invalid_argument("build_sieve: lo > hi");
  if (hi > kMaxSieveValue) throw std::overflow_error("build_sieve: hi exceeds native width");
  if (hi - lo >= max_span) throw std::length_error("build_sieve: range exceeds segment size");

  primes_ = primes_up_to(isqrt(hi));
  spf_.assign(hi - lo + 1, 0);
  for (const std::uint32_t p : primes_) {
    const std::uint64_t pp = std::uint64_t{p} * p;
    std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
    for (std::uint64_t m = start; m <= hi; m += p) {
      auto& slot = spf_[m - lo];
      if (slot == 0) slot = p;
    }
  }
}

std::uint64_t FactorSieve::spf(std::uint64_t n) const {
  if (!contains(n)) throw std::out_of_range("spf: n outside sieve range");
  if (n == 1) return 0;
  const std::uint32_t s = spf_[n - lo_];
  return s == 0 ? n : s;
}

Factorization FactorSieve::factorize(std::uint64_t n) const {
  if (!contains(n)) throw std::out_of_range("factorize: n outside sieve range");
  Factorization f;
  f.n = n;
  if (n == 1) return f;

  auto strip = [&f](std::uint64_t& m, std::uint64_t p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  };

  std::uint64_t m = n;
  std::uint64_t p = spf(n);
  strip(m, p);

  // The cofactor usually lies below the segment; continue by trial division
  // with the base primes, which reach sqrt(hi) >= sqrt(m).
  auto it = std::upper_bound(primes_.begin(), primes_.end(), p);
  while (m > 1) {
    if (contains(m)) {
      strip(m, spf(m));
      continue;
    }
    while (it != primes_.end() && std::uint64_t{*it} * *it <= m && m % *it != 0) ++it;
    if (it == primes_.end() || std::uint64_t{*it} * *it > m) {
      f.factors.push_back({m, 1});
      break;
    }
    strip(m, *it);
    ++it;
  }
  return f;
}

FactorSieve build_sieve(std::uint64_t lo, std::uint64_t hi) { return FactorSieve(lo, hi); }

Factorization factorize(std::uint64_t n, const FactorSieve& sieve) { return sieve.factorize(n); }

AValue alladi_A(const Factorization& f) {
  std::uint64_t a = 0;
  for (const auto& [p, e] : f.factors) a += e * p;
  return {f.n, a};
}

std::uint64_t a_mod(std::uint64_t n, std::uint64_t q, const FactorSieve& sieve) {
  if (q == 0) throw std::invalid_argument("a_mod: q must be >= 1");
  std::uint64_t r = 0;
  for (const auto& [p, e] : sieve.factorize(n).factors) {
    const std::uint64_t term = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(e % q) * (p % q)) % q);
    r = (r + term) % q;
  }
  return r;
}

SegmentKernel::SegmentKernel(std::uint64_t q, std::uint64_t capacity, std::uint64_t max_hi)
    : base_(cached_primes(isqrt(max_hi))), q_(q), capacity_(capacity), max_hi_(max_hi),
      acc_(capacity), divided_(capacity) {
  if (q == 0 || q > kMaxModulus) throw std::invalid_argument("SegmentKernel: q out of range");
  if (capacity == 0) throw std::invalid_argument("SegmentKernel: zero capacity");
  if (max_hi > kMaxSieveValue) throw std::overflow_error("SegmentKernel: max_hi exceeds native width");
}

std::span<const std::uint32_t> SegmentKernel::run(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("SegmentKernel::run: bad range");
  if (hi > max_hi_) throw std::out_of_range("SegmentKernel::run: hi above configured maximum");
  const std::uint64_t len = hi - lo + 1;
  if (len > capacity_) throw std::length_error("SegmentKernel::run: range exceeds capacity");

  const auto q = static_cast<std::uint32_t>(q_);
  std::uint32_t* acc = acc_.data();
  std::uint64_t* div = divided_.data();
  std::fill_n(acc, len, 0u);
  std::fill_n(div, len, std::uint64_t{1});

  // Every multiple of p^k in range picks up one more p.
  for (const std::uint32_t p : base_) {
    if (std::uint64_t{p} * p > hi) break;
    const auto pm = static_cast<std::uint32_t>(p % q_);
    for (std::uint64_t pk = p;;) {
      const std::uint64_t first = (lo + pk - 1) / pk * pk;
      for (std::uint64_t m = first; m <= hi; m += pk) {
        const std::uint64_t i = m - lo;
        std::uint32_t a = acc[i] + pm;
        acc[i] = a >= q ? a - q : a;
        div[i] *= p;
      }
      if (pk > hi / p) break;
      pk *= p;
    }
  }

  // What is left over is 1 or a single prime above sqrt(hi).
  for (std::uint64_t i = 0; i < len; ++i) {
    const std::uint64_t n = lo + i;
    if (div[i] != n) {
      std::uint32_t a = acc[i] + static_cast<std::uint32_t>((n / div[i]) % q_);
      acc[i] = a >= q ? a - q : a;
    }
  }
  return {acc, static_cast<std::size_t>(len)};
}

namespace detail {
void check_stream_args(std::uint64_t x, std::uint64_t q, std::uint64_t segment_size) {
  if (x < 1) throw std::invalid_argument("stream_a_mod: x must be >= 1");
  if (q == 0 || q > kMaxModulus) throw std::invalid_argument("stream_a_mod: q out of range");
  if (segment_size == 0) throw std::invalid_argument("stream_a_mod: zero segment size");
  if (x > kMaxSieveValue) throw std::overflow_error("stream_a_mod: x exceeds native width");
}
}  // namespace detail

}  // namespace alladi
