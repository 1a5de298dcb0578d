#pragma once

// Smallest-prime-factor sieving and the additive function A(n) = sum a_i p_i.

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace alladi {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 22;

// Largest n the sieve accepts. Keeps p^k walks and segment arithmetic in u64.
inline constexpr std::uint64_t kMaxSieveValue = std::uint64_t{1} << 62;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing; empty iff n == 1
};

struct AValue {
  std::uint64_t n;
  std::uint64_t a;  // A(n) <= n, so it always fits
};

// All primes p <= limit, increasing.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

// Shared, lazily extended prime list. The returned span covers exactly the
// primes <= limit and stays valid for the lifetime of the process.
std::span<const std::uint32_t> cached_primes(std::uint64_t limit);

// Immutable smallest-prime-factor table for [lo, hi].
class FactorSieve {
 public:
  FactorSieve(std::uint64_t lo, std::uint64_t hi,
              std::uint64_t max_span = kDefaultSegmentSize);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

  bool contains(std::uint64_t n) const { return n >= lo_ && n <= hi_; }

  // Smallest prime factor of n (n itself when prime). n = 1 has none.
  std::uint64_t spf(std::uint64_t n) const;

  Factorization factorize(std::uint64_t n) const;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint32_t> primes_;
  // 0 marks "no factor <= sqrt(hi)", i.e. n prime (or n == 1).
  std::vector<std::uint32_t> spf_;
};

FactorSieve build_sieve(std::uint64_t lo, std::uint64_t hi);

Factorization factorize(std::uint64_t n, const FactorSieve& sieve);

AValue alladi_A(const Factorization& f);

// A(n) mod q, reduced per prime power so nothing overflows.
std::uint64_t a_mod(std::uint64_t n, std::uint64_t q, const FactorSieve& sieve);

// Largest modulus accepted by the streaming kernel (residues are kept in u32).
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

std::uint64_t isqrt(std::uint64_t n);

// Fills A(n) mod q for every n of a segment. One instance per worker; the base
// primes (all p <= sqrt(max_hi)) are shared read-only.
class SegmentKernel {
 public:
  SegmentKernel(std::uint64_t q, std::uint64_t capacity, std::uint64_t max_hi);

  // residues()[i] = A(lo + i) mod q for lo <= lo + i <= hi.
  std::span<const std::uint32_t> run(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t modulus() const { return q_; }

 private:
  std::span<const std::uint32_t> base_;
  std::uint64_t q_;
  std::uint64_t capacity_;
  std::uint64_t max_hi_;
  std::vector<std::uint32_t> acc_;
  std::vector<std::uint64_t> divided_;
};

struct StreamOptions {
  std::uint64_t segment_size = kDefaultSegmentSize;
};

namespace detail {
void check_stream_args(std::uint64_t x, std::uint64_t q, std::uint64_t segment_size);
}

// Calls visitor(n, A(n) mod q) for n = 1..x in increasing order. A visitor
// returning bool can stop the stream early by returning false; exceptions
// thrown by the visitor propagate. Memory is bounded by the segment size.
template <class Visitor>
void stream_a_mod(std::uint64_t x, std::uint64_t q, Visitor&& visitor,
                  StreamOptions opts = {}) {
  detail::check_stream_args(x, q, opts.segment_size);
  SegmentKernel kernel(q, opts.segment_size, x);
  for (std::uint64_t lo = 1; lo <= x;) {
    const std::uint64_t hi = (x - lo < opts.segment_size) ? x : lo + opts.segment_size - 1;
    const auto res = kernel.run(lo, hi);
    for (std::uint64_t i = 0; i < res.size(); ++i) {
      if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, std::uint64_t, std::uint64_t>,
                                   bool>) {
        if (!visitor(lo + i, std::uint64_t{res[i]})) return;
      } else {
        visitor(lo + i, std::uint64_t{res[i]});
      }
    }
    if (hi == x) break;
    lo = hi + 1;
  }
}

}  // namespace alladi
