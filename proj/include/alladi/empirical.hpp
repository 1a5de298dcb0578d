#pragma once

// Exact residue-class counts N_a(x) = #{n <= x : A(n) = a mod q} and the
// exponential sums assembled from them.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "alladi/asymptotics.hpp"
#include "alladi/sieve.hpp"

namespace alladi {

struct ResidueCounts {
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  std::vector<std::uint64_t> counts;  // sums to x; n = 1 sits in class 0
};

struct CountOptions {
  std::uint64_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
  std::optional<std::filesystem::path> checkpoint;
};

ResidueCounts residue_counts(std::uint64_t x, std::uint64_t q, const CountOptions& opts = {});

struct ExpSumResult {
  std::uint64_t x = 0;
  std::uint64_t h = 0;
  std::uint64_t q = 0;
  std::complex<double> value;
  ResidueCounts derived_from;
};

// sum_a N_a e^{2 pi i h a/q}. Classes with conjugate phases are combined as
// exact integers first, so S(q - h) is bit-for-bit conj(S(h)).
ExpSumResult exp_sum(const ResidueCounts& counts, std::uint64_t h);
ExpSumResult exp_sum(std::uint64_t x, std::uint64_t h, std::uint64_t q, const CountOptions& opts = {});

// h = 1, 2, 4, 5, 7, 8 for q = 9, from one counting pass.
std::vector<ExpSumResult> mod9_table(std::uint64_t x, const CountOptions& opts = {});

struct ClassRow {
  std::uint64_t a = 0;
  std::uint64_t count = 0;
  double first_order = 0.0;                 // x / q
  std::optional<double> second_order;       // x/q + c_a x/(log x)^{1 - mu/phi}
  std::optional<double> coefficient;        // c_a
};

struct ComparisonReport {
  ExpSumResult empirical;
  std::optional<PredictionReport> predicted;
  std::complex<double> predicted_value;  // quadrature term when computed, else the main term
  std::string predicted_basis;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double log_x = 0.0;
  std::vector<ClassRow> classes;
};

ComparisonReport compare(std::uint64_t x, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg = {},
                         const CountOptions& counting = {}, const PredictOptions& prediction = {});

}  // namespace alladi
