#include "alladi/empirical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "alladi/characters.hpp"
#include "alladi/checkpoint.hpp"
#include "alladi/parallel.hpp"

namespace alladi {

unsigned default_thread_count() {
  if (const char* env = std::getenv("ALLADI_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ResidueCounts residue_counts(std::uint64_t x, std::uint64_t q, const CountOptions& opts) {
  if (x < 1) throw std::invalid_argument("residue_counts: x must be >= 1");
  if (q < 2 || q > kMaxModulus) throw std::invalid_argument("residue_counts: q out of range");
  if (opts.segment_size == 0) throw std::invalid_argument("residue_counts: zero segment size");
  if (x > kMaxSieveValue) throw std::overflow_error("residue_counts: x exceeds native width");

  const std::uint64_t seg = opts.segment_size;
  const std::uint64_t segments = (x - 1) / seg + 1;
  std::vector<std::vector<std::uint64_t>> partial(segments);

  std::unique_ptr<Checkpoint> checkpoint;
  if (opts.checkpoint) {
    checkpoint = std::make_unique<Checkpoint>(*opts.checkpoint, CheckpointHeader{x, q, seg});
    for (const auto& [index, counts] : checkpoint->completed()) {
      if (index >= segments) throw CheckpointMismatch("checkpoint: segment index beyond x");
      partial[index] = counts;
    }
  }

  std::vector<std::uint64_t> todo;
  for (std::uint64_t i = 0; i < segments; ++i) {
    if (partial[i].empty()) todo.push_back(i);
  }

  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    try {
      SegmentKernel kernel(q, seg, x);
      for (std::size_t k = next.fetch_add(1); k < todo.size(); k = next.fetch_add(1)) {
        const std::uint64_t index = todo[k];
        const std::uint64_t lo = index * seg + 1;
        const std::uint64_t hi = std::min(x, lo + seg - 1);
        std::vector<std::uint64_t> counts(q, 0);
        for (const std::uint32_t r : kernel.run(lo, hi)) ++counts[r];
        if (checkpoint) checkpoint->record(index, counts);
        partial[index] = std::move(counts);
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next = todo.size();
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  ResidueCounts out{x, q, std::vector<std::uint64_t>(q, 0)};
  for (const auto& counts : partial) {
    for (std::uint64_t a = 0; a < q; ++a) out.counts[a] += counts[a];
  }
  return out;
}

ExpSumResult exp_sum(const ResidueCounts& counts, std::uint64_t h) {
  const std::uint64_t q = counts.q;
  if (q < 1 || counts.counts.size() != q) throw std::invalid_argument("exp_sum: malformed counts");
  h %= q;

  // M_r = number of n with h A(n) = r (mod q).
  std::vector<std::uint64_t> by_phase(q, 0);
  for (std::uint64_t a = 0; a < q; ++a) by_phase[h * a % q] += counts.counts[a];

  double re = static_cast<double>(by_phase[0]);
  double im = 0.0;
  for (std::uint64_t r = 1; 2 * r <= q; ++r) {
    const std::uint64_t s = q - r;
    const auto z = unit_root(static_cast<std::int64_t>(r), q);
    if (r == s) {
      re -= static_cast<double>(by_phase[r]);
      continue;
    }
    const auto plus = static_cast<double>(by_phase[r] + by_phase[s]);
    const auto minus = static_cast<double>(static_cast<std::int64_t>(by_phase[r]) - static_cast<std::int64_t>(by_phase[s]));
    re += plus * z.real();
    im += minus * z.imag();
  }
  return {counts.x, h, q, {re, im}, counts};
}

ExpSumResult exp_sum(std::uint64_t x, std::uint64_t h, std::uint64_t q, const CountOptions& opts) {
  if (h >= q) throw std::invalid_argument("exp_sum: h must lie in [0, q)");
  return exp_sum(residue_counts(x, q, opts), h);
}

std::vector<ExpSumResult> mod9_table(std::uint64_t x, const CountOptions& opts) {
  const ResidueCounts counts = residue_counts(x, 9, opts);
  std::vector<ExpSumResult> out;
  for (const std::uint64_t h : {1, 2, 4, 5, 7, 8}) out.push_back(exp_sum(counts, h));
  return out;
}

ComparisonReport compare(std::uint64_t x, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg,
                         const CountOptions& counting, const PredictOptions& prediction) {
  if (q < 2) throw std::invalid_argument("compare: q must be >= 2");
  const auto qq = static_cast<std::int64_t>(q);
  const auto hr = static_cast<std::uint64_t>(((h % qq) + qq) % qq);

  ComparisonReport rep;
  const ResidueCounts counts = residue_counts(x, q, counting);
  rep.empirical = exp_sum(counts, hr);
  rep.log_x = std::log(static_cast<double>(x));

  if (hr == 0) {
    rep.predicted_value = static_cast<double>(x);
    rep.predicted_basis = "exact (h = 0)";
  } else {
    const std::uint64_t d = gcd(hr, q);
    const std::uint64_t q_red = q / d;
    const auto h_red = static_cast<std::int64_t>(hr / d);
    if (q_red == 2) {
      rep.predicted_value = 0.0;
      rep.predicted_basis = "mod 2: O(x exp(-c sqrt(log x log log x)))";
    } else {
      rep.predicted = predict_main(static_cast<double>(x), h_red, q_red, cfg, prediction);
      rep.predicted_value = rep.predicted->quadrature_term.value_or(rep.predicted->main_term);
      rep.predicted_basis = rep.predicted->quadrature_term ? to_string(prediction.method) : "closed_form";
    }
  }

  rep.abs_gap = std::abs(rep.empirical.value - rep.predicted_value);
  rep.rel_gap = rep.abs_gap / std::max(std::abs(rep.empirical.value), 1.0);

  std::optional<ClassCoefficients> coeffs;
  if (q > 2 && mobius(q) != 0) coeffs = class_coefficients(q, cfg);
  const double xd = static_cast<double>(x);
  for (std::uint64_t a = 0; a < q; ++a) {
    ClassRow row;
    row.a = a;
    row.count = counts.counts[a];
    row.first_order = xd / static_cast<double>(q);
    if (coeffs) {
      row.coefficient = coeffs->c[a];
      row.second_order = row.first_order + coeffs->c[a] * xd / std::pow(rep.log_x, coeffs->log_power);
    }
    rep.classes.push_back(row);
  }
  return rep;
}

}  // namespace alladi
