#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "alladi/checkpoint.hpp"
#include "alladi/empirical.hpp"
#include "oracles.hpp"

using namespace alladi;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("alladi_test_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("hand-enumerated counts") {
  // A(1..10) mod 3 = 0,2,0,1,2,2,1,0,0,1
  const auto c = residue_counts(10, 3);
  CHECK(c.counts == std::vector<std::uint64_t>{4, 3, 3});
  const auto s = exp_sum(10, 1, 3);
  CHECK(std::abs(s.value - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK(s.derived_from.counts == c.counts);

  for (const std::uint64_t q : {2ull, 5ull, 1000ull}) {
    const auto one = residue_counts(1, q);
    CHECK(one.counts[0] == 1);
    CHECK(std::accumulate(one.counts.begin(), one.counts.end(), std::uint64_t{0}) == 1);
  }
}

TEST_CASE("counts match trial division for small x") {
  for (const std::uint64_t q : {2ull, 3ull, 4ull, 9ull, 11ull}) {
    std::vector<std::uint64_t> ref(q, 0);
    for (std::uint64_t n = 1; n <= 20000; ++n) ++ref[oracle::A(n) % q];
    CHECK(residue_counts(20000, q).counts == ref);
  }
}

TEST_CASE("h = 0 gives x exactly") {
  for (const std::uint64_t x : {1ull, 100ull, 123457ull}) {
    CHECK(exp_sum(x, 0, 5).value == std::complex<double>(static_cast<double>(x), 0.0));
  }
  CHECK_THROWS_AS(exp_sum(100, 5, 5), std::invalid_argument);
}

TEST_CASE("exponential sums match direct accumulation") {
  for (std::uint64_t q = 2; q <= 12; ++q) {
    const auto counts = residue_counts(3000, q);
    for (std::uint64_t h = 0; h < q; ++h) {
      CHECK(std::abs(exp_sum(counts, h).value - oracle::exp_sum(3000, h, q)) < 1e-9);
    }
  }
}

TEST_CASE("published mod-3 sum at x = 1e7") {
  const auto s = exp_sum(10'000'000, 1, 3);
  CHECK(std::abs(s.value.real() - -98423.00) <= 0.02);
  CHECK(std::abs(s.value.imag() - 55650.79) <= 0.02);
}

TEST_CASE("mod-9 table pairs are exact conjugates") {
  const auto t = mod9_table(200000);
  REQUIRE(t.size() == 6);
  CHECK(t[0].h == 1);
  CHECK(t[5].h == 8);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t[i].h + t[5 - i].h == 9);
    CHECK(t[5 - i].value == std::conj(t[i].value));
  }
}

TEST_CASE("Parseval, inversion and conjugation") {
  for (std::uint64_t q = 2; q <= 12; ++q) {
    const auto counts = residue_counts(100000, q);
    std::vector<std::complex<double>> s;
    double energy = 0.0;
    for (std::uint64_t h = 0; h < q; ++h) {
      s.push_back(exp_sum(counts, h).value);
      energy += std::norm(s.back());
    }
    double sq = 0.0;
    for (const auto n : counts.counts) sq += static_cast<double>(n) * static_cast<double>(n);
    CHECK(energy == doctest::Approx(q * sq).epsilon(1e-12));
    for (std::uint64_t a = 0; a < q; ++a) {
      std::complex<double> back{};
      for (std::uint64_t h = 0; h < q; ++h) back += s[h] * oracle::e(-static_cast<double>(h * a) / q);
      back /= static_cast<double>(q);
      CHECK(std::abs(back - static_cast<double>(counts.counts[a])) <= 1e-6 * std::max(1.0, double(counts.counts[a])));
    }
    for (std::uint64_t h = 1; h < q; ++h) CHECK(s[q - h] == std::conj(s[h]));
  }
}

TEST_CASE("class deviations at x = 1e6 follow the second-order coefficients") {
  const std::uint64_t x = 1'000'000;
  const auto c = residue_counts(x, 3);
  const double L = std::log(static_cast<double>(x));
  for (std::size_t a = 0; a < 3; ++a) {
    const double dev = static_cast<double>(c.counts[a]) - x / 3.0;
    // Lower-order terms are still sizeable at 1e6, so allow a factor of two.
    const double scale = x / std::pow(L, 1.5);
    CHECK(std::abs(dev) <= 2.0 * 0.34 * scale + 0.05 * scale);
  }
}

TEST_CASE("counts are independent of threads and segment size") {
  CountOptions one;
  one.threads = 1;
  CountOptions many;
  many.threads = 4;
  many.segment_size = 1 << 14;
  CountOptions tiny;
  tiny.segment_size = 1000;
  tiny.threads = 3;
  const auto a = residue_counts(2'000'000, 7, one);
  CHECK(residue_counts(2'000'000, 7, many).counts == a.counts);
  CHECK(residue_counts(2'000'000, 7, tiny).counts == a.counts);
  CHECK(std::accumulate(a.counts.begin(), a.counts.end(), std::uint64_t{0}) == 2'000'000);
}

TEST_CASE("checkpoint resume") {
  const auto path = temp_file("resume.ckpt");
  CountOptions opts;
  opts.segment_size = 10000;
  opts.checkpoint = path;
  const auto full = residue_counts(95000, 5, opts);

  // Keep the header and the first four segment lines, as if the run was interrupted.
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  CHECK(lines.size() == 4 + 10);
  {
    std::ofstream out(path, std::ios::trunc);
    for (std::size_t i = 0; i < 8; ++i) out << lines[i] << '\n';
  }
  const auto resumed = residue_counts(95000, 5, opts);
  CHECK(resumed.counts == full.counts);
  CHECK(resumed.counts == residue_counts(95000, 5).counts);
  {
    const Checkpoint ck(path, {95000, 5, 10000});
    CHECK(ck.completed().size() == 10);
  }
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint mismatches are rejected") {
  const auto path = temp_file("mismatch.ckpt");
  CountOptions opts;
  opts.segment_size = 10000;
  opts.checkpoint = path;
  (void)residue_counts(50000, 5, opts);
  CHECK_THROWS_AS(residue_counts(60000, 5, opts), CheckpointMismatch);
  CHECK_THROWS_AS(residue_counts(50000, 7, opts), CheckpointMismatch);
  opts.segment_size = 5000;
  CHECK_THROWS_AS(residue_counts(50000, 5, opts), CheckpointMismatch);

  {
    std::ofstream out(path, std::ios::app);
    out << "2 1 2 3\n";
  }
  opts.segment_size = 10000;
  CHECK_THROWS_AS(residue_counts(50000, 5, opts), CheckpointMismatch);
  {
    std::ofstream out(path, std::ios::trunc);
    out << "not a checkpoint\n";
  }
  CHECK_THROWS_AS(residue_counts(50000, 5, opts), CheckpointMismatch);
  std::filesystem::remove(path);
}

TEST_CASE("comparison reports") {
  PredictOptions zeta;
  zeta.method = PredictionMethod::zeta_integral;
  const auto r = compare(10'000'000, 1, 3, {}, {}, zeta);
  CHECK(std::abs(r.empirical.value - std::complex<double>(-98423.00, 55650.79)) < 0.02);
  CHECK(r.abs_gap == doctest::Approx(std::abs(r.empirical.value - r.predicted_value)));
  CHECK(r.abs_gap == doctest::Approx(16240).epsilon(0.01));
  CHECK(r.rel_gap == doctest::Approx(0.14).epsilon(0.05));
  CHECK(r.log_x == doctest::Approx(std::log(1e7)));
  REQUIRE(r.classes.size() == 3);
  CHECK(r.classes[0].coefficient.has_value());
  CHECK(r.classes[0].count + r.classes[1].count + r.classes[2].count == 10'000'000);

  const auto z = compare(200'000, 0, 3);
  CHECK(z.abs_gap == 0.0);
  CHECK(z.predicted_basis == "exact (h = 0)");

  const auto n = compare(1'000'000, 1, 9);
  CHECK(n.predicted_value == std::complex<double>(0.0, 0.0));
  CHECK(n.abs_gap == doctest::Approx(std::abs(n.empirical.value)));
  CHECK_FALSE(n.classes[0].coefficient.has_value());

  const auto m2 = compare(100'000, 3, 6);
  CHECK(m2.predicted_value == std::complex<double>(0.0, 0.0));
}
