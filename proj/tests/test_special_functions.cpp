#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "alladi/characters.hpp"
#include "alladi/special_functions.hpp"
#include "oracles.hpp"

using namespace alladi;
using std::numbers::pi;

TEST_CASE("zeta on the real axis") {
  CHECK(zeta_real(2.0) == doctest::Approx(pi * pi / 6).epsilon(1e-15));
  CHECK(zeta_real(4.0) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-14));
  CHECK(std::abs(zeta_real(0.5) - static_cast<double>(oracle::zeta_em(0.5L))) < 1e-13);
  for (const long double s : {5.0L, 8.0L, 16.0L, 30.0L, 50.0L}) {
    CHECK(zeta_real(static_cast<double>(s)) ==
          doctest::Approx(static_cast<double>(oracle::zeta_em(s))).epsilon(1e-15));
  }
  CHECK(zeta_real(0.5) == doctest::Approx(-1.4603545).epsilon(1e-7));
  for (const double d : {1e-4, -1e-4}) {
    CHECK(std::abs(zeta_real(1.0 + d) - (1.0 / d + 0.5772157)) < 1e-3);
  }
  CHECK(zeta_real(80.0) == 1.0);
}

TEST_CASE("zeta agrees with Euler-Maclaurin at 20 points in (0.1, 4)") {
  for (int i = 0; i < 20; ++i) {
    const double s = 0.1 + 3.9 * (i + 0.5) / 20.0;
    if (std::abs(s - 1.0) < 1e-9) continue;
    const double ref = static_cast<double>(oracle::zeta_em(s, 400));
    CHECK(std::abs(zeta_real(s) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("zeta domain errors") {
  CHECK_THROWS_AS(zeta_real(1.0), std::domain_error);
  CHECK_THROWS_AS(zeta_real(0.0), std::domain_error);
  CHECK_THROWS_AS(zeta_real(-2.0), std::domain_error);
}

TEST_CASE("gamma") {
  CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_real(1.5) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-14));
  CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(gamma_real(1.25) == doctest::Approx(0.9064024770554771).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_real(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_real(-1.5), std::domain_error);
}

TEST_CASE("L(1, chi) examples") {
  const CharacterGroup g3(3);
  const auto l3 = l_at_one(g3.characters()[1]);
  CHECK(std::abs(l3 - pi / std::sqrt(27.0)) < 1e-13);
  CHECK(std::abs(l3 - oracle::l_one_digamma(g3.characters()[1])) < 1e-13);

  const CharacterGroup g4(4);
  const auto l4 = dirichlet_L_real(1.0, g4.characters()[1]);
  CHECK(std::abs(l4 - pi / 4) < 1e-13);
  // Leibniz partial sums, averaged over two consecutive cutoffs.
  double leibniz = 0.0, previous = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    previous = leibniz;
    leibniz += (k % 2 ? -1.0 : 1.0) / (2 * k + 1);
  }
  CHECK(std::abs(l4.real() - 0.5 * (leibniz + previous)) < 1e-9);

  for (std::uint64_t q = 3; q <= 30; ++q) {
    const CharacterGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      CHECK(std::abs(l_at_one(chi) - oracle::l_one_digamma(chi)) < 1e-12);
    }
  }
}

TEST_CASE("L(2, chi) against the direct series") {
  for (std::uint64_t q = 3; q <= 12; ++q) {
    const CharacterGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      const auto direct = oracle::l_direct(2.0, chi, 1'000'000);
      CHECK(std::abs(dirichlet_L_real(2.0, chi) - direct) < (q == 5 ? 1e-6 : 2e-6));
    }
  }
}

TEST_CASE("L values inside the critical strip") {
  // Averaging two consecutive odd cutoffs of the alternating series mod 4
  // leaves an O(N^{-sigma-1}) error.
  const CharacterGroup g4(4);
  const auto& chi4 = g4.characters()[1];
  const auto a = oracle::l_direct(0.75, chi4, 2'000'001);
  const auto b = oracle::l_direct(0.75, chi4, 2'000'003);
  CHECK(std::abs(dirichlet_L_real(0.75, chi4) - 0.5 * (a + b)) < 1e-8);
}

TEST_CASE("L conjugation symmetry") {
  for (std::uint64_t q = 3; q <= 12; ++q) {
    const CharacterGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      for (const double s : {0.6, 0.75, 1.0, 1.5, 2.0, 4.0}) {
        CHECK(std::abs(dirichlet_L_real(s, chi.conjugate()) - std::conj(dirichlet_L_real(s, chi))) < 1e-13);
      }
    }
  }
}

TEST_CASE("L argument errors") {
  const CharacterGroup g5(5);
  CHECK_THROWS_AS(dirichlet_L_real(2.0, g5.principal()), std::invalid_argument);
  CHECK_THROWS_AS(l_at_one(g5.principal()), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_L_real(0.5, g5.characters()[1]), std::domain_error);
  CHECK_THROWS_AS(dirichlet_L_real(4.5, g5.characters()[1]), std::domain_error);
}

TEST_CASE("complex_pow") {
  CHECK(complex_pow({1.0, 0.0}, {0.3, -2.0}) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(complex_pow({-1.0, 0.0}, {0.5, 0.0}) - std::complex<double>(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(complex_pow({-1.0, -0.0}, {0.5, 0.0}) - std::complex<double>(0.0, 1.0)) < 1e-15);
  const auto v = complex_pow({2.0, 0.0}, {1.0, 1.0});
  CHECK(v.real() == doctest::Approx(1.5384778).epsilon(1e-7));
  CHECK(v.imag() == doctest::Approx(1.2779226).epsilon(1e-7));
  CHECK(std::abs(v - 2.0 * std::polar(1.0, std::log(2.0))) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> z{u(rng), u(rng)};
    CHECK(std::abs(complex_pow(z, {1.0, 0.0}) - z) < 1e-13 * std::abs(z));
    CHECK(complex_pow(z, {0.0, 0.0}) == std::complex<double>(1.0, 0.0));
  }
  CHECK_THROWS_AS(complex_pow({0.0, 0.0}, {0.5, 0.0}), std::domain_error);
}

TEST_CASE("warning handler can be replaced and restored") {
  std::string seen;
  auto previous = set_warning_handler([&](std::string_view m) { seen = m; });
  warn("branch check");
  CHECK(seen == "branch check");
  set_warning_handler(previous);
}
