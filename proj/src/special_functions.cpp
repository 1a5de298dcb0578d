#include "alladi/special_functions.hpp"

#include <array>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace alladi {

namespace {

std::mutex& warn_mutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

// B_{2j} / (2j)! for j = 1..9.
constexpr std::array<double, 9> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
};
constexpr int kEulerMaclaurinTerms = 8;

// (y^{1-s} - 1) / (s - 1), continuous through s = 1 where it is -log y.
double pole_term(double s, double log_y) {
  const double t = 1.0 - s;
  if (std::abs(t) < 1e-300) return -log_y;
  return -std::expm1(t * log_y) / t;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warn_mutex());
  auto old = std::move(warning_handler());
  warning_handler() = std::move(handler);
  return old;
}

void warn(std::string_view message) {
  std::lock_guard lock(warn_mutex());
  if (warning_handler()) warning_handler()(message);
}

double zeta_real(double sigma, const EvaluationOptions& opts) {
  if (!(sigma > 0.0)) throw std::domain_error("zeta_real: sigma must be > 0");
  if (sigma == 1.0) throw std::domain_error("zeta_real: pole at sigma = 1");
  if (sigma >= 60.0) return 1.0 + std::exp2(-sigma);

  // 1 - 2^{1-s}, accurate next to the pole.
  const double denom = -std::expm1((1.0 - sigma) * std::numbers::ln2);

  // Borwein's acceleration converges like (3 + sqrt 8)^{-n}. The 1/Gamma(s)
  // refinement of that bound is not safe for large s, so it is not used.
  const double rate = 3.0 + std::sqrt(8.0);
  const double goal = std::max(opts.target_abs_error * std::abs(denom) / 3.0, 1e-300);
  int n = static_cast<int>(std::ceil(std::log(1.0 / goal) / std::log(rate)));
  n = std::clamp(n, 24, 60);

  // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built incrementally.
  std::array<long double, 61> d{};
  long double term = 1.0L / n;  // i = 0 term of the inner sum, times 1/n
  long double partial = term;
  d[0] = n * partial;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0L * (n + i - 1) * (n - i + 1) / ((2.0L * i - 1) * (2.0L * i));
    partial += term;
    d[i] = n * partial;
  }

  long double sum = 0.0L;
  for (int k = 0; k < n; ++k) {
    const long double t = (d[k] - d[n]) * std::pow(static_cast<long double>(k + 1), -sigma);
    sum += (k % 2 == 0) ? t : -t;
  }
  const long double eta = -sum / d[n];
  return static_cast<double>(eta / denom);
}

double gamma_real(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_real: x must be > 0");
  return std::tgamma(x);
}

std::complex<double> dirichlet_L_real(double sigma, const DirichletCharacter& chi,
                                      const EvaluationOptions& opts) {
  if (chi.is_principal()) throw std::invalid_argument("dirichlet_L_real: principal character");
  if (!(sigma > 0.5 && sigma <= 4.0)) throw std::domain_error("dirichlet_L_real: sigma outside (0.5, 4]");

  const std::uint64_t q = chi.modulus();
  const double qd = static_cast<double>(q);

  // Remainder after 8 correction terms is bounded by the first omitted one,
  // |B_18/18!| (sigma)_{17} y^{-sigma-17}, per residue class; pick N for it.
  double rising = 1.0;  // (sigma)_{2M+1}
  for (int j = 0; j < 2 * kEulerMaclaurinTerms + 1; ++j) rising *= sigma + j;
  const double coeff = std::abs(kBernoulliOverFactorial[kEulerMaclaurinTerms]) * rising;
  std::uint64_t N = 4;
  while (qd * coeff * std::pow(static_cast<double>(N), -sigma - 2 * kEulerMaclaurinTerms - 1) >
             opts.target_abs_error &&
         N < static_cast<std::uint64_t>(opts.max_terms)) {
    N *= 2;
  }

  std::complex<double> total{};
  for (std::uint64_t a = 1; a <= q; ++a) {
    const auto t = chi.turn(static_cast<std::int64_t>(a));
    if (!t) continue;
    const double shift = static_cast<double>(a) / qd;

    double head = 0.0;
    for (std::uint64_t n = 0; n < N; ++n) head += std::pow(static_cast<double>(n) + shift, -sigma);

    const double y = static_cast<double>(N) + shift;
    const double log_y = std::log(y);
    double tail = pole_term(sigma, log_y) + 0.5 * std::exp(-sigma * log_y);
    // sum_j B_2j/(2j)! (sigma)_{2j-1} y^{-sigma-2j+1}
    double poch = sigma;
    double ypow = std::exp(-(sigma + 1.0) * log_y);
    const double inv_y2 = 1.0 / (y * y);
    for (int j = 1; j <= kEulerMaclaurinTerms; ++j) {
      tail += kBernoulliOverFactorial[j - 1] * poch * ypow;
      poch *= (sigma + 2 * j - 1) * (sigma + 2 * j);
      ypow *= inv_y2;
    }
    total += to_complex(*t) * (head + tail);
  }
  const std::complex<double> value = total * std::pow(qd, -sigma);

  if (value.real() < 0.0 && std::abs(value.imag()) < 1e-3 * std::abs(value)) {
    std::ostringstream msg;
    msg << "L(" << sigma << ", chi mod " << q << ") = " << value
        << " lies near the negative real axis; principal-branch powers may jump";
    warn(msg.str());
  }
  return value;
}

std::complex<double> l_at_one(const DirichletCharacter& chi, const EvaluationOptions& opts) {
  return dirichlet_L_real(1.0, chi, opts);
}

std::complex<double> complex_pow(std::complex<double> z, std::complex<double> w) {
  if (z == std::complex<double>{}) throw std::domain_error("complex_pow: zero base");
  double arg = std::arg(z);
  if (arg == -std::numbers::pi) arg = std::numbers::pi;  // -x - 0i sits on the cut
  const std::complex<double> log_z{std::log(std::abs(z)), arg};
  return std::exp(w * log_z);
}

}  // namespace alladi
