#pragma once

// Theoretical predictions for S(x; h, q) = sum_{n<=x} e^{2 pi i h A(n)/q} and
// numerical checks of the Dirichlet-series identities behind them.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alladi/constants.hpp"

namespace alladi {

enum class PredictionMethod {
  closed_form,      // C x (log x)^{-1 + mu/phi}
  slit_quadrature,  // full integrand along the real segment left of sigma = 1
  zeta_integral,    // prefactor frozen at sigma = 1 times int |zeta|^{mu/phi} x^sigma/sigma
};

const char* to_string(PredictionMethod m);
std::optional<PredictionMethod> parse_method(const std::string& name);

struct PredictOptions {
  PredictionMethod method = PredictionMethod::closed_form;
  std::optional<double> c_slit;     // default: min(3, 0.49 sqrt(log x))
  double zeta_integral_floor = 0.5;  // lower sigma limit of the zeta_integral method
  double rel_tolerance = 1e-5;
  unsigned threads = 1;
};

struct QuadratureResult {
  std::complex<double> value;
  double refinement_error = 0.0;  // |I_2n - I_n| at the accepted level
  double truncation_error = 0.0;  // propagated prime-sum tail bounds
  double lower_sigma = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

struct PredictionReport {
  double x = 0.0;
  std::int64_t h = 0;
  std::uint64_t q = 0;
  double log_x = 0.0;
  std::complex<double> main_term;
  PredictionMethod method = PredictionMethod::closed_form;
  std::optional<std::complex<double>> quadrature_term;
  std::optional<QuadratureResult> quadrature;
  std::string error_class;
  MainTermConstant constant;
};

PredictionReport predict_main(double x, std::int64_t h, std::uint64_t q,
                              const TruncationConfig& cfg = {}, const PredictOptions& opts = {});

double default_c_slit(double x);

// (sin(mu pi/phi)/pi) int_{1 - c/sqrt(log x)}^{1} prod L(s, conj chi)^{...} |zeta(s)|^{mu/phi}
//   e^{log_correction(s)} x^s/s ds, with s = 1 - u/log x and u = v^phi so the
// endpoint behaviour |1 - s|^{-mu/phi} becomes polynomial in v.
QuadratureResult slit_integral(double x, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg,
                               double c_slit, double rel_tolerance = 1e-5, unsigned threads = 1);

// int_{floor}^{1} |zeta(s)|^{mu/phi} x^s / s ds.
double zeta_weight_integral(double x, std::uint64_t q, double floor = 0.5, double rel_tolerance = 1e-10);

// Gamma(1 - mu/phi) x / (log x)^{1 - mu/phi}.
double zeta_integral_closed_form(double x, std::uint64_t q);

struct ClassCoefficients {
  std::uint64_t q = 0;
  double log_power = 0.0;  // counts are x/q + c_a x / (log x)^{log_power}
  std::vector<double> c;
  std::vector<double> imaginary;  // should vanish up to the tail bound
  double tail_bound = 0.0;

  bool imaginary_within_bound() const;
};

ClassCoefficients class_coefficients(std::uint64_t q, const TruncationConfig& cfg = {});

template <class T>
struct IdentityCheck {
  T lhs;
  T rhs;
  double residual = 0.0;
  double bound = 0.0;

  bool passed() const { return residual <= bound; }
};

// sum_{n<=N} (-1)^{A(n)} n^{-s} against ((2^s+1)/(2^s-1)) zeta(2s)/zeta(s);
// bound = N^{1-s}/(s-1).
IdentityCheck<double> mod2_identity_check(double s, std::uint64_t N);

// Truncated Euler product prod_p (1 - e(hp/q) p^{-s})^{-1} against the
// factorisation into L(s, conj chi)^{tau(chi) conj(chi(h))/phi} zeta(s)^{mu/phi}
// e^{log_correction(s)}; bound = both truncation bounds plus rounding.
IdentityCheck<std::complex<double>> euler_product_identity_check(double s, std::int64_t h, std::uint64_t q,
                                                                 const TruncationConfig& cfg = {});

}  // namespace alladi
