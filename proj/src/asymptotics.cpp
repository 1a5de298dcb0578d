#include "alladi/asymptotics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "alladi/characters.hpp"
#include "alladi/parallel.hpp"
#include "alladi/sieve.hpp"
#include "alladi/special_functions.hpp"

namespace alladi {

namespace {

constexpr int kGaussPoints = 16;
constexpr std::size_t kMaxPanels = 256;

struct GaussRule {
  std::array<double, kGaussPoints> node{};
  std::array<double, kGaussPoints> weight{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    for (int i = 0; i < kGaussPoints; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kGaussPoints + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= kGaussPoints; ++k) {
          const double pk = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = kGaussPoints * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.node[i] = z;
      r.weight[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

template <class T>
struct Integral {
  T value{};
  double error = 0.0;
  double side = 0.0;  // sum of |w| * side_value, see integrate()
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

// Composite Gauss-Legendre on [a, b], panels doubled until successive levels
// agree to rel_tol. f returns {value, side}; side values (error magnitudes)
// are integrated alongside with |weights|.
template <class T, class F>
Integral<T> integrate(F&& f, double a, double b, double rel_tol, unsigned threads, std::size_t start_panels = 2) {
  const GaussRule& rule = gauss_rule();
  Integral<T> prev;
  bool have_prev = false;
  for (std::size_t panels = start_panels; panels <= kMaxPanels; panels *= 2) {
    const double width = (b - a) / static_cast<double>(panels);
    const std::size_t n = panels * kGaussPoints;
    std::vector<std::pair<T, double>> vals(n);
    parallel_for(n, threads, [&](std::size_t i) {
      const std::size_t panel = i / kGaussPoints;
      const std::size_t j = i % kGaussPoints;
      const double mid = a + (static_cast<double>(panel) + 0.5) * width;
      vals[i] = f(mid + 0.5 * width * rule.node[j]);
    });
    Integral<T> cur;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = 0.5 * width * rule.weight[i % kGaussPoints];
      cur.value += w * vals[i].first;
      cur.side += w * vals[i].second;
    }
    cur.panels = panels;
    cur.evaluations = n + (have_prev ? prev.evaluations : 0);
    if (have_prev) {
      cur.error = std::abs(cur.value - prev.value);
      if (cur.error <= rel_tol * std::abs(cur.value)) return cur;
    }
    prev = cur;
    have_prev = true;
  }
  throw std::runtime_error("quadrature did not converge within the panel limit");
}

struct ModulusData {
  int mu;
  double phi;
  double ratio;  // mu / phi
};

ModulusData modulus_data(std::uint64_t q) {
  const int mu = mobius(q);
  const double phi = static_cast<double>(euler_phi(q));
  return {mu, phi, mu / phi};
}

// (1 - s)|zeta(s)|, which tends to 1 as s -> 1.
double scaled_zeta(double one_minus_s) {
  if (one_minus_s < 1e-15) return 1.0;
  return one_minus_s * std::abs(zeta_real(1.0 - one_minus_s));
}

void check_coprime(std::int64_t h, std::uint64_t q, const char* who) {
  const auto qq = static_cast<std::int64_t>(q);
  if (gcd(static_cast<std::uint64_t>(((h % qq) + qq) % qq), q) != 1) {
    throw std::invalid_argument(std::string(who) + ": gcd(h, q) != 1");
  }
}

}  // namespace

const char* to_string(PredictionMethod m) {
  switch (m) {
    case PredictionMethod::closed_form: return "closed_form";
    case PredictionMethod::slit_quadrature: return "slit_quadrature";
    case PredictionMethod::zeta_integral: return "zeta_integral";
  }
  return "?";
}

std::optional<PredictionMethod> parse_method(const std::string& name) {
  if (name == "closed" || name == "closed_form") return PredictionMethod::closed_form;
  if (name == "quadrature" || name == "slit" || name == "slit_quadrature") return PredictionMethod::slit_quadrature;
  if (name == "zeta" || name == "zeta_integral") return PredictionMethod::zeta_integral;
  return std::nullopt;
}

double default_c_slit(double x) { return std::min(3.0, 0.49 * std::sqrt(std::log(x))); }

double zeta_integral_closed_form(double x, std::uint64_t q) {
  if (!(x > 1.0)) throw std::domain_error("zeta_integral_closed_form: x must exceed 1");
  const auto m = modulus_data(q);
  if (m.mu == 0) throw std::domain_error("zeta_integral_closed_form: mu(q) = 0");
  return gamma_real(1.0 - m.ratio) * x / std::pow(std::log(x), 1.0 - m.ratio);
}

double zeta_weight_integral(double x, std::uint64_t q, double floor, double rel_tolerance) {
  if (!(x > 1.0)) throw std::domain_error("zeta_weight_integral: x must exceed 1");
  if (!(floor > 0.0 && floor < 1.0)) throw std::domain_error("zeta_weight_integral: floor outside (0, 1)");
  const auto m = modulus_data(q);
  if (m.mu == 0) throw std::domain_error("zeta_weight_integral: mu(q) = 0");
  const double L = std::log(x);
  const double power = m.phi;
  const double v_max = std::pow((1.0 - floor) * L, 1.0 / power);
  const double scale = std::pow(L, m.ratio) * power;

  auto g = [&](double v) -> std::pair<double, double> {
    const double u = std::pow(v, power);
    const double one_minus = u / L;
    const double s = 1.0 - one_minus;
    const double val = std::pow(scaled_zeta(one_minus), m.ratio) * scale *
                       std::pow(v, power - 1.0 - m.mu) * std::exp(-u) / s;
    return {val, 0.0};
  };
  const auto r = integrate<double>(g, 0.0, v_max, rel_tolerance, 1, 4);
  return r.value * x / L;
}

QuadratureResult slit_integral(double x, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg,
                               double c_slit, double rel_tolerance, unsigned threads) {
  if (q <= 2) throw std::invalid_argument("slit_integral: q must be > 2");
  check_coprime(h, q, "slit_integral");
  if (!(x >= 16.0)) throw std::domain_error("slit_integral: x must be >= 16");
  const auto m = modulus_data(q);
  if (m.mu == 0) throw std::domain_error("slit_integral: mu(q) = 0, there is no slit contribution");
  const double L = std::log(x);
  if (!(c_slit > 0.0) || c_slit > 0.49 * std::sqrt(L) * (1.0 + 1e-12)) {
    throw std::invalid_argument("slit_integral: c_slit must lie in (0, 0.49 sqrt(log x)]");
  }

  TruncationConfig inner = cfg;
  inner.enforce_target = false;
  const double power = m.phi;
  const double u_max = c_slit * std::sqrt(L);
  const double v_max = std::pow(u_max, 1.0 / power);
  const double scale = std::pow(L, m.ratio) * power;

  auto g = [&](double v) -> std::pair<std::complex<double>, double> {
    const double u = std::pow(v, power);
    const double one_minus = u / L;
    const double s = 1.0 - one_minus;
    const ConstantResult corr = log_correction(s, h, q, inner);
    const CharacterProduct prod = character_product(s, h, q);
    const double weight = std::pow(scaled_zeta(one_minus), m.ratio) * scale *
                          std::pow(v, power - 1.0 - m.mu) * std::exp(-u) / s;
    const std::complex<double> val = prod.value * std::exp(corr.value) * weight;
    const double err = std::abs(val) * (std::expm1(corr.tail_bound) + prod.relative_error);
    return {val, err};
  };
  const auto r = integrate<std::complex<double>>(g, 0.0, v_max, rel_tolerance, threads);

  const double pre = std::sin(m.ratio * std::numbers::pi) / std::numbers::pi * x / L;
  QuadratureResult out;
  out.value = pre * r.value;
  out.refinement_error = std::abs(pre) * r.error;
  out.truncation_error = std::abs(pre) * r.side;
  out.lower_sigma = 1.0 - c_slit / std::sqrt(L);
  out.evaluations = r.evaluations;
  out.panels = r.panels;
  return out;
}

PredictionReport predict_main(double x, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg,
                              const PredictOptions& opts) {
  if (q <= 2) throw std::invalid_argument("predict_main: q must be > 2");
  if (!(x >= 16.0)) throw std::domain_error("predict_main: x must be >= 16");
  check_coprime(h, q, "predict_main");

  // Work with the representative of {h, -h} closer to 0 and conjugate back, so
  // the h and q - h reports are exact conjugates.
  const auto qq = static_cast<std::int64_t>(q);
  std::int64_t hr = ((h % qq) + qq) % qq;
  const bool flip = qq - hr < hr;
  if (flip) hr = qq - hr;
  auto fix = [flip](std::complex<double> z) { return flip ? std::conj(z) : z; };

  const auto m = modulus_data(q);
  PredictionReport rep;
  rep.x = x;
  rep.h = h;
  rep.q = q;
  rep.log_x = std::log(x);
  rep.method = opts.method;
  rep.constant = main_term_constant(hr, q, cfg);
  rep.constant.constant.value = fix(rep.constant.constant.value);

  if (rep.constant.vanishes) {
    rep.main_term = {0.0, 0.0};
    rep.error_class = "O(x exp(-c0 sqrt(log x)))";
    if (opts.method != PredictionMethod::closed_form) rep.quadrature_term = std::complex<double>{0.0, 0.0};
    return rep;
  }

  const std::complex<double> c = rep.constant.constant.value;
  rep.main_term = c * x * std::pow(rep.log_x, -1.0 + m.ratio);
  std::ostringstream err;
  err << "O(x (log x)^(" << -2.0 + m.ratio << "))";
  rep.error_class = err.str();

  switch (opts.method) {
    case PredictionMethod::closed_form:
      break;
    case PredictionMethod::slit_quadrature: {
      auto quad = slit_integral(x, hr, q, cfg, opts.c_slit.value_or(default_c_slit(x)), opts.rel_tolerance,
                                opts.threads);
      quad.value = fix(quad.value);
      rep.quadrature_term = quad.value;
      rep.quadrature = quad;
      break;
    }
    case PredictionMethod::zeta_integral: {
      const double j = zeta_weight_integral(x, q, opts.zeta_integral_floor);
      rep.quadrature_term = c / gamma_real(1.0 - m.ratio) * j;
      break;
    }
  }
  return rep;
}

bool ClassCoefficients::imaginary_within_bound() const {
  for (const double im : imaginary) {
    if (std::abs(im) > 10.0 * tail_bound + 1e-14) return false;
  }
  return true;
}

ClassCoefficients class_coefficients(std::uint64_t q, const TruncationConfig& cfg) {
  if (q <= 2) throw std::invalid_argument("class_coefficients: q must be > 2");
  const auto m = modulus_data(q);
  if (m.mu == 0) throw std::domain_error("class_coefficients: q is not squarefree");

  ClassCoefficients out;
  out.q = q;
  out.log_power = 1.0 - m.ratio;
  std::vector<std::complex<double>> acc(q);
  const double qd = static_cast<double>(q);
  for (std::uint64_t h = 1; h < q; ++h) {
    if (gcd(h, q) != 1) continue;
    const auto c = main_term_constant(static_cast<std::int64_t>(h), q, cfg).constant;
    out.tail_bound += c.tail_bound / qd;
    for (std::uint64_t a = 0; a < q; ++a) {
      acc[a] += c.value * unit_root(-static_cast<std::int64_t>(h * a % q), q) / qd;
    }
  }
  for (const auto& z : acc) {
    out.c.push_back(z.real());
    out.imaginary.push_back(z.imag());
  }
  return out;
}

IdentityCheck<double> mod2_identity_check(double s, std::uint64_t N) {
  if (!(s > 1.0)) throw std::domain_error("mod2_identity_check: s must exceed 1");
  if (N < 1000) throw std::invalid_argument("mod2_identity_check: N must be >= 1000");

  // Neumaier summation in long double; terms shrink by ~N^{-s}.
  long double sum = 0.0L, comp = 0.0L;
  stream_a_mod(N, 2, [&](std::uint64_t n, std::uint64_t r) {
    const long double t = std::pow(static_cast<long double>(n), -static_cast<long double>(s));
    const long double v = r ? -t : t;
    const long double nsum = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - nsum) + v : (v - nsum) + sum;
    sum = nsum;
  });

  IdentityCheck<double> out;
  out.lhs = static_cast<double>(sum + comp);
  const double two_s = std::exp2(s);
  out.rhs = (two_s + 1.0) / (two_s - 1.0) * zeta_real(2.0 * s) / zeta_real(s);
  out.residual = std::abs(out.lhs - out.rhs);
  out.bound = std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
  return out;
}

IdentityCheck<std::complex<double>> euler_product_identity_check(double s, std::int64_t h, std::uint64_t q,
                                                                 const TruncationConfig& cfg) {
  if (!(s >= 1.5 && s <= 4.0)) throw std::domain_error("euler_product_identity_check: s must lie in [1.5, 4]");
  if (q <= 2) throw std::invalid_argument("euler_product_identity_check: q must be > 2");
  check_coprime(h, q, "euler_product_identity_check");

  const auto qq = static_cast<std::int64_t>(q);
  const std::uint64_t hm = static_cast<std::uint64_t>(((h % qq) + qq) % qq);

  // Left: truncated Euler product.
  std::complex<double> lhs{1.0, 0.0};
  double log_tail = 0.0;
  bool cut = false;
  for (const std::uint32_t p : cached_primes(cfg.prime_bound)) {
    const double x = std::pow(static_cast<double>(p), -s);
    if (x < 1e-18) {
      // sum_{p' >= p} p'^{-s}/(1 - p'^{-s}) over all integers >= p.
      log_tail = (x + std::pow(static_cast<double>(p), 1.0 - s) / (s - 1.0)) / (1.0 - x);
      cut = true;
      break;
    }
    lhs /= 1.0 - unit_root(static_cast<std::int64_t>(p % q * hm % q), q) * x;
  }
  if (!cut) {
    log_tail = prime_power_tail(s, cfg.prime_bound) /
               (1.0 - std::pow(static_cast<double>(cfg.prime_bound), -s));
  }
  const double lhs_err = std::abs(lhs) * std::expm1(log_tail);

  // Right: character factorisation.
  TruncationConfig inner = cfg;
  inner.enforce_target = false;
  const auto m = modulus_data(q);
  const ConstantResult corr = log_correction(s, h, q, inner);
  const CharacterProduct prod = character_product(s, h, q);
  const double zeta_factor = m.mu == 0 ? 1.0 : std::pow(zeta_real(s), m.ratio);
  const std::complex<double> rhs = prod.value * zeta_factor * std::exp(corr.value);
  const double rhs_err = std::abs(rhs) * (std::expm1(corr.tail_bound) + prod.relative_error + 1e-13);

  IdentityCheck<std::complex<double>> out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.residual = std::abs(lhs - rhs);
  out.bound = lhs_err + rhs_err + 1e-12 * std::abs(rhs);
  return out;
}

}  // namespace alladi
