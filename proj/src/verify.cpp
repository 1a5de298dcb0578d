#include "alladi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alladi/asymptotics.hpp"
#include "alladi/characters.hpp"
#include "alladi/empirical.hpp"
#include "alladi/special_functions.hpp"

namespace alladi {

namespace {

CheckOutcome outcome(std::string name, double residual, double bound, std::string detail = {}) {
  return {std::move(name), residual, bound, residual <= bound, std::move(detail)};
}

}  // namespace

CheckOutcome check_unit_root_reconstruction(std::uint64_t qmax) {
  double worst = 0.0;
  std::string where;
  for (std::uint64_t q = 3; q <= qmax; ++q) {
    for (std::uint64_t h = 1; h < q; ++h) {
      if (gcd(h, q) != 1) continue;
      const auto h64 = static_cast<std::int64_t>(h);
      const double err = std::abs(reconstruct_unit_root(h64, q) - unit_root(h64, q));
      if (err > worst) {
        worst = err;
        where = "h=" + std::to_string(h) + " q=" + std::to_string(q);
      }
    }
  }
  return outcome("gauss-sum reconstruction of e(h/q), q <= " + std::to_string(qmax), worst, 1e-12, where);
}

CheckOutcome check_orthogonality(std::uint64_t qmax) {
  double worst = 0.0;
  for (std::uint64_t q = 3; q <= qmax; ++q) {
    const CharacterGroup g(q);
    const auto chars = g.characters();
    const double phi = static_cast<double>(g.size());
    std::vector<std::vector<std::complex<double>>> table(chars.size(), std::vector<std::complex<double>>(q));
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::uint64_t n = 0; n < q; ++n) table[i][n] = chars[i](static_cast<std::int64_t>(n));
    }
    // Sum over n for each pair of characters.
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = 0; j < chars.size(); ++j) {
        std::complex<double> s{};
        for (std::uint64_t n = 0; n < q; ++n) s += table[i][n] * std::conj(table[j][n]);
        worst = std::max(worst, std::abs(s - (i == j ? phi : 0.0)));
      }
    }
    // Sum over characters for each pair of units.
    for (std::uint64_t a = 1; a < q; ++a) {
      if (gcd(a, q) != 1) continue;
      for (std::uint64_t b = 1; b < q; ++b) {
        if (gcd(b, q) != 1) continue;
        std::complex<double> s{};
        for (std::size_t i = 0; i < chars.size(); ++i) s += table[i][a] * std::conj(table[i][b]);
        worst = std::max(worst, std::abs(s - (a == b ? phi : 0.0)));
      }
    }
  }
  return outcome("character orthogonality (both ways), q <= " + std::to_string(qmax), worst, 1e-12);
}

CheckOutcome check_gauss_modulus(std::uint64_t qmax) {
  // Prime moduli: every non-principal character is primitive.
  double worst = 0.0;
  for (std::uint64_t q = 3; q <= qmax; ++q) {
    if (factor_small(q).size() != 1 || factor_small(q)[0].exponent != 1) continue;
    const CharacterGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      const auto tau = gauss_sum(chi);
      const auto tau_bar = gauss_sum(chi.conjugate());
      const double qd = static_cast<double>(q);
      worst = std::max(worst, std::abs(std::abs(tau) - std::sqrt(qd)));
      worst = std::max(worst, std::abs(tau * tau_bar - static_cast<double>(chi.parity()) * qd));
    }
  }
  return outcome("|tau(chi)| = sqrt(q), tau(chi) tau(conj chi) = chi(-1) q, prime q <= " + std::to_string(qmax),
                 worst, 1e-10);
}

CheckOutcome check_conjugation_involution(std::uint64_t qmax) {
  double failures = 0.0;
  for (std::uint64_t q = 3; q <= qmax; ++q) {
    const CharacterGroup g(q);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = g.conjugate_index(i);
      if (g.conjugate_index(j) != i) failures += 1.0;
      const auto& chi = g.characters()[i];
      const auto& bar = g.characters()[j];
      for (std::int64_t n = 0; n < static_cast<std::int64_t>(q); ++n) {
        if (std::abs(bar(n) - std::conj(chi(n))) > 1e-14) failures += 1.0;
      }
    }
  }
  return outcome("conjugation is an involution on the character group", failures, 0.0);
}

CheckOutcome check_l_conjugation(std::uint64_t qmax) {
  double worst = 0.0;
  for (std::uint64_t q = 3; q <= qmax; ++q) {
    const CharacterGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      for (const double s : {0.75, 1.0, 2.0}) {
        worst = std::max(worst, std::abs(dirichlet_L_real(s, chi.conjugate()) - std::conj(dirichlet_L_real(s, chi))));
      }
    }
  }
  return outcome("L(s, conj chi) = conj L(s, chi), q <= " + std::to_string(qmax), worst, 1e-12);
}

CheckOutcome check_parseval_inversion(std::uint64_t x, std::uint64_t qmax, unsigned threads) {
  double worst_parseval = 0.0;
  double worst_inversion = 0.0;
  double conj_failures = 0.0;
  CountOptions opts;
  opts.threads = threads;
  for (std::uint64_t q = 2; q <= qmax; ++q) {
    const ResidueCounts counts = residue_counts(x, q, opts);
    std::vector<std::complex<double>> sums;
    double energy = 0.0;
    for (std::uint64_t h = 0; h < q; ++h) {
      sums.push_back(exp_sum(counts, h).value);
      energy += std::norm(sums.back());
    }
    long double sq = 0.0L;
    for (const auto n : counts.counts) sq += static_cast<long double>(n) * static_cast<long double>(n);
    const double expected = static_cast<double>(q * sq);
    worst_parseval = std::max(worst_parseval, std::abs(energy - expected) / expected);

    for (std::uint64_t a = 0; a < q; ++a) {
      std::complex<double> back{};
      for (std::uint64_t h = 0; h < q; ++h) {
        back += sums[h] * unit_root(-static_cast<std::int64_t>(h * a % q), q);
      }
      back /= static_cast<double>(q);
      const double n = static_cast<double>(counts.counts[a]);
      worst_inversion = std::max(worst_inversion, std::abs(back - n) / std::max(n, 1.0));
    }
    for (std::uint64_t h = 1; h < q; ++h) {
      if (sums[q - h] != std::conj(sums[h])) conj_failures += 1.0;
    }
  }
  std::ostringstream detail;
  detail << "parseval rel " << worst_parseval << ", inversion rel " << worst_inversion
         << ", non-conjugate pairs " << conj_failures;
  const bool ok = worst_parseval <= 1e-12 && worst_inversion <= 1e-6 && conj_failures == 0.0;
  CheckOutcome out = outcome("Parseval / inversion / conjugation of S(x; h, q), x = " + std::to_string(x) +
                                 ", q <= " + std::to_string(qmax),
                             std::max(worst_parseval, worst_inversion), 1e-6, detail.str());
  out.passed = ok;
  return out;
}

CheckOutcome check_mod2_identity(double s, std::uint64_t N) {
  const auto r = mod2_identity_check(s, N);
  std::ostringstream name;
  name << "mod-2 Dirichlet series identity, s = " << s << ", N = " << N;
  std::ostringstream detail;
  detail.precision(15);
  detail << "lhs " << r.lhs << " rhs " << r.rhs;
  return outcome(name.str(), r.residual, r.bound, detail.str());
}

CheckOutcome check_euler_product_identity(double s, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg) {
  const auto r = euler_product_identity_check(s, h, q, cfg);
  std::ostringstream name;
  name << "Euler product = character factorisation, s = " << s << ", h = " << h << ", q = " << q;
  return outcome(name.str(), r.residual, r.bound);
}

CheckOutcome check_euler_product_suite(const TruncationConfig& cfg) {
  double worst_ratio = 0.0;
  double worst_residual = 0.0;
  double bound_at_worst = 0.0;
  std::string where;
  for (const std::uint64_t q : {3, 5, 7, 9, 15}) {
    for (std::uint64_t h = 1; h < q; ++h) {
      if (gcd(h, q) != 1) continue;
      for (const double s : {1.5, 2.0, 3.0}) {
        const auto r = euler_product_identity_check(s, static_cast<std::int64_t>(h), q, cfg);
        const double ratio = r.residual / r.bound;
        if (ratio >= worst_ratio) {
          worst_ratio = ratio;
          worst_residual = r.residual;
          bound_at_worst = r.bound;
          std::ostringstream w;
          w << "worst at s=" << s << " h=" << h << " q=" << q;
          where = w.str();
        }
      }
    }
  }
  return outcome("Euler product identity, q in {3,5,7,9,15}, s in {1.5,2,3}", worst_residual, bound_at_worst, where);
}

CheckOutcome check_constant_conjugation(const TruncationConfig& cfg) {
  double worst_ratio = 0.0;
  double worst = 0.0;
  double bound = 0.0;
  for (const std::uint64_t q : {3, 5, 7}) {
    for (std::uint64_t h = 1; h < q; ++h) {
      const auto a = main_term_constant(static_cast<std::int64_t>(h), q, cfg).constant;
      const auto b = main_term_constant(static_cast<std::int64_t>(q - h), q, cfg).constant;
      const double diff = std::abs(b.value - std::conj(a.value));
      const double allowed = 2.0 * std::max(a.tail_bound, b.tail_bound);
      if (diff / allowed >= worst_ratio) {
        worst_ratio = diff / allowed;
        worst = diff;
        bound = allowed;
      }
    }
  }
  return outcome("main-term constant C(q-h) = conj C(h), q in {3,5,7}", worst, bound);
}

CheckOutcome check_truncation_consistency(const TruncationConfig& cfg) {
  TruncationConfig small = cfg;
  small.prime_bound = std::max<std::uint64_t>(100, cfg.prime_bound / 2);
  small.enforce_target = false;
  TruncationConfig big = cfg;
  big.enforce_target = false;

  double worst_ratio = 0.0;
  double worst = 0.0;
  double bound = 0.0;
  std::string where;
  auto consider = [&](const char* label, const ConstantResult& a, const ConstantResult& b) {
    const double diff = std::abs(a.value - b.value);
    const double ratio = diff / a.tail_bound;
    if (ratio >= worst_ratio) {
      worst_ratio = ratio;
      worst = diff;
      bound = a.tail_bound;
      where = label;
    }
  };
  for (const std::uint64_t q : {3, 5, 9}) {
    consider("higher-power sum", higher_power_sum(1.0, 1, q, small), higher_power_sum(1.0, 1, q, big));
    consider("log correction", log_correction(1.0, 1, q, small), log_correction(1.0, 1, q, big));
    consider("correction factor", correction_factor(1, q, small), correction_factor(1, q, big));
    if (mobius(q) != 0) {
      consider("main-term constant", main_term_constant(1, q, small).constant, main_term_constant(1, q, big).constant);
    }
  }
  std::ostringstream name;
  name << "doubling P (" << small.prime_bound << " -> " << big.prime_bound << ") stays within the smaller tail bound";
  return outcome(name.str(), worst, bound, "worst: " + where);
}

CheckOutcome check_class_coefficients(const TruncationConfig& cfg) {
  double worst_sum = 0.0;
  bool imag_ok = true;
  for (const std::uint64_t q : {3, 5, 7}) {
    const auto cc = class_coefficients(q, cfg);
    double total = 0.0;
    for (const double c : cc.c) total += c;
    worst_sum = std::max(worst_sum, std::abs(total));
    imag_ok = imag_ok && cc.imaginary_within_bound();
  }
  CheckOutcome out = outcome("class coefficients sum to zero and are real, q in {3,5,7}", worst_sum, 1e-8,
                             imag_ok ? "imaginary parts within 10x tail bound" : "imaginary parts too large");
  out.passed = out.passed && imag_ok;
  return out;
}

std::vector<CheckOutcome> verify_all(const VerifyOptions& opts) {
  std::vector<CheckOutcome> out;
  out.push_back(check_unit_root_reconstruction(opts.qmax));
  out.push_back(check_orthogonality(opts.qmax));
  out.push_back(check_gauss_modulus(opts.qmax));
  out.push_back(check_conjugation_involution(opts.qmax));
  out.push_back(check_l_conjugation(std::min<std::uint64_t>(opts.qmax, 12)));
  out.push_back(check_parseval_inversion(100000, std::min<std::uint64_t>(opts.qmax, 12), opts.threads));
  out.push_back(check_mod2_identity(2.0, 1000000));
  out.push_back(check_mod2_identity(3.0, 100000));
  out.push_back(check_euler_product_suite(opts.truncation));
  out.push_back(check_constant_conjugation(opts.truncation));
  out.push_back(check_truncation_consistency(opts.truncation));
  out.push_back(check_class_coefficients(opts.truncation));
  return out;
}

}  // namespace alladi
