#pragma once

// Real-axis zeta, gamma and Dirichlet L-values, plus principal-branch powers.

#include <complex>
#include <functional>
#include <string_view>

#include "alladi/characters.hpp"

namespace alladi {

struct EvaluationOptions {
  double target_abs_error = 1e-13;
  int max_terms = 200000;
};

// zeta(sigma) for sigma > 0, sigma != 1, from the accelerated alternating
// series: zeta = eta / (1 - 2^{1 - sigma}).
double zeta_real(double sigma, const EvaluationOptions& opts = {});

double gamma_real(double x);

// L(sigma, chi) for non-principal chi, 0.5 < sigma <= 4, through
// q^{-sigma} sum_a chi(a) zeta(sigma, a/q) with Euler-Maclaurin Hurwitz tails.
// The pole terms of the Hurwitz values cancel because sum_a chi(a) = 0.
std::complex<double> dirichlet_L_real(double sigma, const DirichletCharacter& chi,
                                      const EvaluationOptions& opts = {});

std::complex<double> l_at_one(const DirichletCharacter& chi, const EvaluationOptions& opts = {});

// exp(w Log z), Log the principal branch with arg in (-pi, pi].
std::complex<double> complex_pow(std::complex<double> z, std::complex<double> w);

// Receives branch warnings (L-values close to the negative real axis). The
// default handler writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace alladi
