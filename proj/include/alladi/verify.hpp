#pragma once

// Invariant suites: each check reports its worst residual against the bound
// it must stay under.

#include <cstdint>
#include <string>
#include <vector>

#include "alladi/constants.hpp"

namespace alladi {

struct CheckOutcome {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t qmax = 60;
  TruncationConfig truncation{};
  unsigned threads = 1;
};

CheckOutcome check_unit_root_reconstruction(std::uint64_t qmax);
CheckOutcome check_orthogonality(std::uint64_t qmax);
CheckOutcome check_gauss_modulus(std::uint64_t qmax);
CheckOutcome check_conjugation_involution(std::uint64_t qmax);
CheckOutcome check_l_conjugation(std::uint64_t qmax);
CheckOutcome check_parseval_inversion(std::uint64_t x, std::uint64_t qmax, unsigned threads);
CheckOutcome check_mod2_identity(double s, std::uint64_t N);
CheckOutcome check_euler_product_identity(double s, std::int64_t h, std::uint64_t q, const TruncationConfig& cfg);
CheckOutcome check_euler_product_suite(const TruncationConfig& cfg);
CheckOutcome check_constant_conjugation(const TruncationConfig& cfg);
CheckOutcome check_truncation_consistency(const TruncationConfig& cfg);
CheckOutcome check_class_coefficients(const TruncationConfig& cfg);

std::vector<CheckOutcome> verify_all(const VerifyOptions& opts = {});

}  // namespace alladi
