#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "alladi/asymptotics.hpp"
#include "alladi/constants.hpp"
#include "alladi/sieve.hpp"

namespace alladi::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // a verification failed or the computation raised
  kUsage = 2,
  kCheckpoint = 3,
};

// Every default used by any command lives here and is echoed in JSON output.
struct RunConfig {
  std::string command;
  std::string target;  // verify sub-target
  std::uint64_t x = 0;
  double x_real = 0.0;  // predict accepts non-integer x
  std::int64_t h = 1;
  std::uint64_t q = 3;
  double s = 2.0;
  std::uint64_t N = 1'000'000;
  std::uint64_t qmax = 60;
  TruncationConfig truncation{};
  std::uint64_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
  std::string format = "text";
  std::optional<std::string> checkpoint;
  PredictionMethod method = PredictionMethod::closed_form;
  std::optional<double> c_slit;
};

// Parses "10000000", "1e7" or "2.5e6" into an integer; throws
// std::invalid_argument for non-integral, negative or oversized input.
std::uint64_t parse_integer_flag(const std::string& text);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alladi::cli
