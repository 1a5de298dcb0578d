#pragma once

// Resumable record of per-segment residue counts.
//
//   alladi-checkpoint 1
//   x <x>
//   q <q>
//   segment <segment size>
//   <segment index> <N_0> ... <N_{q-1}>      one line per finished segment

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace alladi {

class CheckpointMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckpointHeader {
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  std::uint64_t segment_size = 0;

  friend bool operator==(const CheckpointHeader&, const CheckpointHeader&) = default;
};

class Checkpoint {
 public:
  static constexpr int kVersion = 1;

  // Opens `path`, creating it with `header` when absent. An existing file
  // must carry the same header and well-formed segment lines, otherwise
  // CheckpointMismatch is thrown.
  Checkpoint(std::filesystem::path path, CheckpointHeader header);

  const CheckpointHeader& header() const { return header_; }
  const std::map<std::uint64_t, std::vector<std::uint64_t>>& completed() const { return completed_; }

  // Thread-safe; flushed before returning.
  void record(std::uint64_t segment, const std::vector<std::uint64_t>& counts);

 private:
  std::filesystem::path path_;
  CheckpointHeader header_;
  std::map<std::uint64_t, std::vector<std::uint64_t>> completed_;
  std::ofstream out_;
  std::mutex mu_;
};

}  // namespace alladi
