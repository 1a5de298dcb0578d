#include "alladi/checkpoint.hpp"

#include <numeric>
#include <sstream>
#include <string>

namespace alladi {

namespace {

std::uint64_t expect_field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw CheckpointMismatch("checkpoint: missing '" + key + "' line");
  std::istringstream ls(line);
  std::string name;
  std::uint64_t value = 0;
  if (!(ls >> name >> value) || name != key) throw CheckpointMismatch("checkpoint: malformed '" + key + "' line");
  return value;
}

std::uint64_t segment_length(const CheckpointHeader& h, std::uint64_t segment) {
  const std::uint64_t lo = segment * h.segment_size + 1;
  if (lo > h.x) return 0;
  return std::min(h.x - lo + 1, h.segment_size);
}

}  // namespace

Checkpoint::Checkpoint(std::filesystem::path path, CheckpointHeader header)
    : path_(std::move(path)), header_(header) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    std::string magic;
    int version = 0;
    {
      std::string line;
      std::getline(in, line);
      std::istringstream ls(line);
      if (!(ls >> magic >> version) || magic != "alladi-checkpoint") {
        throw CheckpointMismatch("checkpoint: not a checkpoint file: " + path_.string());
      }
    }
    if (version != kVersion) throw CheckpointMismatch("checkpoint: unsupported version " + std::to_string(version));
    CheckpointHeader stored;
    stored.x = expect_field(in, "x");
    stored.q = expect_field(in, "q");
    stored.segment_size = expect_field(in, "segment");
    if (!(stored == header_)) {
      throw CheckpointMismatch("checkpoint: header (x, q, segment) does not match this run");
    }
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::uint64_t seg = 0;
      if (!(ls >> seg)) throw CheckpointMismatch("checkpoint: bad segment line");
      std::vector<std::uint64_t> counts(header_.q);
      for (auto& c : counts) {
        if (!(ls >> c)) throw CheckpointMismatch("checkpoint: short segment line");
      }
      std::string extra;
      if (ls >> extra) throw CheckpointMismatch("checkpoint: trailing data on segment line");
      const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
      if (total != segment_length(header_, seg) || total == 0) {
        throw CheckpointMismatch("checkpoint: segment " + std::to_string(seg) + " counts do not cover it");
      }
      completed_[seg] = std::move(counts);
    }
    out_.open(path_, std::ios::app);
  } else {
    out_.open(path_);
    out_ << "alladi-checkpoint " << kVersion << '\n'
         << "x " << header_.x << '\n'
         << "q " << header_.q << '\n'
         << "segment " << header_.segment_size << '\n';
    out_.flush();
  }
  if (!out_) throw std::runtime_error("checkpoint: cannot write " + path_.string());
}

void Checkpoint::record(std::uint64_t segment, const std::vector<std::uint64_t>& counts) {
  std::lock_guard lock(mu_);
  out_ << segment;
  for (const auto c : counts) out_ << ' ' << c;
  out_ << '\n';
  out_.flush();
  completed_[segment] = counts;
}

}  // namespace alladi
