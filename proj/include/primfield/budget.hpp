#pragma once

#include <chrono>
#include <optional>

namespace primfield {

/// Soft wall-clock cap. Long sweeps poll it and return partial results flagged
/// incomplete instead of running on.
class Deadline {
 public:
  Deadline() = default;

  static Deadline after(std::chrono::duration<double> budget) {
    Deadline out;
    out.at_ = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget);
    return out;
  }

  bool expired() const { return at_ && std::chrono::steady_clock::now() >= *at_; }

 private:
  std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace primfield
