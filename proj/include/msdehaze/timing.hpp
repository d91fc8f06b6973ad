#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace msdehaze {

struct StageTiming {
  std::string stage;
  double millis = 0.0;
};

class StageClock {
 public:
  StageClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }
  void restart() { start_ = std::chrono::steady_clock::now(); }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace msdehaze
