#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace secretary {

// Compensated (Kahan) accumulator. Long sweeps of n*J*K terms must not lose
// the 1e-9 comparisons the optimality certificate makes to plain rounding.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  [[nodiscard]] double value() const { return s_; }
  void reset() { s_ = 0.0; c_ = 0.0; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// All CLI-facing floating point output uses 10 significant digits.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace secretary
