#pragma once

#include <cmath>
#include <limits>

namespace latwalk {

// Nonnegative extended real carried as its natural log; tails like
// exp(t^-2) overflow any fixed-width float but their logs do not.
struct LogReal {
  double lg = -std::numeric_limits<double>::infinity();

  static LogReal zero() { return {}; }
  static LogReal from_log(double l) { return {l}; }
  static LogReal from_value(double v) {
    return {v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity()};
  }
  bool is_zero() const { return std::isinf(lg) && lg < 0; }
  double value() const { return std::exp(lg); }  // may overflow to inf
};

inline LogReal logadd(LogReal a, LogReal b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.lg < b.lg) std::swap(a, b);
  return LogReal::from_log(a.lg + std::log1p(std::exp(b.lg - a.lg)));
}

// a - b for a >= b (clamps to zero on cancellation).
inline LogReal logsub(LogReal a, LogReal b) {
  if (b.is_zero()) return a;
  if (b.lg >= a.lg) return LogReal::zero();
  return LogReal::from_log(a.lg + std::log1p(-std::exp(b.lg - a.lg)));
}

// Signed value in log magnitude form, for certificates like 2*max - sum.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double lg = -std::numeric_limits<double>::infinity();

  static SignedLog diff(LogReal a, LogReal b) {  // a - b
    if (a.lg == b.lg) return {0, -std::numeric_limits<double>::infinity()};
    if (a.lg > b.lg) return {+1, logsub(a, b).lg};
    return {-1, logsub(b, a).lg};
  }
  bool exceeds(double threshold) const {
    if (threshold <= 0) return sign > 0 || (sign == 0 && threshold < 0);
    return sign > 0 && lg > std::log(threshold);
  }
  double to_double() const { return sign * std::exp(lg); }
};

inline double ulp_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double ulp_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

}  // namespace latwalk
