#pragma once

#include <cmath>

namespace inls::detail {

// x^e with fast paths for integer and half-integer exponents; these dominate
// the inner loops (r^b and |u|^{p-1} for the common parameter sets).
struct FastPow {
  double e = 1.0;
  int kind = 2;  // 0: integer, 1: half-integer, 2: generic
  int ei = 1;

  explicit FastPow(double exp_) : e(exp_) {
    const double r = std::round(e);
    if (std::abs(e - r) < 1e-14 && r >= 0 && r <= 16) {
      kind = 0;
      ei = static_cast<int>(r);
    } else {
      const double r2 = std::round(2.0 * e);
      if (std::abs(2.0 * e - r2) < 1e-14 && r2 >= 0 && r2 <= 33) {
        kind = 1;
        ei = static_cast<int>(r2);  // e = ei / 2
      }
    }
  }

  double operator()(double x) const {
    switch (kind) {
      case 0: {
        double v = 1.0, base = x;
        for (int n = ei; n > 0; n >>= 1, base *= base)
          if (n & 1) v *= base;
        return v;
      }
      case 1: {
        double v = 1.0, base = x;
        for (int n = ei; n > 0; n >>= 1, base *= base)
          if (n & 1) v *= base;
        return std::sqrt(v);
      }
      default:
        return std::pow(x, e);
    }
  }
};

}  // namespace inls::detail
