#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace bihc {

/// Neumaier-compensated accumulator. Works for real and std::complex scalars
/// (the complex case compensates each component independently).
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (requires { x.real(); }) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      re_.add(x);
    }
  }

  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const {
    if constexpr (requires(T t) { t.real(); }) {
      return T(re_.value(), im_.value());
    } else {
      return re_.value();
    }
  }

 private:
  struct Lane {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
      const double t = sum + x;
      if (std::abs(sum) >= std::abs(x)) {
        carry += (sum - t) + x;
      } else {
        carry += (x - t) + sum;
      }
      sum = t;
    }
    double value() const { return sum + carry; }
  };
  Lane re_;
  Lane im_;
};

inline double log_add_exp(double a, double b) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

}  // namespace bihc
