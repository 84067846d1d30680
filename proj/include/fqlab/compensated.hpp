#pragma once
#ifdef __FAST_MATH__
#error fast math enabled, this would negate compensation.
#endif

#include <cmath>
#include <complex>

namespace fqlab {

/// Neumaier-compensated accumulator.
template <typename T>
class NeumaierSum {
 public:
  void add(T x) noexcept {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const noexcept { return sum_ + carry_; }

 private:
  T sum_{};
  T carry_{};
};

class ComplexSum {
 public:
  void add(std::complex<double> z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum<double> re_;
  NeumaierSum<double> im_;
};

}  // namespace fqlab
