#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>

namespace lawson {

namespace detail {

// sin(pi*x) evaluated with argument reduction done on x itself, so that
// rational multiples of pi give bitwise-reproducible values and the
// quarter-turn cases come out exact.
inline double sin_pi(double x) {
  x = x - 2.0 * std::floor(x / 2.0);  // [0,2)
  int sign = 1;
  if (x >= 1.0) {
    x -= 1.0;
    sign = -1;
  }
  if (x > 0.5) x = 1.0 - x;  // [0,0.5]
  double v;
  if (x == 0.0)
    v = 0.0;
  else if (x == 0.5)
    v = 1.0;
  else if (x <= 0.25)
    v = std::sin(M_PI * x);
  else
    v = std::cos(M_PI * (0.5 - x));
  return sign * v;
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

}  // namespace detail

// An angle kept, whenever possible, as an exact rational multiple of pi.
// Symmetry-group closure tests compose many quarter and 1/m turns; the
// rational form keeps equal angles bitwise equal after arithmetic.
class Angle {
 public:
  constexpr Angle() = default;

  static Angle pi_times(std::int64_t num, std::int64_t den) {
    Angle a;
    a.rational_ = true;
    a.reduce(num, den);
    a.value_ = M_PI * static_cast<double>(a.num_) / static_cast<double>(a.den_);
    return a;
  }

  static Angle radians(double r) {
    Angle a;
    a.rational_ = false;
    a.value_ = r;
    return a;
  }

  bool rational() const { return rational_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return value_; }

  double sin() const {
    return rational_ ? detail::sin_pi(static_cast<double>(num_) / static_cast<double>(den_))
                     : std::sin(value_);
  }
  double cos() const {
    return rational_ ? detail::cos_pi(static_cast<double>(num_) / static_cast<double>(den_))
                     : std::cos(value_);
  }

  Angle operator+(const Angle& o) const {
    if (rational_ && o.rational_) return pi_times(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    return radians(value_ + o.value_);
  }
  Angle operator-(const Angle& o) const {
    if (rational_ && o.rational_) return pi_times(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    return radians(value_ - o.value_);
  }
  Angle operator-() const {
    return rational_ ? pi_times(-num_, den_) : radians(-value_);
  }

  // angle + k*pi/2 turns up everywhere in the perp identities
  Angle plus_half_pi() const { return *this + pi_times(1, 2); }
  Angle plus_pi() const { return *this + pi_times(1, 1); }

 private:
  void reduce(std::int64_t num, std::int64_t den) {
    if (den < 0) {
      den = -den;
      num = -num;
    }
    // normalize mod 2*pi, i.e. num/den mod 2
    num %= 2 * den;
    if (num < 0) num += 2 * den;
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
  }

  bool rational_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double value_ = 0.0;
};

}  // namespace lawson
