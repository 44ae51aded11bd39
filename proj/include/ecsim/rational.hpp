#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ecsim {

using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

// All asserted inequalities in the validators are exact comparisons of
// rationals. Transcendental inputs (ln, e^2, 1/log2 C) are quantized once to
// denominator 2^20 and shared between algorithm and validator, so no float
// tolerance enters any check.
inline constexpr std::int64_t kFixDen = 1 << 20;

// Exact rational over arbitrary-precision integers, normalized, den > 0.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  static Rat fraction(std::int64_t n, std::int64_t d) { return Rat(BigInt(n), BigInt(d)); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a) { return Rat(-a.num_, a.den_); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return Rat(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
  }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return a.num_ * b.den_ < b.num_ * a.den_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  BigInt floor_big() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && num_ % den_ != 0) --q;
    return q;
  }
  BigInt ceil_big() const {
    BigInt q = num_ / den_;
    if (num_ > 0 && num_ % den_ != 0) ++q;
    return q;
  }
  long long floor() const { return floor_big().convert_to<long long>(); }
  long long ceil() const { return ceil_big().convert_to<long long>(); }

  Rat pow(int e) const {
    Rat r(1);
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  double to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
  }

  std::string str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

 private:
  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

enum class FixRound { nearest, down, up };

// Quantize a real to a rational with denominator 2^20 (declared precision).
inline Rat fix20(double x, FixRound mode = FixRound::nearest) {
  double scaled = x * double(kFixDen);
  double r;
  switch (mode) {
    case FixRound::nearest: r = std::floor(scaled + 0.5); break;
    case FixRound::down: r = std::floor(scaled); break;
    case FixRound::up: r = std::ceil(scaled); break;
    default: r = scaled; break;
  }
  return Rat(BigInt(std::llround(r)), BigInt(kFixDen));
}

// ln(x) as a Fix20 rational; shared by the orientation module and its validators.
inline Rat ln_fix20(double x, FixRound mode = FixRound::nearest) { return fix20(std::log(x), mode); }

// e^2, rounded up (the conservative direction for slack requirements |L| > S*d).
inline Rat e_squared_fix20() { return fix20(std::exp(2.0), FixRound::up); }

}  // namespace ecsim
