#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irm {

// Arbitrary-precision unsigned integer, little-endian base-2^32 limbs with no
// trailing zero limbs (zero is the empty vector). Only the handful of
// operations the rational type needs are provided.
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(uint64_t v) {
    if (v != 0) limbs_.push_back(static_cast<uint32_t>(v));
    if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
  }

  bool is_zero() const { return limbs_.empty(); }
  bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }

  size_t bit_length() const {
    if (limbs_.empty()) return 0;
    uint32_t top = limbs_.back();
    size_t bits = (limbs_.size() - 1) * 32;
    while (top) {
      ++bits;
      top >>= 1;
    }
    return bits;
  }

  bool bit(size_t i) const {
    const size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
  }

  static int compare(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
  }

  static BigUint add(const BigUint& a, const BigUint& b) {
    BigUint out;
    const size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    out.limbs_.resize(n);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t s = carry;
      if (i < a.limbs_.size()) s += a.limbs_[i];
      if (i < b.limbs_.size()) s += b.limbs_[i];
      out.limbs_[i] = static_cast<uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) out.limbs_.push_back(static_cast<uint32_t>(carry));
    return out;
  }

  // Requires a >= b.
  static BigUint sub(const BigUint& a, const BigUint& b) {
    BigUint out;
    out.limbs_.resize(a.limbs_.size());
    int64_t borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      int64_t d = static_cast<int64_t>(a.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
      borrow = d < 0 ? 1 : 0;
      if (d < 0) d += int64_t(1) << 32;
      out.limbs_[i] = static_cast<uint32_t>(d);
    }
    out.trim();
    return out;
  }

  static BigUint mul(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return BigUint();
    BigUint out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        uint64_t cur = out.limbs_[i + j] + static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
        out.limbs_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      size_t k = i + b.limbs_.size();
      while (carry) {
        uint64_t cur = out.limbs_[k] + carry;
        out.limbs_[k] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    out.trim();
    return out;
  }

  // Binary long division; magnitudes here stay in the hundreds of bits, so
  // the O(bits) loop is plenty fast.
  static std::pair<BigUint, BigUint> divmod(const BigUint& a, const BigUint& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    BigUint quotient, remainder;
    for (size_t i = a.bit_length(); i-- > 0;) {
      remainder.shift_left_one();
      if (a.bit(i)) remainder.set_low_bit();
      if (compare(remainder, b) >= 0) {
        remainder = sub(remainder, b);
        quotient.set_bit(i);
      }
    }
    return {std::move(quotient), std::move(remainder)};
  }

  void shift_right_one() {
    for (size_t i = 0; i < limbs_.size(); ++i) {
      limbs_[i] >>= 1;
      if (i + 1 < limbs_.size() && (limbs_[i + 1] & 1u)) limbs_[i] |= 0x80000000u;
    }
    trim();
  }

  static BigUint gcd(BigUint a, BigUint b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    size_t shift = 0;
    while (a.is_even() && b.is_even()) {
      a.shift_right_one();
      b.shift_right_one();
      ++shift;
    }
    while (a.is_even()) a.shift_right_one();
    while (!b.is_zero()) {
      while (b.is_even()) b.shift_right_one();
      if (compare(a, b) > 0) std::swap(a, b);
      b = sub(b, a);
    }
    for (size_t i = 0; i < shift; ++i) a.shift_left_one();
    return a;
  }

  // Top 64 bits of the magnitude plus the power-of-two exponent that restores
  // the original scale; used for a robust conversion to double.
  double to_double() const {
    if (limbs_.empty()) return 0.0;
    const size_t bits = bit_length();
    uint64_t mantissa = 0;
    const size_t top = bits > 64 ? bits - 64 : 0;
    for (size_t i = 0; i < 64 && top + i < bits; ++i)
      if (bit(top + i)) mantissa |= uint64_t(1) << i;
    return std::ldexp(static_cast<double>(mantissa), static_cast<int>(top));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string digits;
    BigUint v = *this;
    const BigUint ten(10);
    while (!v.is_zero()) {
      auto [q, r] = divmod(v, ten);
      digits.push_back(static_cast<char>('0' + (r.limbs_.empty() ? 0 : r.limbs_[0])));
      v = std::move(q);
    }
    return std::string(digits.rbegin(), digits.rend());
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }
  void shift_left_one() {
    uint32_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
      const uint32_t next = limbs_[i] >> 31;
      limbs_[i] = (limbs_[i] << 1) | carry;
      carry = next;
    }
    if (carry) limbs_.push_back(carry);
  }
  void set_low_bit() {
    if (limbs_.empty()) limbs_.push_back(1);
    else limbs_[0] |= 1u;
  }
  void set_bit(size_t i) {
    const size_t limb = i / 32;
    if (limb >= limbs_.size()) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= uint32_t(1) << (i % 32);
  }

  std::vector<uint32_t> limbs_;
};

// Exact rational number: sign-magnitude arbitrary-precision numerator and
// positive denominator, always reduced (gcd = 1). Closed under +,-,*,/ —
// exactly what the two-step arithmetic oracle needs.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(int v) : ExactRational(static_cast<long long>(v)) {}  // NOLINT: implicit by design (Scalar(0) etc.)
  ExactRational(long long v) : sign_(v > 0 ? 1 : v < 0 ? -1 : 0), num_(static_cast<uint64_t>(v < 0 ? -v : v)), den_(1) {}
  ExactRational(long long numerator, long long denominator) : ExactRational(numerator) {
    if (denominator == 0) throw std::domain_error("zero denominator");
    if (denominator < 0) {
      sign_ = -sign_;
      denominator = -denominator;
    }
    den_ = BigUint(static_cast<uint64_t>(denominator));
    reduce();
  }

  bool is_zero() const { return sign_ == 0; }
  int sign() const { return sign_; }

  std::string to_string() const {
    std::string s = (sign_ < 0 ? "-" : "") + num_.to_string();
    if (BigUint::compare(den_, BigUint(1)) != 0) s += "/" + den_.to_string();
    return s;
  }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    const int e_num = static_cast<int>(num_.bit_length());
    const int e_den = static_cast<int>(den_.bit_length());
    // Rescale so both conversions are finite even for very long operands.
    const double m_num = std::ldexp(num_.to_double(), -e_num);
    const double m_den = std::ldexp(den_.to_double(), -e_den);
    return sign_ * std::ldexp(m_num / m_den, e_num - e_den);
  }

  friend ExactRational operator-(const ExactRational& a) {
    ExactRational out = a;
    out.sign_ = -out.sign_;
    return out;
  }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    // a.num/a.den + b.num/b.den = (a.num*b.den [+-] b.num*a.den) / (a.den*b.den)
    const BigUint lhs = BigUint::mul(a.num_, b.den_);
    const BigUint rhs = BigUint::mul(b.num_, a.den_);
    ExactRational out;
    out.den_ = BigUint::mul(a.den_, b.den_);
    if (a.sign_ == b.sign_) {
      out.num_ = BigUint::add(lhs, rhs);
      out.sign_ = a.sign_;
    } else {
      const int cmp = BigUint::compare(lhs, rhs);
      if (cmp == 0) return ExactRational();
      out.num_ = cmp > 0 ? BigUint::sub(lhs, rhs) : BigUint::sub(rhs, lhs);
      out.sign_ = cmp > 0 ? a.sign_ : b.sign_;
    }
    out.reduce();
    return out;
  }

  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) { return a + (-b); }

  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return ExactRational();
    ExactRational out;
    out.sign_ = a.sign_ * b.sign_;
    out.num_ = BigUint::mul(a.num_, b.num_);
    out.den_ = BigUint::mul(a.den_, b.den_);
    out.reduce();
    return out;
  }

  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.sign_ == 0) throw std::domain_error("division by zero");
    if (a.sign_ == 0) return ExactRational();
    ExactRational out;
    out.sign_ = a.sign_ * b.sign_;
    out.num_ = BigUint::mul(a.num_, b.den_);
    out.den_ = BigUint::mul(a.den_, b.num_);
    out.reduce();
    return out;
  }

  ExactRational& operator+=(const ExactRational& o) { return *this = *this + o; }
  ExactRational& operator-=(const ExactRational& o) { return *this = *this - o; }
  ExactRational& operator*=(const ExactRational& o) { return *this = *this * o; }
  ExactRational& operator/=(const ExactRational& o) { return *this = *this / o; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.sign_ == b.sign_ && BigUint::compare(a.num_, b.num_) == 0 && BigUint::compare(a.den_, b.den_) == 0;
  }
  friend bool operator!=(const ExactRational& a, const ExactRational& b) { return !(a == b); }
  friend bool operator<(const ExactRational& a, const ExactRational& b) { return (a - b).sign_ < 0; }
  friend bool operator>(const ExactRational& a, const ExactRational& b) { return b < a; }
  friend bool operator<=(const ExactRational& a, const ExactRational& b) { return !(b < a); }
  friend bool operator>=(const ExactRational& a, const ExactRational& b) { return !(a < b); }

  friend ExactRational abs(const ExactRational& a) {
    ExactRational out = a;
    if (out.sign_ < 0) out.sign_ = 1;
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& a) { return os << a.to_string(); }

 private:
  void reduce() {
    if (sign_ == 0 || num_.is_zero()) {
      sign_ = 0;
      num_ = BigUint();
      den_ = BigUint(1);
      return;
    }
    const BigUint g = BigUint::gcd(num_, den_);
    if (BigUint::compare(g, BigUint(1)) != 0) {
      num_ = BigUint::divmod(num_, g).first;
      den_ = BigUint::divmod(den_, g).first;
    }
  }

  int sign_ = 0;
  BigUint num_;
  BigUint den_ = BigUint(1);
};

}  // namespace irm

namespace Eigen {

template <>
struct NumTraits<irm::ExactRational> {
  using Real = irm::ExactRational;
  using NonInteger = irm::ExactRational;
  using Literal = irm::ExactRational;
  using Nested = irm::ExactRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 100,
    MulCost = 100
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
