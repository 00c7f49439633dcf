#pragma once

#include <compare>
#include <string>

namespace spintomo {

/// Exact half-integer, stored as twice its value.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) {
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }
  static constexpr HalfInteger from_int(int value) { return from_twice(2 * value); }
  /// Throws InvalidArgument unless 2*value is within 1e-9 of an integer.
  static HalfInteger from_double(double value);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Throws InvalidArgument for odd twice().
  int as_integer() const;

  constexpr HalfInteger operator-() const { return from_twice(-twice_); }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) {
    return from_twice(a.twice_ + b.twice_);
  }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) {
    return from_twice(a.twice_ - b.twice_);
  }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

  /// "3", "-1/2", "5/2".
  std::string to_string() const;
  /// Decimal form used in data files: "3", "-0.5", "2.5".
  std::string to_decimal() const;

 private:
  int twice_ = 0;
};

/// Spin quantum number s >= 1/2, stored as 2s.
class SpinQuantumNumber {
 public:
  static constexpr int kDefaultMaxTwoS = 60;

  /// Throws InvalidArgument if two_s < 1 or two_s > max_two_s.
  explicit SpinQuantumNumber(int two_s, int max_two_s = kDefaultMaxTwoS);

  int two_s() const { return two_s_; }
  int dim() const { return two_s_ + 1; }
  double value() const { return 0.5 * two_s_; }
  HalfInteger s() const { return HalfInteger::from_twice(two_s_); }

  /// m value at basis index k (ascending, index 0 is m = -s).
  HalfInteger m_at(int index) const { return HalfInteger::from_twice(2 * index - two_s_); }
  bool contains(HalfInteger m) const;
  /// Basis index of m; throws InvalidArgument if m is not a valid projection.
  int index_of(HalfInteger m) const;

  friend auto operator<=>(const SpinQuantumNumber&, const SpinQuantumNumber&) = default;

 private:
  int two_s_;
};

}  // namespace spintomo
