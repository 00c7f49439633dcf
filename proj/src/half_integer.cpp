#include "spintomo/half_integer.hpp"

#include <cmath>

#include "spintomo/errors.hpp"

namespace spintomo {

HalfInteger HalfInteger::from_double(double value) {
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (!std::isfinite(value) || std::abs(twice - rounded) > 1e-9 || std::abs(rounded) > 1e9) {
    throw InvalidArgument("not a half-integer: " + std::to_string(value));
  }
  return from_twice(static_cast<int>(rounded));
}

int HalfInteger::as_integer() const {
  if (!is_integer()) throw InvalidArgument("expected an integer, got " + to_string());
  return twice_ / 2;
}

std::string HalfInteger::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

std::string HalfInteger::to_decimal() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  const int whole = std::abs(twice_) / 2;
  return (twice_ < 0 ? "-" : "") + std::to_string(whole) + ".5";
}

SpinQuantumNumber::SpinQuantumNumber(int two_s, int max_two_s) : two_s_(two_s) {
  if (two_s < 1) throw InvalidArgument("spin must satisfy 2s >= 1, got 2s = " + std::to_string(two_s));
  if (two_s > max_two_s) {
    throw InvalidArgument("spin 2s = " + std::to_string(two_s) + " exceeds the configured maximum " +
                          std::to_string(max_two_s));
  }
}

bool SpinQuantumNumber::contains(HalfInteger m) const {
  return std::abs(m.twice()) <= two_s_ && (m.twice() + two_s_) % 2 == 0;
}

int SpinQuantumNumber::index_of(HalfInteger m) const {
  if (!contains(m)) {
    throw InvalidArgument("m = " + m.to_string() + " is not a projection of spin " + s().to_string());
  }
  return (m.twice() + two_s_) / 2;
}

}  // namespace spintomo
