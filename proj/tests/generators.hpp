#pragma once

// Hand-rolled generators for property tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "spintomo/random_matrix.hpp"
#include "spintomo/spin_core.hpp"

namespace spintomo::testing {

struct Gen {
  Rng rng;

  explicit Gen(std::uint64_t seed) : rng(seed, 0x6e6e) {}

  int integer(int lo, int hi) { return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }
  SpinQuantumNumber spin(int max_two_s) { return SpinQuantumNumber(integer(1, max_two_s)); }
  HalfInteger m(SpinQuantumNumber s) { return s.m_at(integer(0, s.two_s())); }
  /// Includes the poles and the phi = 0 seam now and then.
  Direction direction() {
    switch (integer(0, 9)) {
      case 0: return Direction(0.0, uniform(0.0, 2 * std::numbers::pi));
      case 1: return Direction(std::numbers::pi, uniform(0.0, 2 * std::numbers::pi));
      case 2: return Direction(uniform(0.0, std::numbers::pi), 0.0);
      default: return Direction(uniform(0.0, std::numbers::pi), uniform(0.0, 2 * std::numbers::pi));
    }
  }
  CMatrix density(int dim) { return random_density_matrix(dim, rng); }
  DensityMatrix density(SpinQuantumNumber s) { return DensityMatrix(density(s.dim()), spin_basis(s)); }
  CMatrix complex_matrix(int dim) { return random_complex_matrix(dim, dim, rng); }
  CVector unit_vector(int dim) { return random_unit_vector(dim, rng); }
};

/// Runs `body` on `cases` generated inputs; the failing case index is in the trace.
inline void for_all(int cases, std::uint64_t seed, const std::function<void(Gen&, int)>& body) {
  Gen gen(seed);
  for (int c = 0; c < cases; ++c) {
    SCOPED_TRACE("case " + std::to_string(c) + " (seed " + std::to_string(seed) + ")");
    body(gen, c);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace spintomo::testing
