#pragma once

#include "spintomo/rng.hpp"
#include "spintomo/spin_core.hpp"

namespace spintomo {

/// Beam-line parameters of the rotating field stage.
struct ApparatusParams {
  double gamma = 0.0;         // gyromagnetic ratio, rad s^-1 G^-1
  double transit_time = 0.0;  // s

  /// Throws InvalidArgument unless speed and length are positive.
  static ApparatusParams from_beam(double gamma, double speed_cm_per_s, double length_cm);
  /// Electron at 1e9 cm/s through a 1 cm magnet.
  static ApparatusParams electron();
  /// Neutron at 1e7 cm/s through a 1 cm magnet.
  static ApparatusParams nucleon();

  void validate() const;
};

inline constexpr double kElectronGyromagneticRatio = -1.76085963023e7;  // rad s^-1 G^-1
inline constexpr double kNeutronGyromagneticRatio = -1.83247171e4;      // rad s^-1 G^-1

/// Field B1 = -theta / (gamma t) in Gauss that rotates z onto a polar angle theta.
double plan_field(double theta, const ApparatusParams& params);

// Two spin-1/2 particles in the coupled basis, ordered |1,-1>, |1,0>, |1,1>, |0,0>.

PureState two_spin_state(Complex gamma_s, Complex gamma_a_minus, Complex gamma_a_zero, Complex gamma_a_plus);

enum class Detector { B, C, D, E };

/// Stage probabilities of the two-gradient cascade: B (M = 1), C (M = -1), the M = 0 beam
/// reaching A, and the fraction of A that lands in D after the y gradient.
struct ApparatusProbabilities {
  double p_b = 0.0;
  double p_c = 0.0;
  double p_a = 0.0;
  double p_s = 0.0;

  double p_d() const { return p_a * p_s; }
  double p_e() const { return p_a * (1.0 - p_s); }
};

/// |_y<1,0|1,0>|^2 from the spin-1 Wigner matrix at theta = pi/2 about y.
double y_gradient_overlap();

/// Probabilities after the field stage has rotated the frame onto n (n = z: no rotation).
ApparatusProbabilities two_spin_apparatus_probabilities(const PureState& coupled_state, const Direction& n);

Detector two_spin_apparatus(const PureState& coupled_state, const Direction& n, Rng& rng);
/// Mixed input: a pure component of the spectral decomposition is drawn per shot.
Detector two_spin_apparatus(const DensityMatrix& coupled_state, const Direction& n, Rng& rng);

struct ApparatusInversion {
  double gamma_s_sq = 0.0;
  double gamma_a_zero_sq = 0.0;
  bool clipped = false;
};

/// Solves p_A = |g_s|^2 + |g_0|^2 and p_A p_S = |g_s|^2 + |g_0|^2 |alpha_0|^2.
ApparatusInversion invert_apparatus(double p_a, double p_s);

}  // namespace spintomo
