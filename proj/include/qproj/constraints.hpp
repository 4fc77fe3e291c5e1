#pragma once

#include <functional>

#include "qproj/projector.hpp"
#include "qproj/types.hpp"

namespace qproj {

/// How the constant c of the quartic constraint P^2 + Q^2 + Q^4 - c is
/// chosen.  Snapping to a computed eigenvalue realizes "a suitable value of
/// c": the spectrum then contains an exact numerical zero.
struct SnapPolicy {
  enum class Mode { ExplicitC, SnapToLevel };
  Mode mode = Mode::SnapToLevel;
  double c = 0.0;  // explicit mode
  int level = 0;   // snap mode

  static SnapPolicy explicit_c(double c) { return {Mode::ExplicitC, c, 0}; }
  static SnapPolicy snap_to_level(int k) { return {Mode::SnapToLevel, 0.0, k}; }
};

struct ZeroModeReport {
  double eigenvalue = 0.0;   // eigenvalue nearest zero
  double overlap = 0.0;      // |<v_num|v_ref>| against the normalized reference samples
  double gap_above = 0.0;    // distance to the next spectrum point
  double grid_spacing = 0.0;
};

struct QuarticConstraint {
  OperatorMatrix op;
  GapReport gap;
  double c = 0.0;  // constant actually used
};

/// Fock-basis constraint Phi = P^2 + Q^2 + Q^4 - c with c snapped or
/// explicit; an explicit c farther than the zero tolerance from every
/// eigenvalue is rejected (no locally integrable weight can build the
/// projector without a zero in the spectrum).
QuarticConstraint quartic_constraint(int fock_dim, const SnapPolicy& policy);

/// Test hook: the regular-spectrum contrast case P^2 + Q^2 - c (levels
/// 2n + 1, so c = 1 gives the integer spectrum {0, 2, 4, ...}).
QuarticConstraint harmonic_constraint(int fock_dim, const SnapPolicy& policy);

/// Potential of the mixed-spectrum constraint: V(q) = -(1+q^2)^{-3/2} + q^2/(1+q^2).
double mixed_potential(double q);

/// Reference zero mode exp(-sqrt(1+q^2)) of the continuum problem; satisfies
/// -psi'' + V psi = 0 exactly.
double mixed_reference_mode(double q);

struct MixedConstraint {
  OperatorMatrix op;
  double boundary_amplitude = 0.0;  // reference-mode amplitude at the walls
  bool box_adequate = true;         // boundary amplitude < 1e-14
};

/// Grid constraint p^2 + V(q) for the mixed-spectra example.  A box too
/// small for the reference mode tail is reported, not rejected.
MixedConstraint mixed_constraint(const GridSpec& grid);

/// Locates the eigenvalue nearest zero of a grid constraint, its overlap
/// with the supplied reference function, and the distance to the next
/// spectrum point (the discretized continuum edge or a further bound state).
ZeroModeReport zero_mode_report(const OperatorMatrix& op,
                                const std::function<double(double)>& reference);

}  // namespace qproj
