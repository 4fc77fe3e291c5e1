#pragma once

#include <vector>

#include "qproj/operator_core.hpp"
#include "qproj/types.hpp"

namespace qproj {

/// Recipe for turning a constraint operator into (an approximation of) the
/// projector onto its zero subspace.
struct ProjectorScheme {
  enum class Kind { Spectral, Sinc, Interval, Haar };
  Kind kind = Kind::Spectral;
  double delta = 0.0;      // window half-width (spectral, sinc)
  double L = 0.0;          // interval half-width (interval)
  double xi_cutoff = 0.0;  // truncation Xi of the sinc xi-integral
  int sinc_nodes = 20000;  // subdivision budget for the sinc quadrature
  int haar_nodes = 64;     // equal-weight nodes on [0, 2pi)

  static ProjectorScheme spectral(double delta) {
    ProjectorScheme s;
    s.kind = Kind::Spectral;
    s.delta = delta;
    return s;
  }
  static ProjectorScheme sinc(double delta, double xi_cutoff) {
    ProjectorScheme s;
    s.kind = Kind::Sinc;
    s.delta = delta;
    s.xi_cutoff = xi_cutoff;
    return s;
  }
  static ProjectorScheme interval(double L) {
    ProjectorScheme s;
    s.kind = Kind::Interval;
    s.L = L;
    return s;
  }
  static ProjectorScheme haar(int nodes = 64) {
    ProjectorScheme s;
    s.kind = Kind::Haar;
    s.haar_nodes = nodes;
    return s;
  }
  void validate() const;
};

/// Spectral gap of a constraint operator about its zero eigenvalue.
struct GapReport {
  double delta_cap = 0.0;           // min |phi| over eigenvalues beyond the zero tolerance
  int zero_multiplicity = 0;        // eigenvalues within the zero tolerance
  double zero_tolerance = 0.0;
  std::vector<double> spectrum_excerpt;  // eigenvalues nearest zero
};

/// Certificate for ||F - E|| <= 1/(L Delta).
struct BoundReport {
  double L = 0.0;
  double measured_norm = 0.0;
  double bound = 0.0;
  double saturation_ratio = 0.0;
};

/// Default zero tolerance: 1e-8 relative to the spectral norm.
double default_zero_tolerance(const OperatorMatrix& op);

/// Projector onto the eigenvalues with |phi| < max(delta, zero_tolerance).
/// An empty window yields the rank-0 projector (warning left to the caller
/// via rank inspection).
OperatorMatrix spectral_projector(const OperatorMatrix& op, double delta, double zero_tolerance);

int projector_rank(const OperatorMatrix& projector, double tol = 0.5);

/// Diagnostics of the scalar filter evaluations behind averaged_projector.
struct FilterDiagnostics {
  bool converged = true;
  double worst_error = 0.0;
};

/// Averaged projector F = g(Phi), evaluated spectrally with the scalar
/// filter of the scheme:
///   interval: g(phi) = sin(L phi)/(L phi)
///   sinc:     g(phi) = int_{-Xi}^{Xi} e^{-i xi phi} sin(delta xi)/(pi xi) dxi
///   haar:     g(phi) = (1/n) sum_j e^{-i xi_j phi},  xi_j = 2 pi j / n
/// Haar demands an integer spectrum.  Sinc quadrature that fails to converge
/// at the requested Xi is flagged through `diag`, never silently accepted.
OperatorMatrix averaged_projector(const OperatorMatrix& op, const ProjectorScheme& scheme,
                                  FilterDiagnostics* diag = nullptr);

/// Secondary route: direct quadrature of matrix exponentials exp(-i xi Phi)
/// (Pade scaling-and-squaring, no eigendecomposition).  Mutual oracle for
/// the spectral route at desk scale.
ComplexMatrix averaged_projector_direct(const OperatorMatrix& op, const ProjectorScheme& scheme);

/// Scalar sinc filter value at one eigenvalue; adaptive quadrature when the
/// oscillation budget allows, sine-integral closed form beyond it.  Both
/// routes agree to ~1e-10 where they overlap (unit-tested).
struct SincFilterValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool via_quadrature = true;
};
SincFilterValue sinc_filter(double phi, double delta, double xi_cutoff, int max_intervals = 20000);

GapReport spectral_gap(const OperatorMatrix& op, double zero_tolerance);
GapReport spectral_gap(const OperatorMatrix& op);  // default tolerance

/// Measures ||F_interval(L) - E_spectral(0)|| two ways (matrix spectral norm
/// and max over nonzero eigenvalues of |sin(L phi)/(L phi)|), checks they
/// agree to 1e-12, and certifies the 1/(L Delta) bound.
BoundReport bound_report(const OperatorMatrix& op, double L, double zero_tolerance);
BoundReport bound_report(const OperatorMatrix& op, double L);

}  // namespace qproj
