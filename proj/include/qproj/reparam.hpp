#pragma once

#include <vector>

#include "qproj/quadrature.hpp"
#include "qproj/types.hpp"

namespace qproj {

/// Kernels of the reparameterization-invariant free particle: the extended
/// four-label reproducing kernel, its reduction to (p,q,t), the propagation
/// identity, and the sharp-q free propagator.  Conventions:
///   <k|p,q>   = pi^(-1/4) exp[-(k-p)^2/2 + i k q]
///   <sig|s,t> = pi^(-1/4) exp[-(sig-s)^2/2 + i sig t]
/// and every kernel is K(a,b) = <a|...|b> (first argument on the bra side).

enum class ExtendedMode { Exact, Leading };
enum class ReducedMode { Quadrature, ClosedForm, DeltaLimit };
enum class PropagatorMode { ClosedForm, Quadrature };

/// Matrix element <a| E(-delta < S + P^2/2 < delta) |b> on the extended
/// (p,q,s,t) labels.  Exact mode integrates the coherent-state overlaps over
/// the window |sigma + k^2/2| < delta; leading mode evaluates the single
/// k-integral times 2 sin(delta (t_b - t_a)) / (t_b - t_a).
KernelValue extended_kernel(const PhasePoint& a, const PhasePoint& b, double delta,
                            ExtendedMode mode, const QuadratureSpec& quad = {});

/// Reduced kernel <p_a,q_a,t_a|p_b,q_b,t_b>.  Closed form is the complex
/// Gaussian integral over the principal square root of 1 + i(t_b - t_a)/2;
/// quadrature evaluates the same k-integral numerically; delta_limit
/// integrates the exact extended kernel over (s_a, s_b), scales by
/// 1/(4 sqrt(pi) delta) and extrapolates delta -> 0.
KernelValue reduced_kernel(const PhasePoint& a, const PhasePoint& b, ReducedMode mode,
                           const QuadratureSpec& quad = {});

/// |composed - direct| for the propagation identity
///   int <a|p,q,t_mid><p,q,t_mid|b> dp dq / (2pi) = <a|b>.
/// The q-integral is done analytically (concentrating k' = k, which also
/// removes t_mid exactly -- that cancellation is the identity's mechanism);
/// the remaining p- and k-integrals run numerically.
double propagation_residual(const PhasePoint& a, const PhasePoint& b, double t_mid,
                            const QuadratureSpec& quad = {});

/// Sharp-position free propagator <q2| e^{-i P^2/2 dt} |q1>.  Closed form
/// e^{i (q2-q1)^2 / (2 dt)} / sqrt(2 pi i dt) with the principal branch
/// sqrt(i) = e^{i pi/4}; quadrature regulates dt -> dt - i eps over the
/// ladder {1e-2, 1e-3, 1e-4, 1e-5} and extrapolates eps -> 0.
KernelValue sharp_q_propagator(double q2, double q1, double dt, PropagatorMode mode,
                               const QuadratureSpec& quad = {});

enum class GramKernel { Extended, Reduced };

/// Gram matrix G_ij = K(point_i, point_j) for the chosen kernel; Hermitian
/// by construction.  Duplicate points are allowed (rank deficiency is the
/// expected outcome, not an error).
ComplexMatrix gram_matrix(const std::vector<PhasePoint>& points, GramKernel kernel,
                          double delta = 0.1, const QuadratureSpec& quad = {});

}  // namespace qproj
