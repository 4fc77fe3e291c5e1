#pragma once

#include <vector>

#include "qproj/operator_core.hpp"
#include "qproj/quadrature.hpp"
#include "qproj/types.hpp"

namespace qproj {

/// Multiplier-sector machinery: the elevated Lagrange multiplier lambda
/// acquires a conjugate momentum Pi, the physical projector factorizes into
/// E(-delta < Phi < delta) E(-delta < Pi < delta), and the second factor
/// collapses to rank one as delta -> 0.

/// Rank-one collapse diagnostics of the sampled sector kernel.
struct RankOneReport {
  std::vector<double> delta_values;
  std::vector<double> sigma_ratio;  // sigma_2 / sigma_1 per delta
  double fitted_slope = 0.0;        // log-log slope of the ratio against delta
  int rank = 0;                     // 1 for the degenerate single-point case
};

/// Momentum operator -i d/dlambda on the interior of a grid (central
/// differences, Dirichlet walls); Hermitian with purely imaginary entries.
OperatorMatrix grid_momentum(const GridSpec& grid);

/// <pi_a,lambda_a| E(-delta < Pi < delta) |pi_b,lambda_b> evaluated in the
/// momentum representation: int_{-delta}^{delta} conj(psi_a) psi_b dk with
/// <k|pi,lambda> = pi^(-1/4) exp[-(k-pi)^2/2 + i k lambda].
KernelValue pi_sector_kernel(const SectorPoint& a, const SectorPoint& b, double delta,
                             const QuadratureSpec& quad = {});

struct FactorizationReport {
  double projector_residual = 0.0;   // ||E_total - E_Phi (x) E_Pi||
  double propagator_residual = 0.0;  // max |joint - product| over sampled labels
  int rank_phi = 0;
  int rank_pi = 0;
  int rank_total = 0;
};

/// Two-path check of the Eq.-21-style factorization.  The joint path builds
/// the window projectors of Phi (x) I and I (x) Pi on the product space by
/// solving their diagonal blocks (the literal sparsity of a Kronecker
/// operator) and multiplies them; the factor path Kronecker-assembles the
/// single-factor projectors.  The report also carries the sampled
/// coherent-state propagator factorization residual, with the Hamiltonian
/// P^2/2 acting on the system factor over time T.
FactorizationReport factorization_residual(const OperatorMatrix& phi,
                                           const OperatorMatrix& pi_op, double delta,
                                           int sample_pairs = 10, unsigned seed = 20240814,
                                           double evolution_time = 1.0);

/// Assembles the sampled sector Gram matrix for each delta in the sweep and
/// tracks the singular-value ratio sigma_2/sigma_1; the fitted log-log slope
/// measures the rank-one collapse rate.
RankOneReport rank_one_report(const std::vector<SectorPoint>& sample_points,
                              const std::vector<double>& delta_sweep,
                              const QuadratureSpec& quad = {});

}  // namespace qproj
