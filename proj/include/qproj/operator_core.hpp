#pragma once

#include <functional>
#include <vector>

#include "qproj/types.hpp"

namespace qproj {

/// Polynomial in the canonical pair (P, Q) with real coefficients.  Each term
/// is the symmetrized product (P^a Q^b + Q^b P^a)/2, so every valid
/// expression builds a Hermitian operator.
struct OperatorExpr {
  struct Term {
    double coeff = 0.0;
    int p_power = 0;
    int q_power = 0;
  };
  std::vector<Term> terms;

  OperatorExpr& add(double coeff, int p_power, int q_power) {
    if (p_power < 0 || q_power < 0)
      throw std::invalid_argument("OperatorExpr: powers must be nonnegative");
    terms.push_back({coeff, p_power, q_power});
    return *this;
  }
  static OperatorExpr harmonic() { return OperatorExpr{}.add(1, 2, 0).add(1, 0, 2); }
  static OperatorExpr quartic() { return harmonic().add(1, 0, 4); }
};

/// Fock-basis representation of the expression.  P and Q come from the
/// ladder operators with [Q, P] = i; truncation corrupts the commutator only
/// in the top corner.
OperatorMatrix build_operator(const OperatorExpr& expr, const BasisSpec& basis);

/// Grid representation of p^2 + V(q): second-order central differences with
/// Dirichlet walls plus the diagonal potential on the interior nodes.
OperatorMatrix build_operator(const std::function<double(double)>& potential,
                              const BasisSpec& basis);

/// Ladder operator a with a|n> = sqrt(n)|n-1> on a Fock basis.
ComplexMatrix ladder_operator(int n);

/// Canonical coherent state |p,q>, fixed by the momentum-representation
/// convention <k|p,q> = pi^(-1/4) exp[-(k-p)^2/2 + i k q].  Fock components
/// follow the eigenvalue recursion of the annihilation operator; grid
/// components sample the position-space Gaussian.  The truncation (or
/// discretization) norm defect is written to `norm_defect` when given;
/// defects above 1e-6 mark the point as outside the reliable region.
StateVector coherent_state(const PhasePoint& point, const BasisSpec& basis,
                           double* norm_defect = nullptr);

struct EigenSystem {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

/// Full eigendecomposition of a Hermitian operator.  Rejects non-Hermitian
/// input.  Tridiagonal operators are decomposed through the dense path and
/// are therefore subject to the materialization guard.
EigenSystem eigendecompose(const OperatorMatrix& op);

/// All eigenvalues in ascending order; cheap O(dim^2) path for tridiagonal
/// operators of any size.
RealVector eigenvalues_of(const OperatorMatrix& op);

struct SelectedEigenPairs {
  RealVector values;
  RealMatrix vectors;  // columns
};

/// Lowest `count` eigenpairs of a tridiagonal operator (grid constraints at
/// production size).
SelectedEigenPairs lowest_eigenpairs(const OperatorMatrix& op, int count);

/// Eigenpairs of a tridiagonal operator with eigenvalue in (lo, hi].
SelectedEigenPairs eigenpairs_in_range(const OperatorMatrix& op, double lo, double hi);

/// Spectral norm max|eigenvalue| of a Hermitian operator.
double operator_norm(const OperatorMatrix& op);

/// exp(-i tau H) for Hermitian H via its eigendecomposition.
ComplexMatrix evolution_operator(const OperatorMatrix& op, double tau);

}  // namespace qproj
