#include <doctest.h>

#include <cmath>

#include "qproj/constraints.hpp"

using namespace qproj;

TEST_CASE("snapped quartic constraint at level 0") {
  const QuarticConstraint qc = quartic_constraint(128, SnapPolicy::snap_to_level(0));
  CHECK(qc.gap.zero_multiplicity == 1);
  // Delta = E1 - E0 of P^2 + Q^2 + Q^4; converged reference of this repo.
  CHECK(qc.gap.delta_cap == doctest::Approx(3.256461062683).epsilon(1e-9));
  CHECK(qc.c == doctest::Approx(1.392351641530292).epsilon(1e-9));
}

TEST_CASE("snapping to level 1 shifts the gap") {
  const QuarticConstraint q0 = quartic_constraint(128, SnapPolicy::snap_to_level(0));
  const QuarticConstraint q1 = quartic_constraint(128, SnapPolicy::snap_to_level(1));
  CHECK(q1.gap.zero_multiplicity == 1);
  const RealVector levels = eigenvalues_of(
      build_operator(OperatorExpr::quartic(), BasisSpec::fock(128)));
  const double expected = std::min(levels[1] - levels[0], levels[2] - levels[1]);
  CHECK(q1.gap.delta_cap == doctest::Approx(expected).epsilon(1e-10));
  CHECK(q1.c > q0.c);
}

TEST_CASE("explicit c off the spectrum is rejected toward snapping") {
  CHECK_THROWS_WITH_AS(quartic_constraint(64, SnapPolicy::explicit_c(2.0)),
                       doctest::Contains("snap"), std::invalid_argument);
  // Explicit c exactly on a computed level is accepted.
  const QuarticConstraint ref = quartic_constraint(64, SnapPolicy::snap_to_level(0));
  const QuarticConstraint ok = quartic_constraint(64, SnapPolicy::explicit_c(ref.c));
  CHECK(ok.gap.zero_multiplicity == 1);
}

TEST_CASE("regular-spectrum contrast case without the quartic term") {
  // P^2 + Q^2 - 1 has the integer spectrum {0, 2, 4, ...}.
  const QuarticConstraint hc = harmonic_constraint(64, SnapPolicy::snap_to_level(0));
  CHECK(hc.c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hc.gap.delta_cap == doctest::Approx(2.0).epsilon(1e-10));
  const RealVector w = eigenvalues_of(hc.op);
  for (int n = 0; n < 10; ++n) CHECK(std::abs(w[n] - 2.0 * n) <= 1e-9);
}

TEST_CASE("mixed potential values and bounds") {
  CHECK(mixed_potential(0.0) == doctest::Approx(-1.0));
  // Direct evaluation -(101)^{-3/2} + 100/101.
  CHECK(mixed_potential(10.0) == doctest::Approx(0.98911382456414853).epsilon(1e-12));
  CHECK(mixed_potential(50.0) > 0.999);
  for (double q = -40.0; q <= 40.0; q += 0.37) {
    const double v = mixed_potential(q);
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("mixed constraint zero mode against the analytic reference") {
  // Coarser grid than production keeps the unit test quick; the analytic
  // mode exp(-sqrt(1+q^2)) solves the continuum problem exactly, so the
  // discrete eigenvalue is pure O(h^2) error.
  const MixedConstraint mc = mixed_constraint(GridSpec{-40.0, 40.0, 2001});
  CHECK(mc.box_adequate);
  const ZeroModeReport z = zero_mode_report(mc.op, mixed_reference_mode);
  CHECK(std::abs(z.eigenvalue) <= 1e-4);
  CHECK(z.overlap >= 0.999999);
  CHECK(z.gap_above > 0.5);
  CHECK(z.grid_spacing == doctest::Approx(0.04));
}

TEST_CASE("mixed constraint box warning") {
  const MixedConstraint mc = mixed_constraint(GridSpec{-8.0, 8.0, 401});
  CHECK_FALSE(mc.box_adequate);
  CHECK(mc.boundary_amplitude > 1e-14);
}

TEST_CASE("zero-mode eigenvalue shrinks four-fold when h halves") {
  std::vector<double> ev;
  for (int points : {1001, 2001, 4001}) {
    const MixedConstraint mc = mixed_constraint(GridSpec{-40.0, 40.0, points});
    ev.push_back(std::abs(zero_mode_report(mc.op, mixed_reference_mode).eigenvalue));
  }
  for (size_t i = 1; i < ev.size(); ++i) {
    const double ratio = ev[i - 1] / ev[i];
    CHECK(ratio > 4.0 / 1.35);
    CHECK(ratio < 4.0 * 1.35);
  }
}

TEST_CASE("reference-mode residual falls like h^2") {
  // The analytic mode solves the continuum equation exactly, so applying
  // the discrete operator to its samples isolates the stencil truncation
  // error: ||Phi v|| / ||v|| = C h^2.
  std::vector<double> hs, residuals;
  for (int points : {1001, 2001, 4001}) {
    const MixedConstraint mc = mixed_constraint(GridSpec{-40.0, 40.0, points});
    const GridSpec& g = mc.op.basis().grid;
    const int m = mc.op.dim();
    RealVector v(m);
    for (int j = 0; j < m; ++j) v[j] = mixed_reference_mode(g.node(j));
    RealVector av(m);
    for (int j = 0; j < m; ++j) {
      av[j] = mc.op.diag()[j] * v[j];
      if (j > 0) av[j] += mc.op.sub()[j - 1] * v[j - 1];
      if (j + 1 < m) av[j] += mc.op.sub()[j] * v[j + 1];
    }
    hs.push_back(g.spacing());
    residuals.push_back(av.norm() / v.norm());
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(std::abs(slope - 2.0) <= 0.2);
}

TEST_CASE("zero-mode report rejects a vanishing reference") {
  const MixedConstraint mc = mixed_constraint(GridSpec{-10.0, 10.0, 201});
  CHECK_THROWS_AS(zero_mode_report(mc.op, [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("parity symmetry of both constraints") {
  const QuarticConstraint qc = quartic_constraint(48, SnapPolicy::snap_to_level(0));
  // Fock parity is diag((-1)^n); an even polynomial commutes with it.
  ComplexMatrix parity = ComplexMatrix::Zero(48, 48);
  for (int n = 0; n < 48; ++n) parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  CHECK((qc.op.entries() * parity - parity * qc.op.entries()).cwiseAbs().maxCoeff() <= 1e-12);

  // Grid parity is index reflection on the symmetric box.
  const MixedConstraint mc = mixed_constraint(GridSpec{-20.0, 20.0, 801});
  const int m = mc.op.dim();
  for (int j = 0; j < m; ++j) {
    CHECK(std::abs(mc.op.diag()[j] - mc.op.diag()[m - 1 - j]) <= 1e-12);
    if (j + 1 < m) CHECK(std::abs(mc.op.sub()[j] - mc.op.sub()[m - 2 - j]) <= 1e-12);
  }

  // Zero modes are even: quartic via the snapped zero eigenvector, grid via
  // the computed mode against its own reflection.
  const EigenSystem es = eigendecompose(qc.op);
  int zero_index = 0;
  for (int i = 1; i < es.eigenvalues.size(); ++i)
    if (std::abs(es.eigenvalues[i]) < std::abs(es.eigenvalues[zero_index])) zero_index = i;
  const ComplexVector mode = es.eigenvectors.col(zero_index);
  const ComplexVector reflected = parity * mode;
  CHECK((mode - reflected).norm() <= 1e-8);

  const SelectedEigenPairs pairs = lowest_eigenpairs(mc.op, 1);
  const RealVector grid_mode = pairs.vectors.col(0);
  double asym = 0.0;
  for (int j = 0; j < m; ++j) asym = std::max(asym, std::abs(grid_mode[j] - grid_mode[m - 1 - j]));
  CHECK(asym <= 1e-8);
}
