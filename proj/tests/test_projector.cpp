#include <doctest.h>

#include <cmath>
#include <random>

#include "qproj/constraints.hpp"
#include "qproj/projector.hpp"
#include "qproj/quadrature.hpp"

using namespace qproj;

namespace {

OperatorMatrix diag_op(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return OperatorMatrix::dense(std::move(m), BasisSpec::fock(n));
}

OperatorMatrix random_hermitian(int n, unsigned seed, bool integer_spectrum = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(u(rng), u(rng));
  ComplexMatrix h = 0.5 * (m + ComplexMatrix(m.adjoint()));
  if (integer_spectrum) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    RealVector w(n);
    for (int i = 0; i < n; ++i) w[i] = std::round(3.0 * es.eigenvalues()[i]);
    h = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    h = 0.5 * (h + ComplexMatrix(h.adjoint()));
  }
  return OperatorMatrix::dense(std::move(h), BasisSpec::fock(n));
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("spectral projector windows") {
  const OperatorMatrix e1 = spectral_projector(diag_op({0, 1, -3}), 0.5, 1e-12);
  CHECK(std::abs(e1.entry(0, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(e1.entry(1, 1)) <= 1e-14);
  CHECK(std::abs(e1.entry(2, 2)) <= 1e-14);
  CHECK(projector_rank(e1) == 1);

  const OperatorMatrix e2 = spectral_projector(diag_op({0, 0, 2}), 0.5, 1e-12);
  CHECK(projector_rank(e2) == 2);
  CHECK(std::abs(e2.entry(0, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(e2.entry(1, 1) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(e2.entry(2, 2)) <= 1e-14);

  // Empty window: rank-0 projector, not an error.
  const OperatorMatrix e3 = spectral_projector(diag_op({1, 2}), 0.1, 1e-12);
  CHECK(projector_rank(e3) == 0);
}

TEST_CASE("snapped quartic zero mode is an exact projector target") {
  const QuarticConstraint qc = quartic_constraint(128, SnapPolicy::snap_to_level(0));
  const OperatorMatrix e = spectral_projector(qc.op, 0.0, default_zero_tolerance(qc.op));
  CHECK(projector_rank(e) == 1);
  const double residual = max_abs(qc.op.entries() * e.entries());
  CHECK(residual <= 1e-8 * operator_norm(qc.op));
}

TEST_CASE("interval filter closed form on a two-level diagonal") {
  const OperatorMatrix f = averaged_projector(diag_op({0, 2}), ProjectorScheme::interval(10));
  CHECK(std::abs(f.entry(0, 0) - Complex(1, 0)) <= 1e-14);
  // sin(20)/20, frozen from the closed-form filter evaluation.
  CHECK(f.entry(1, 1).real() == doctest::Approx(0.0456472625363814).epsilon(1e-12));
  CHECK(std::abs(f.entry(0, 1)) <= 1e-14);
}

TEST_CASE("haar average on the shifted number operator") {
  // Phi = N - 2 on a 32-level Fock space; 64 equal nodes integrate the
  // integer phases exactly, so F is the rank-one projector onto level 2.
  const int n = 32;
  ComplexMatrix num = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) num(i, i) = i - 2.0;
  const OperatorMatrix phi = OperatorMatrix::dense(num, BasisSpec::fock(n));
  const OperatorMatrix f = averaged_projector(phi, ProjectorScheme::haar(64));
  const OperatorMatrix e = spectral_projector(phi, 0.0, 1e-10);
  CHECK(max_abs(f.entries() - e.entries()) <= 1e-13);
  CHECK(projector_rank(f) == 1);
  CHECK(std::abs(f.entry(2, 2) - Complex(1, 0)) <= 1e-13);
}

TEST_CASE("haar rejects non-integer spectra") {
  CHECK_THROWS_AS(averaged_projector(diag_op({0.0, 1.5}), ProjectorScheme::haar(64)),
                  std::invalid_argument);
}

TEST_CASE("sinc filter quadrature and sine-integral routes agree") {
  for (double phi : {0.0, 0.3, 1.0, 5.0})
    for (double xi : {5.0, 40.0, 200.0}) {
      const SincFilterValue v = sinc_filter(phi, 1.0, xi);
      const double si_route =
          (sine_integral((1.0 + phi) * xi) + sine_integral((1.0 - phi) * xi)) /
          3.14159265358979323846;
      CHECK(std::abs(v.value - si_route) <= 1e-10);
    }
}

TEST_CASE("sinc projector truncation decay with the sine-integral tail bound") {
  const OperatorMatrix phi = diag_op({0, 5});
  double previous = 1.0;
  for (double xi : {20.0, 200.0, 2000.0}) {
    FilterDiagnostics diag;
    const OperatorMatrix f =
        averaged_projector(phi, ProjectorScheme::sinc(1.0, xi), &diag);
    CHECK(diag.converged);
    CHECK(std::abs(f.entry(0, 0).real() - 1.0) <= 2.0 / (3.1415 * xi) * 1.2);
    const double off = std::abs(f.entry(1, 1).real());
    // |Si(x) - pi/2| <= 2/x makes the (2,2) entry fall like 1/Xi.
    CHECK(off <= (2.0 / (6.0 * xi) + 2.0 / (4.0 * xi)) / 3.1415);
    CHECK(off < previous);
    previous = off;
  }
}

TEST_CASE("spectral and direct matrix-exponential routes are mutual oracles") {
  const OperatorMatrix h = random_hermitian(6, 42);
  const OperatorMatrix f_int = averaged_projector(h, ProjectorScheme::interval(3.0));
  const ComplexMatrix d_int = averaged_projector_direct(h, ProjectorScheme::interval(3.0));
  CHECK(max_abs(f_int.entries() - d_int) <= 1e-8);

  const OperatorMatrix hz = random_hermitian(6, 43, /*integer_spectrum=*/true);
  const OperatorMatrix f_haar = averaged_projector(hz, ProjectorScheme::haar(32));
  const ComplexMatrix d_haar = averaged_projector_direct(hz, ProjectorScheme::haar(32));
  CHECK(max_abs(f_haar.entries() - d_haar) <= 1e-10);

  const OperatorMatrix f_sinc = averaged_projector(h, ProjectorScheme::sinc(0.8, 40.0));
  const ComplexMatrix d_sinc = averaged_projector_direct(h, ProjectorScheme::sinc(0.8, 40.0));
  CHECK(max_abs(f_sinc.entries() - d_sinc) <= 1e-8);
}

TEST_CASE("every scheme matches the scalar filter on diagonal input") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<double> d(8);
  for (auto& v : d) v = u(rng);
  d[3] = 0.0;
  const OperatorMatrix phi = diag_op(d);

  const OperatorMatrix f_int = averaged_projector(phi, ProjectorScheme::interval(7.0));
  for (int i = 0; i < 8; ++i) {
    const double want = std::abs(d[i]) < 1e-15 ? 1.0 : std::sin(7.0 * d[i]) / (7.0 * d[i]);
    CHECK(std::abs(f_int.entry(i, i).real() - want) <= 1e-12);
  }

  const OperatorMatrix f_sinc = averaged_projector(phi, ProjectorScheme::sinc(0.5, 30.0));
  for (int i = 0; i < 8; ++i) {
    const SincFilterValue want = sinc_filter(d[i], 0.5, 30.0);
    CHECK(std::abs(f_sinc.entry(i, i).real() - want.value) <= 1e-12);
  }

  std::vector<double> dz = {0, 1, -2, 3, 5, -7, 4, 2};
  const OperatorMatrix phiz = diag_op(dz);
  const OperatorMatrix f_haar = averaged_projector(phiz, ProjectorScheme::haar(16));
  for (int i = 0; i < 8; ++i) {
    Complex want{0, 0};
    for (int j = 0; j < 16; ++j)
      want += std::exp(Complex(0, -2.0 * 3.14159265358979323846 * j / 16.0 * dz[i]));
    CHECK(std::abs(f_haar.entry(i, i).real() - want.real() / 16.0) <= 1e-12);
  }
}

TEST_CASE("projector invariants") {
  const QuarticConstraint qc = quartic_constraint(48, SnapPolicy::snap_to_level(0));
  const OperatorMatrix e = spectral_projector(qc.op, 0.0, default_zero_tolerance(qc.op));
  CHECK(max_abs(e.entries() * e.entries() - e.entries()) <= 1e-12);
  CHECK(max_abs(e.entries() - e.entries().adjoint()) <= 1e-12);

  const OperatorMatrix f = averaged_projector(qc.op, ProjectorScheme::interval(25.0));
  CHECK(max_abs(f.entries() * qc.op.entries() - qc.op.entries() * f.entries()) <=
        1e-10 * operator_norm(qc.op));
  CHECK(operator_norm(f) <= 1.0 + 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ul(1.0, 2000.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double L = ul(rng);
    const BoundReport b = bound_report(qc.op, L);
    CHECK(b.measured_norm <= b.bound + 1e-12);
  }
}

TEST_CASE("every filter commutes with its constraint") {
  const OperatorMatrix h = random_hermitian(8, 77, /*integer_spectrum=*/true);
  const double scale = operator_norm(h);
  auto commutator = [&](const OperatorMatrix& f) {
    return (f.entries() * h.entries() - h.entries() * f.entries()).cwiseAbs().maxCoeff();
  };
  CHECK(commutator(spectral_projector(h, 0.5, 1e-10)) <= 1e-10 * scale);
  CHECK(commutator(averaged_projector(h, ProjectorScheme::interval(4.0))) <= 1e-10 * scale);
  CHECK(commutator(averaged_projector(h, ProjectorScheme::sinc(0.5, 30.0))) <= 1e-10 * scale);
  CHECK(commutator(averaged_projector(h, ProjectorScheme::haar(32))) <= 1e-10 * scale);
}

TEST_CASE("gap report excerpt is ordered by distance from zero") {
  const GapReport g = spectral_gap(diag_op({5, 0, -1, 3, -7}), 1e-10);
  REQUIRE(g.spectrum_excerpt.size() == 5);
  for (size_t i = 1; i < g.spectrum_excerpt.size(); ++i)
    CHECK(std::abs(g.spectrum_excerpt[i]) >= std::abs(g.spectrum_excerpt[i - 1]));
  CHECK(g.spectrum_excerpt[0] == 0.0);
}

TEST_CASE("spectral gap reports") {
  const GapReport g1 = spectral_gap(diag_op({0, 2, -3}), 1e-10);
  CHECK(g1.delta_cap == doctest::Approx(2.0));
  CHECK(g1.zero_multiplicity == 1);

  const GapReport g2 = spectral_gap(diag_op({0, 0, 1e-12, 5}), 1e-8);
  CHECK(g2.delta_cap == doctest::Approx(5.0));
  CHECK(g2.zero_multiplicity == 3);

  CHECK_THROWS_WITH_AS(spectral_gap(diag_op({1.0, 2.0}), 1e-10),
                       doctest::Contains("snap"), std::runtime_error);
}

TEST_CASE("bound certificates") {
  const BoundReport b = bound_report(diag_op({0, 2}), 10.0, 1e-10);
  CHECK(b.measured_norm == doctest::Approx(0.0456472625363814).epsilon(1e-10));
  CHECK(b.bound == doctest::Approx(0.05));
  CHECK(b.measured_norm <= b.bound);
  CHECK(b.saturation_ratio == doctest::Approx(b.measured_norm / b.bound));

  const BoundReport b10 = bound_report(diag_op({0, 2}), 100.0, 1e-10);
  CHECK(b10.bound == doctest::Approx(b.bound / 10.0));
  CHECK(b10.measured_norm <= b10.bound);

  // Delta = 0 (no nonzero eigenvalue at all) leaves the bound undefined.
  CHECK_THROWS_AS(bound_report(diag_op({0, 0}), 10.0, 1e-10), std::invalid_argument);
}

TEST_CASE("polynomial extrapolation to zero is exact on polynomials") {
  auto poly = [](double x) { return Complex(3.0 - 2.0 * x + 5.0 * x * x, 0.0); };
  std::vector<double> xs = {0.4, 0.2, 0.1};
  std::vector<Complex> ys = {poly(0.4), poly(0.2), poly(0.1)};
  CHECK(std::abs(extrapolate_to_zero(xs, ys) - Complex(3.0, 0.0)) <= 1e-13);
}

TEST_CASE("spectral and haar outputs are idempotent Hermitian projectors") {
  const OperatorMatrix hz = random_hermitian(10, 99, /*integer_spectrum=*/true);
  for (const OperatorMatrix& f :
       {spectral_projector(hz, 0.5, 1e-10), averaged_projector(hz, ProjectorScheme::haar(32))}) {
    CHECK(max_abs(f.entries() * f.entries() - f.entries()) <= 1e-12);
    CHECK(max_abs(f.entries() - f.entries().adjoint()) <= 1e-12);
  }
}

TEST_CASE("interval bound holds across the operator corpus") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> ul(0.5, 5000.0);
  std::vector<OperatorMatrix> corpus;
  corpus.push_back(diag_op({0, 2}));
  corpus.push_back(diag_op({0, 0, -0.7, 1.3, 40.0}));
  corpus.push_back(harmonic_constraint(32, SnapPolicy::snap_to_level(1)).op);
  corpus.push_back(quartic_constraint(32, SnapPolicy::snap_to_level(0)).op);
  for (const auto& op : corpus)
    for (int trial = 0; trial < 4; ++trial) {
      const BoundReport b = bound_report(op, ul(rng));
      CHECK(b.measured_norm <= b.bound + 1e-12);
    }
}

TEST_CASE("adaptive quadrature flags exhausted budgets") {
  // Rapid oscillation with a two-interval budget cannot certify; the flag
  // must report it rather than silently returning a value.
  auto f = [](double x) { return Complex(std::cos(1e6 * x), 0.0); };
  const AdaptiveResult r = integrate_adaptive(f, 0.0, 1.0, 1e-12, 1e-12, 2);
  CHECK_FALSE(r.converged);

  const AdaptiveResult ok = integrate_adaptive(
      [](double x) { return Complex(std::exp(-x * x), 0.0); }, -6.0, 6.0);
  CHECK(ok.converged);
  CHECK(std::abs(ok.value.real() - std::sqrt(3.14159265358979323846)) <= 1e-12);
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(averaged_projector(diag_op({0, 1}), ProjectorScheme::interval(-1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(averaged_projector(diag_op({0, 1}), ProjectorScheme::sinc(0.0, 10.0)),
                  std::invalid_argument);
}
