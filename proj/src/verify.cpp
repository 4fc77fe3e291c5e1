#include "qproj/verify.hpp"

#include <cmath>

#include "qproj/constraints.hpp"
#include "qproj/multiplier.hpp"
#include "qproj/projector.hpp"
#include "qproj/reparam.hpp"

namespace qproj {

namespace {

void check_le(SuiteReport& r, const std::string& name, double measured, double tol,
              const std::string& detail = "") {
  r.checks.push_back({name, measured <= tol, measured, tol, detail});
}

void check_ge(SuiteReport& r, const std::string& name, double measured, double tol,
              const std::string& detail = "") {
  r.checks.push_back({name, measured >= tol, measured, tol, detail});
}

void check_true(SuiteReport& r, const std::string& name, bool ok, double measured, double tol,
                const std::string& detail = "") {
  r.checks.push_back({name, ok, measured, tol, detail});
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Json to_json(const SuiteReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
  return Json{{"suite", report.suite},
              {"seed", report.seed},
              {"all_passed", report.all_passed()},
              {"checks", checks}};
}

SuiteReport run_gap_suite(unsigned seed) {
  SuiteReport r;
  r.suite = "gap";
  r.seed = seed;

  const QuarticConstraint qc = quartic_constraint(128, SnapPolicy::snap_to_level(0));
  check_ge(r, "quartic gap positive", qc.gap.delta_cap, 1e-3,
           "Delta of the snapped quartic constraint");
  check_true(r, "quartic zero multiplicity", qc.gap.zero_multiplicity == 1,
             qc.gap.zero_multiplicity, 1, "1D constraint zero mode is non-degenerate");

  for (const double L : {10.0, 100.0, 1000.0, 10000.0}) {
    const BoundReport b = bound_report(qc.op, L);
    check_le(r, "interval bound L=" + std::to_string(static_cast<long>(L)),
             b.measured_norm, b.bound + 1e-12, "||F-E|| against 1/(L Delta)");
  }

  {
    const BasisSpec basis = BasisSpec::fock(32);
    ComplexMatrix m = ComplexMatrix::Zero(32, 32);
    for (int i = 0; i < 32; ++i) m(i, i) = i - 2.0;  // number operator minus 2
    const OperatorMatrix phi = OperatorMatrix::dense(std::move(m), basis);
    const OperatorMatrix f = averaged_projector(phi, ProjectorScheme::haar(64));
    const OperatorMatrix e = spectral_projector(phi, 0.0, 1e-8);
    const OperatorMatrix diff = OperatorMatrix::dense(f.entries() - e.entries(), basis);
    check_le(r, "haar average equals projector", operator_norm(diff), 1e-13,
             "compact-group average on the integer spectrum of N-2");
  }

  {
    const double delta = qc.gap.delta_cap / 2.0;
    const OperatorMatrix e = spectral_projector(qc.op, 0.0, default_zero_tolerance(qc.op));
    std::vector<double> xi_values, errors;
    bool converged = true;
    for (const double scale : {1e2, 1e3, 1e4}) {
      const double xi = scale / qc.gap.delta_cap;
      FilterDiagnostics diag;
      const OperatorMatrix f =
          averaged_projector(qc.op, ProjectorScheme::sinc(delta, xi), &diag);
      converged = converged && diag.converged;
      const OperatorMatrix diff =
          OperatorMatrix::dense(f.entries() - e.entries(), qc.op.basis());
      xi_values.push_back(xi);
      errors.push_back(operator_norm(diff));
    }
    check_true(r, "sinc quadrature converged", converged, converged ? 1 : 0, 1,
               "truncated xi-integral flags");
    check_true(r, "sinc truncation error decreases", errors[0] > errors[1] && errors[1] > errors[2],
               errors[2], errors[0], "||F_Xi - E|| along the Xi sweep");
    const double c_envelope = std::max({errors[0] * xi_values[0], errors[1] * xi_values[1],
                                        errors[2] * xi_values[2]});
    check_le(r, "sinc error within C/Xi envelope", errors[2], c_envelope / xi_values[2] + 1e-15,
             "fitted C = " + format_double(c_envelope) +
                 ", measured decay exponent = " + format_double(-loglog_slope(xi_values, errors)));
  }

  {
    const MixedConstraint mc = mixed_constraint(GridSpec{-40.0, 40.0, 8001});
    check_true(r, "mixed box adequate", mc.box_adequate, mc.boundary_amplitude, 1e-14,
               "reference-mode amplitude at the walls");
    const ZeroModeReport z = zero_mode_report(mc.op, mixed_reference_mode);
    check_le(r, "mixed zero mode magnitude", std::abs(z.eigenvalue), 5e-4, "h = 0.01");
    check_ge(r, "mixed zero mode overlap", z.overlap, 0.999999,
             "against normalized exp(-sqrt(1+q^2))");
    check_ge(r, "mixed gap above zero mode", z.gap_above, 1e-3,
             "distance to the next spectrum point");
  }

  return r;
}

SuiteReport run_reparam_suite(unsigned seed) {
  SuiteReport r;
  r.suite = "reparam";
  r.seed = seed;
  std::mt19937_64 rng(seed);
  QuadratureSpec quad;

  {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const PhasePoint a = random_pqt(rng), b = random_pqt(rng);
      const KernelValue qv = reduced_kernel(a, b, ReducedMode::Quadrature, quad);
      const KernelValue cv = reduced_kernel(a, b, ReducedMode::ClosedForm, quad);
      worst = std::max(worst, std::abs(qv.value - cv.value));
    }
    check_le(r, "reduced kernel quadrature vs closed form", worst, 1e-8, "5 seeded pairs");
  }
  {
    const PhasePoint a = random_pqt(rng);
    const KernelValue diag = reduced_kernel(a, a, ReducedMode::ClosedForm, quad);
    check_le(r, "reduced kernel coincident normalization", std::abs(diag.value - 1.0), 1e-10);
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const PhasePoint a = random_pqt(rng), b = random_pqt(rng);
      const KernelValue dl = reduced_kernel(a, b, ReducedMode::DeltaLimit, quad);
      const KernelValue cv = reduced_kernel(a, b, ReducedMode::ClosedForm, quad);
      worst = std::max(worst, std::abs(dl.value - cv.value));
    }
    check_le(r, "reduction delta-limit vs closed form", worst, 1e-6,
             "1/(4 sqrt(pi) delta) scaling, extrapolated");
  }
  {
    double worst = 0.0, spread = 0.0;
    for (int i = 0; i < 3; ++i) {
      const PhasePoint a = random_pqt(rng), b = random_pqt(rng);
      std::vector<double> residuals;
      for (const double t_mid : {0.0, 1.0, 7.0})
        residuals.push_back(propagation_residual(a, b, t_mid, quad));
      worst = std::max({worst, residuals[0], residuals[1], residuals[2]});
      spread = std::max(spread, *std::max_element(residuals.begin(), residuals.end()) -
                                    *std::min_element(residuals.begin(), residuals.end()));
    }
    check_le(r, "propagation identity residual", worst, 1e-8, "t_mid in {0, 1, 7}");
    check_le(r, "propagation residual t_mid independence", spread, 1e-10);
  }
  {
    std::uniform_real_distribution<double> uq(-2.0, 2.0), ut(0.5, 2.5);
    double worst = 0.0, worst_mod = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double dq = uq(rng);
      const double dt = ut(rng) * (rng() % 2 ? 1.0 : -1.0);
      const KernelValue qv = sharp_q_propagator(dq, 0.0, dt, PropagatorMode::Quadrature, quad);
      const KernelValue cv = sharp_q_propagator(dq, 0.0, dt, PropagatorMode::ClosedForm, quad);
      worst = std::max(worst, std::abs(qv.value - cv.value));
      worst_mod = std::max(
          worst_mod, std::abs(std::abs(cv.value) -
                              1.0 / std::sqrt(2.0 * 3.14159265358979323846 * std::abs(dt))));
    }
    check_le(r, "sharp-q propagator quadrature vs closed form", worst, 1e-6,
             "epsilon ladder 1e-2 .. 1e-5, extrapolated");
    check_le(r, "sharp-q modulus 1/sqrt(2 pi |dt|)", worst_mod, 1e-10);
  }
  {
    // Extended kernel: Hermitian symmetry and the leading-order agreement
    // |exact - leading| <= C delta^2 over the delta sweep.
    const PhasePoint a = random_pqst(rng), b = random_pqst(rng);
    double sym = 0.0;
    const KernelValue kab = extended_kernel(a, b, 0.1, ExtendedMode::Exact, quad);
    const KernelValue kba = extended_kernel(b, a, 0.1, ExtendedMode::Exact, quad);
    sym = std::abs(kab.value - std::conj(kba.value));
    check_le(r, "extended kernel Hermitian symmetry", sym,
             1e-10 + kab.estimated_error + kba.estimated_error);

    std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025}, diffs;
    for (const double d : deltas) {
      const KernelValue ex = extended_kernel(a, b, d, ExtendedMode::Exact, quad);
      const KernelValue ld = extended_kernel(a, b, d, ExtendedMode::Leading, quad);
      diffs.push_back(std::abs(ex.value - ld.value));
    }
    double c_fit = 0.0;
    for (size_t i = 0; i < deltas.size(); ++i)
      c_fit = std::max(c_fit, diffs[i] / (deltas[i] * deltas[i]));
    bool within = true;
    for (size_t i = 0; i < deltas.size(); ++i)
      within = within && diffs[i] <= c_fit * deltas[i] * deltas[i] + 1e-15;
    check_true(r, "extended kernel exact vs leading O(delta^2) envelope", within, c_fit, c_fit,
               "fitted C = " + format_double(c_fit) +
                   ", measured decay slope = " + format_double(loglog_slope(deltas, diffs)));
  }
  {
    std::vector<PhasePoint> pts = random_ball_points(8, rng);
    const ComplexMatrix g = gram_matrix(pts, GramKernel::Reduced, 0.1, quad);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    const double max_eig = es.eigenvalues().maxCoeff();
    check_ge(r, "reduced Gram positive semidefinite", min_eig, -1e-10 * max_eig, "8 points");

    std::vector<PhasePoint> ext_pts = random_ball_points_ext(8, rng);
    const ComplexMatrix ge = gram_matrix(ext_pts, GramKernel::Extended, 0.1, quad);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ese(ge, Eigen::EigenvaluesOnly);
    check_ge(r, "extended Gram positive semidefinite", ese.eigenvalues().minCoeff(),
             -1e-10 * ese.eigenvalues().maxCoeff(), "8 points");
  }
  return r;
}

SuiteReport run_elevation_suite(unsigned seed) {
  SuiteReport r;
  r.suite = "elevation";
  r.seed = seed;
  std::mt19937_64 rng(seed);
  QuadratureSpec quad;

  {
    const SectorPoint a{0.0, 0.7};
    const KernelValue k = pi_sector_kernel(a, a, 0.1, quad);
    check_le(r, "sector kernel diagonal erf oracle", std::abs(k.value - std::erf(0.1)), 1e-10,
             "collapses to the Gaussian window integral");
  }
  {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const SectorPoint a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const KernelValue kab = pi_sector_kernel(a, b, 0.15, quad);
    const KernelValue kba = pi_sector_kernel(b, a, 0.15, quad);
    check_le(r, "sector kernel Hermitian symmetry", std::abs(kab.value - std::conj(kba.value)),
             1e-12);
  }
  {
    const QuarticConstraint qc = quartic_constraint(64, SnapPolicy::snap_to_level(0));
    const OperatorMatrix pi_op = grid_momentum(GridSpec{-10.0, 10.0, 130});
    const FactorizationReport f = factorization_residual(qc.op, pi_op, 0.12, 10, seed);
    check_le(r, "projector factorization residual", f.projector_residual, 1e-12,
             "64 x 128 product space, rank " + std::to_string(f.rank_phi) + " x " +
                 std::to_string(f.rank_pi));
    check_le(r, "sampled propagator factorization", f.propagator_residual, 1e-8,
             "10 coherent-state label pairs");
  }
  {
    const std::vector<SectorPoint> pts = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const RankOneReport rank = rank_one_report(pts, {0.2, 0.1, 0.05}, quad);
    bool monotone = true;
    for (size_t i = 1; i < rank.sigma_ratio.size(); ++i)
      monotone = monotone && rank.sigma_ratio[i] <= rank.sigma_ratio[i - 1];
    check_true(r, "rank-one ratio monotone in delta", monotone, rank.sigma_ratio.back(),
               rank.sigma_ratio.front());
    check_true(r, "rank-one collapse slope 2 +- 0.3",
               std::abs(rank.fitted_slope - 2.0) <= 0.3, rank.fitted_slope, 2.0,
               "log-log slope of sigma2/sigma1");
  }
  return r;
}

SuiteReport run_suite(const std::string& name, unsigned seed) {
  if (name == "gap") return run_gap_suite(seed);
  if (name == "reparam") return run_reparam_suite(seed);
  if (name == "elevation") return run_elevation_suite(seed);
  throw std::invalid_argument("unknown verification suite '" + name +
                              "' (expected gap, reparam, or elevation)");
}

}  // namespace qproj
