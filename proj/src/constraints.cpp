#include "qproj/constraints.hpp"

#include <cmath>

namespace qproj {

namespace {

QuarticConstraint snapped(const OperatorExpr& expr, int fock_dim, const SnapPolicy& policy) {
  if (fock_dim < 16) throw std::invalid_argument("constraint: need Fock dimension >= 16");
  const BasisSpec basis = BasisSpec::fock(fock_dim);
  const OperatorMatrix h = build_operator(expr, basis);
  const RealVector levels = eigenvalues_of(h);

  double c = 0.0;
  if (policy.mode == SnapPolicy::Mode::SnapToLevel) {
    if (policy.level < 0 || policy.level >= levels.size())
      throw std::invalid_argument("constraint: snap level outside the computed spectrum");
    c = levels[policy.level];
  } else {
    c = policy.c;
    const double eps = 1e-8 * std::max(std::abs(levels[0]), std::abs(levels[levels.size() - 1]));
    double nearest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < levels.size(); ++i) nearest = std::min(nearest, std::abs(levels[i] - c));
    if (nearest > eps)
      throw std::invalid_argument(
          "constraint: explicit c misses the spectrum by " + std::to_string(nearest) +
          "; use snap_to_level so the constraint has an exact zero mode");
  }

  ComplexMatrix phi = h.entries() - c * ComplexMatrix::Identity(fock_dim, fock_dim);
  QuarticConstraint out;
  out.op = OperatorMatrix::dense(std::move(phi), basis);
  out.c = c;
  out.gap = spectral_gap(out.op);
  return out;
}

}  // namespace

QuarticConstraint quartic_constraint(int fock_dim, const SnapPolicy& policy) {
  return snapped(OperatorExpr::quartic(), fock_dim, policy);
}

QuarticConstraint harmonic_constraint(int fock_dim, const SnapPolicy& policy) {
  return snapped(OperatorExpr::harmonic(), fock_dim, policy);
}

double mixed_potential(double q) {
  const double w = 1.0 + q * q;
  return -1.0 / (w * std::sqrt(w)) + q * q / w;
}

double mixed_reference_mode(double q) { return std::exp(-std::sqrt(1.0 + q * q)); }

MixedConstraint mixed_constraint(const GridSpec& grid) {
  grid.validate();
  MixedConstraint out;
  out.op = build_operator(mixed_potential, BasisSpec::grid_basis(grid));
  out.boundary_amplitude =
      std::max(mixed_reference_mode(grid.q_min), mixed_reference_mode(grid.q_max));
  out.box_adequate = out.boundary_amplitude < 1e-14;
  return out;
}

ZeroModeReport zero_mode_report(const OperatorMatrix& op,
                                const std::function<double(double)>& reference) {
  if (!op.hermitian()) throw std::invalid_argument("zero_mode_report: operator not Hermitian");
  if (op.basis().kind != BasisSpec::Kind::Grid)
    throw std::invalid_argument("zero_mode_report: grid operators only");
  const GridSpec& grid = op.basis().grid;
  const int m = grid.interior();

  RealVector ref(m);
  for (int j = 0; j < m; ++j) ref[j] = reference(grid.node(j));
  const double ref_norm = ref.norm();
  if (ref_norm == 0.0)
    throw std::invalid_argument("zero_mode_report: reference vanishes on the grid");
  ref /= ref_norm;

  const RealVector spectrum = eigenvalues_of(op);
  int nearest = 0;
  for (int i = 1; i < spectrum.size(); ++i)
    if (std::abs(spectrum[i]) < std::abs(spectrum[nearest])) nearest = i;

  ZeroModeReport report;
  report.eigenvalue = spectrum[nearest];
  report.grid_spacing = grid.spacing();
  report.gap_above = nearest + 1 < spectrum.size()
                         ? spectrum[nearest + 1] - spectrum[nearest]
                         : std::numeric_limits<double>::infinity();

  // Eigenvector of the located mode only; large grids never need the full
  // eigenvector matrix.
  const double pad = 0.5 * std::min(report.eigenvalue - (nearest > 0 ? spectrum[nearest - 1]
                                                                     : spectrum[0] - 1.0),
                                    report.gap_above);
  const SelectedEigenPairs mode = eigenpairs_in_range(op, report.eigenvalue - pad,
                                                      report.eigenvalue + pad);
  if (mode.values.size() < 1) throw std::runtime_error("zero_mode_report: mode isolation failed");
  report.overlap = std::abs(mode.vectors.col(0).dot(ref));
  return report;
}

}  // namespace qproj
