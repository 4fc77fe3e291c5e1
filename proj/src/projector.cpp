#include "qproj/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "qproj/quadrature.hpp"

namespace qproj {

namespace {
constexpr double kPi = 3.14159265358979323846;

double sinc_at(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void require_hermitian(const OperatorMatrix& op, const char* who) {
  if (!op.hermitian()) throw std::invalid_argument(std::string(who) + ": operator not Hermitian");
}

OperatorMatrix assemble_filtered(const EigenSystem& es, const RealVector& g,
                                 const BasisSpec& basis) {
  ComplexMatrix f = es.eigenvectors * g.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
  // Symmetrize away the last few ulps so the Hermitian flag is clean.
  f = 0.5 * (f + ComplexMatrix(f.adjoint()));
  return OperatorMatrix::dense(std::move(f), basis);
}
}  // namespace

void ProjectorScheme::validate() const {
  switch (kind) {
    case Kind::Spectral:
      if (delta < 0) throw std::invalid_argument("ProjectorScheme: spectral window must be >= 0");
      break;
    case Kind::Sinc:
      if (delta <= 0 || xi_cutoff <= 0)
        throw std::invalid_argument("ProjectorScheme: sinc needs positive delta and xi_cutoff");
      break;
    case Kind::Interval:
      if (L <= 0) throw std::invalid_argument("ProjectorScheme: interval needs positive L");
      break;
    case Kind::Haar:
      if (haar_nodes <= 0) throw std::invalid_argument("ProjectorScheme: haar needs nodes > 0");
      break;
  }
}

double default_zero_tolerance(const OperatorMatrix& op) {
  return 1e-8 * operator_norm(op);
}

OperatorMatrix spectral_projector(const OperatorMatrix& op, double delta, double zero_tolerance) {
  require_hermitian(op, "spectral_projector");
  if (delta < 0) throw std::invalid_argument("spectral_projector: window must be >= 0");
  const double window = std::max(delta, zero_tolerance);
  const EigenSystem es = eigendecompose(op);
  RealVector g(es.eigenvalues.size());
  for (int i = 0; i < g.size(); ++i) g[i] = std::abs(es.eigenvalues[i]) < window ? 1.0 : 0.0;
  return assemble_filtered(es, g, op.basis());
}

int projector_rank(const OperatorMatrix& projector, double tol) {
  const double tr = projector.entries().trace().real();
  return static_cast<int>(std::floor(tr + tol));
}

SincFilterValue sinc_filter(double phi, double delta, double xi_cutoff, int max_intervals) {
  SincFilterValue out;
  const double oscillations = xi_cutoff * (std::abs(phi) + delta) / (2.0 * kPi);
  // Adaptive GK15 wants a dozen intervals per oscillation to resolve and
  // certify; beyond that budget the sine-integral closed form takes over.
  if (oscillations <= max_intervals / 12.0) {
    auto integrand = [phi, delta](double xi) {
      const double s = xi == 0.0 ? delta : std::sin(delta * xi) / xi;
      return Complex(std::cos(phi * xi) * s, 0.0);
    };
    AdaptiveResult r =
        integrate_adaptive(integrand, 0.0, xi_cutoff, 1e-12, 1e-12, max_intervals);
    out.value = 2.0 / kPi * r.value.real();
    out.error = 2.0 / kPi * r.error;
    out.converged = r.converged;
    out.via_quadrature = true;
  } else {
    out.value = (sine_integral((delta + phi) * xi_cutoff) +
                 sine_integral((delta - phi) * xi_cutoff)) /
                kPi;
    out.error = 1e-14;
    out.converged = true;
    out.via_quadrature = false;
  }
  return out;
}

OperatorMatrix averaged_projector(const OperatorMatrix& op, const ProjectorScheme& scheme,
                                  FilterDiagnostics* diag) {
  require_hermitian(op, "averaged_projector");
  scheme.validate();
  const EigenSystem es = eigendecompose(op);
  const int n = static_cast<int>(es.eigenvalues.size());
  RealVector g(n);
  FilterDiagnostics local;
  switch (scheme.kind) {
    case ProjectorScheme::Kind::Spectral: {
      const double window = std::max(scheme.delta, default_zero_tolerance(op));
      for (int i = 0; i < n; ++i) g[i] = std::abs(es.eigenvalues[i]) < window ? 1.0 : 0.0;
      break;
    }
    case ProjectorScheme::Kind::Interval:
      for (int i = 0; i < n; ++i) g[i] = sinc_at(scheme.L * es.eigenvalues[i]);
      break;
    case ProjectorScheme::Kind::Sinc:
      for (int i = 0; i < n; ++i) {
        const SincFilterValue v =
            sinc_filter(es.eigenvalues[i], scheme.delta, scheme.xi_cutoff, scheme.sinc_nodes);
        g[i] = v.value;
        local.converged = local.converged && v.converged;
        local.worst_error = std::max(local.worst_error, v.error);
      }
      if (!local.converged && diag == nullptr)
        throw std::runtime_error(
            "averaged_projector: sinc quadrature did not converge at the requested Xi");
      break;
    case ProjectorScheme::Kind::Haar: {
      for (int i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues[i] - std::round(es.eigenvalues[i])) > 1e-8)
          throw std::invalid_argument(
              "averaged_projector: haar averaging requires an integer spectrum");
      for (int i = 0; i < n; ++i) {
        Complex sum{0, 0};
        for (int j = 0; j < scheme.haar_nodes; ++j) {
          const double xi = 2.0 * kPi * j / scheme.haar_nodes;
          sum += std::exp(Complex(0.0, -xi * es.eigenvalues[i]));
        }
        g[i] = (sum / double(scheme.haar_nodes)).real();
      }
      break;
    }
  }
  if (diag) *diag = local;
  return assemble_filtered(es, g, op.basis());
}

ComplexMatrix averaged_projector_direct(const OperatorMatrix& op, const ProjectorScheme& scheme) {
  require_hermitian(op, "averaged_projector_direct");
  scheme.validate();
  const ComplexMatrix& phi = op.entries();
  const int n = op.dim();
  const Complex mi(0.0, -1.0);
  auto expm = [&](double xi) -> ComplexMatrix {
    ComplexMatrix a = mi * xi * phi;
    return a.exp();
  };
  // Budget guard: each panel costs matrix exponentials.
  const double span = scheme.kind == ProjectorScheme::Kind::Interval ? scheme.L
                      : scheme.kind == ProjectorScheme::Kind::Sinc   ? scheme.xi_cutoff
                                                                     : 2.0 * kPi;
  const double oscillations = span * operator_norm(op) / (2.0 * kPi);
  if (scheme.kind != ProjectorScheme::Kind::Haar && oscillations > 2000)
    throw std::invalid_argument(
        "averaged_projector_direct: oscillation budget exceeded; use the spectral route");

  switch (scheme.kind) {
    case ProjectorScheme::Kind::Haar: {
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      for (int j = 0; j < scheme.haar_nodes; ++j)
        sum += expm(2.0 * kPi * j / scheme.haar_nodes);
      return sum / double(scheme.haar_nodes);
    }
    case ProjectorScheme::Kind::Interval: {
      const int panels = std::max(8, static_cast<int>(4 * oscillations) + 1);
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      const auto& rule = gauss_legendre(8);
      const double w = 2.0 * scheme.L / panels;
      for (int p = 0; p < panels; ++p) {
        const double a = -scheme.L + p * w;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
          sum += (0.5 * w * rule.weights[i]) * expm(a + 0.5 * w * (rule.nodes[i] + 1.0));
      }
      return sum / (2.0 * scheme.L);
    }
    case ProjectorScheme::Kind::Sinc: {
      const int panels = std::max(8, static_cast<int>(4 * oscillations) + 1);
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      const auto& rule = gauss_legendre(8);
      const double w = 2.0 * scheme.xi_cutoff / panels;
      for (int p = 0; p < panels; ++p) {
        const double a = -scheme.xi_cutoff + p * w;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
          const double xi = a + 0.5 * w * (rule.nodes[i] + 1.0);
          const double weight = xi == 0.0 ? scheme.delta / kPi : std::sin(scheme.delta * xi) / (kPi * xi);
          sum += (0.5 * w * rule.weights[i] * weight) * expm(xi);
        }
      }
      return sum;
    }
    case ProjectorScheme::Kind::Spectral:
      throw std::invalid_argument("averaged_projector_direct: spectral scheme has no xi-integral");
  }
  throw std::logic_error("unreachable");
}

GapReport spectral_gap(const OperatorMatrix& op, double zero_tolerance) {
  require_hermitian(op, "spectral_gap");
  const RealVector w = eigenvalues_of(op);
  GapReport report;
  report.zero_tolerance = zero_tolerance;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    const double a = std::abs(w[i]);
    if (a <= zero_tolerance)
      ++report.zero_multiplicity;
    else
      gap = std::min(gap, a);
  }
  if (report.zero_multiplicity == 0)
    throw std::runtime_error(
        "spectral_gap: no eigenvalue within the zero tolerance; snap the constant c onto the "
        "spectrum (constraint_zoo snap policy)");
  report.delta_cap = std::isfinite(gap) ? gap : 0.0;
  std::vector<int> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return std::abs(w[a]) < std::abs(w[b]); });
  const int excerpt = std::min<int>(8, static_cast<int>(idx.size()));
  for (int i = 0; i < excerpt; ++i) report.spectrum_excerpt.push_back(w[idx[i]]);
  return report;
}

GapReport spectral_gap(const OperatorMatrix& op) {
  return spectral_gap(op, default_zero_tolerance(op));
}

BoundReport bound_report(const OperatorMatrix& op, double L, double zero_tolerance) {
  require_hermitian(op, "bound_report");
  if (L <= 0) throw std::invalid_argument("bound_report: L must be positive");
  const GapReport gap = spectral_gap(op, zero_tolerance);
  if (gap.delta_cap <= 0) throw std::invalid_argument("bound_report: bound undefined at Delta=0");

  // Filter route: max over nonzero eigenvalues of |sin(L phi)/(L phi)|.
  const RealVector w = eigenvalues_of(op);
  double filter_max = 0.0;
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) > zero_tolerance)
      filter_max = std::max(filter_max, std::abs(sinc_at(L * w[i])));

  double measured = filter_max;
  if (op.dim() <= OperatorMatrix::dense_guard) {
    // Matrix route: spectral norm of F - E from a fresh decomposition.
    const OperatorMatrix f = averaged_projector(op, ProjectorScheme::interval(L));
    const OperatorMatrix e = spectral_projector(op, 0.0, zero_tolerance);
    const OperatorMatrix diff =
        OperatorMatrix::dense(f.entries() - e.entries(), op.basis());
    measured = operator_norm(diff);
    if (std::abs(measured - filter_max) > 1e-12)
      throw std::runtime_error("bound_report: matrix and filter norms disagree beyond 1e-12");
  }

  BoundReport report;
  report.L = L;
  report.measured_norm = measured;
  report.bound = 1.0 / (L * gap.delta_cap);
  report.saturation_ratio = report.measured_norm / report.bound;
  if (report.measured_norm > report.bound + 1e-12)
    throw std::runtime_error("bound_report: measured norm exceeds 1/(L Delta)");
  return report;
}

BoundReport bound_report(const OperatorMatrix& op, double L) {
  return bound_report(op, L, default_zero_tolerance(op));
}

}  // namespace qproj
