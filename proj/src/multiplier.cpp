#include "qproj/multiplier.hpp"

#include <cmath>
#include <random>

#include "qproj/projector.hpp"

namespace qproj {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Columns spanning the |eigenvalue| < delta window of a dense Hermitian
// factor operator.
ComplexMatrix window_basis(const OperatorMatrix& op, double delta) {
  const EigenSystem es = eigendecompose(op);
  std::vector<int> keep;
  for (int i = 0; i < es.eigenvalues.size(); ++i)
    if (std::abs(es.eigenvalues[i]) < delta) keep.push_back(i);
  ComplexMatrix u(op.dim(), keep.size());
  for (size_t c = 0; c < keep.size(); ++c) u.col(c) = es.eigenvectors.col(keep[c]);
  return u;
}

}  // namespace

OperatorMatrix grid_momentum(const GridSpec& grid) {
  grid.validate();
  const BasisSpec basis = BasisSpec::grid_basis(grid);
  const int m = basis.size();
  const double h = grid.spacing();
  ComplexMatrix pi_op = ComplexMatrix::Zero(m, m);
  const Complex coupling(0.0, -1.0 / (2.0 * h));
  for (int j = 0; j + 1 < m; ++j) {
    pi_op(j, j + 1) = coupling;
    pi_op(j + 1, j) = -coupling;
  }
  return OperatorMatrix::dense(std::move(pi_op), basis);
}

KernelValue pi_sector_kernel(const SectorPoint& a, const SectorPoint& b, double delta,
                             const QuadratureSpec& quad) {
  quad.validate();
  if (delta <= 0) throw std::invalid_argument("pi_sector_kernel: delta must be positive");
  if (!std::isfinite(a.pi) || !std::isfinite(a.lambda) || !std::isfinite(b.pi) ||
      !std::isfinite(b.lambda))
    throw std::invalid_argument("pi_sector_kernel: labels must be finite");
  const double dl = b.lambda - a.lambda;
  auto f = [&](double k) {
    return std::exp(Complex(-0.5 * (k - a.pi) * (k - a.pi) - 0.5 * (k - b.pi) * (k - b.pi),
                            k * dl)) /
           std::sqrt(kPi);
  };
  const int n = std::max(24, quad.node_count / 2);
  const Complex v1 = integrate_gl(f, -delta, delta, n);
  const Complex v2 = integrate_gl(f, -delta, delta, n / 2);
  KernelValue out;
  out.value = v1;
  out.estimated_error = std::abs(v1 - v2);
  out.method = KernelValue::Method::Quadrature;
  out.converged = out.estimated_error <= 1e-10 * std::max(1.0, std::abs(v1));
  return out;
}

FactorizationReport factorization_residual(const OperatorMatrix& phi,
                                           const OperatorMatrix& pi_op, double delta,
                                           int sample_pairs, unsigned seed,
                                           double evolution_time) {
  if (!phi.hermitian() || !pi_op.hermitian())
    throw std::invalid_argument("factorization_residual: factors must be Hermitian");
  if (delta <= 0) throw std::invalid_argument("factorization_residual: delta must be positive");
  const int n1 = phi.dim(), n2 = pi_op.dim();
  const long joint_dim = static_cast<long>(n1) * n2;
  if (joint_dim > (1L << 14))
    throw std::invalid_argument(
        "factorization_residual: tensor-product dimension " + std::to_string(joint_dim) +
        " exceeds 2^14; shrink the factors");
  if (phi.basis().kind != BasisSpec::Kind::Fock)
    throw std::invalid_argument("factorization_residual: system factor must be a Fock operator");
  if (pi_op.basis().kind != BasisSpec::Kind::Grid)
    throw std::invalid_argument(
        "factorization_residual: multiplier factor must be a grid momentum operator");

  // Joint path.  In system-major index order (i, j) -> i*n2 + j the operator
  // I (x) Pi is block-diagonal with blocks Pi, and Phi (x) I becomes
  // block-diagonal with blocks Phi after permuting to multiplier-major
  // order; both window projectors come from solving those diagonal blocks.
  // Range bases: U_B columns live per system index, U_A columns per
  // multiplier index.
  int rank_a = 0, rank_b = 0;
  std::vector<ComplexMatrix> a_basis(n2), b_basis(n1);
  for (int j = 0; j < n2; ++j) {
    // Diagonal block j of Phi (x) I in multiplier-major order is Phi itself.
    a_basis[j] = window_basis(phi, delta);
    rank_a += static_cast<int>(a_basis[j].cols());
  }
  for (int i = 0; i < n1; ++i) {
    // Diagonal block i of I (x) Pi in system-major order is Pi itself.
    b_basis[i] = window_basis(pi_op, delta);
    rank_b += static_cast<int>(b_basis[i].cols());
  }

  ComplexMatrix u_a = ComplexMatrix::Zero(joint_dim, rank_a);
  {
    int col = 0;
    for (int j = 0; j < n2; ++j)
      for (int c = 0; c < a_basis[j].cols(); ++c, ++col)
        for (int i = 0; i < n1; ++i) u_a(static_cast<long>(i) * n2 + j, col) = a_basis[j](i, c);
  }
  ComplexMatrix u_b = ComplexMatrix::Zero(joint_dim, rank_b);
  {
    int col = 0;
    for (int i = 0; i < n1; ++i)
      for (int c = 0; c < b_basis[i].cols(); ++c, ++col)
        for (int j = 0; j < n2; ++j) u_b(static_cast<long>(i) * n2 + j, col) = b_basis[i](j, c);
  }

  // Factor path: Kronecker product of the single-factor window projectors.
  const ComplexMatrix u_phi = window_basis(phi, delta);
  const ComplexMatrix u_pi = window_basis(pi_op, delta);
  const int rank_phi = static_cast<int>(u_phi.cols());
  const int rank_pi = static_cast<int>(u_pi.cols());
  ComplexMatrix u_k(joint_dim, rank_phi * rank_pi);
  for (int a = 0; a < rank_phi; ++a)
    for (int b = 0; b < rank_pi; ++b)
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
          u_k(static_cast<long>(i) * n2 + j, a * rank_pi + b) = u_phi(i, a) * u_pi(j, b);

  // || U_A M U_B^+ - U_K U_K^+ || with M = U_A^+ U_B, evaluated on an
  // orthonormal basis of range(U_B) + range(U_K); the difference vanishes on
  // the complement.
  const ComplexMatrix m_ab = u_a.adjoint() * u_b;
  double residual = 0.0;
  if (u_b.cols() + u_k.cols() > 0) {
    ComplexMatrix span(joint_dim, u_b.cols() + u_k.cols());
    span << u_b, u_k;
    Eigen::HouseholderQR<ComplexMatrix> qr(span);
    ComplexMatrix s_basis =
        qr.householderQ() * ComplexMatrix::Identity(joint_dim, span.cols());
    const ComplexMatrix t =
        u_a * (m_ab * (u_b.adjoint() * s_basis)) - u_k * (u_k.adjoint() * s_basis);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> tt(t.adjoint() * t, Eigen::EigenvaluesOnly);
    residual = std::sqrt(std::max(0.0, tt.eigenvalues().maxCoeff()));
  }

  FactorizationReport report;
  report.projector_residual = residual;
  report.rank_phi = rank_phi;
  report.rank_pi = rank_pi;
  report.rank_total = std::min(rank_a, rank_b);

  // Sampled propagator factorization: <a''| e^{-iHT} E |a'> against the
  // product of the factor matrix elements, H = P^2/2 on the system factor.
  const OperatorMatrix h_sys =
      build_operator(OperatorExpr{}.add(0.5, 2, 0), phi.basis());
  const ComplexMatrix evolution = evolution_operator(h_sys, evolution_time);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < sample_pairs; ++trial) {
    const PhasePoint sys_in = PhasePoint::pq(unit(rng), unit(rng));
    const PhasePoint sys_out = PhasePoint::pq(unit(rng), unit(rng));
    const SectorPoint mult_in{unit(rng), unit(rng)};
    const SectorPoint mult_out{unit(rng), unit(rng)};

    const ComplexVector chi_sys_in = coherent_state(sys_in, phi.basis()).components;
    const ComplexVector chi_sys_out = coherent_state(sys_out, phi.basis()).components;
    const ComplexVector chi_mult_in =
        coherent_state(PhasePoint::pq(mult_in.pi, mult_in.lambda), pi_op.basis()).components;
    const ComplexVector chi_mult_out =
        coherent_state(PhasePoint::pq(mult_out.pi, mult_out.lambda), pi_op.basis()).components;

    ComplexVector w_in(joint_dim), w_out(joint_dim);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        w_in[static_cast<long>(i) * n2 + j] = chi_sys_in[i] * chi_mult_in[j];
        w_out[static_cast<long>(i) * n2 + j] = chi_sys_out[i] * chi_mult_out[j];
      }

    // E_total w = U_A (M (U_B^+ w)); then (e^{-iHT} (x) I) via a reshaped
    // left-multiply on the system index.
    const ComplexVector projected = u_a * (m_ab * (u_b.adjoint() * w_in));
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        w_mat(projected.data(), n1, n2);
    const ComplexMatrix evolved = evolution * w_mat;
    Complex joint{0, 0};
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        joint += std::conj(w_out[static_cast<long>(i) * n2 + j]) * evolved(i, j);

    const Complex sys_factor =
        chi_sys_out.adjoint() * evolution * (u_phi * (u_phi.adjoint() * chi_sys_in));
    const Complex mult_factor =
        chi_mult_out.adjoint() * (u_pi * (u_pi.adjoint() * chi_mult_in));
    worst = std::max(worst, std::abs(joint - sys_factor * mult_factor));
  }
  report.propagator_residual = worst;
  return report;
}

RankOneReport rank_one_report(const std::vector<SectorPoint>& sample_points,
                              const std::vector<double>& delta_sweep,
                              const QuadratureSpec& quad) {
  RankOneReport report;
  if (sample_points.size() == 1) {
    report.rank = 1;
    report.delta_values = delta_sweep;
    report.sigma_ratio.assign(delta_sweep.size(), 0.0);
    return report;
  }
  if (sample_points.size() < 4)
    throw std::invalid_argument("rank_one_report: need at least 4 sample points");
  if (delta_sweep.size() < 3)
    throw std::invalid_argument("rank_one_report: need at least 3 delta values");
  for (size_t i = 1; i < delta_sweep.size(); ++i)
    if (!(delta_sweep[i] < delta_sweep[i - 1]))
      throw std::invalid_argument("rank_one_report: delta sweep must decrease");

  const int n = static_cast<int>(sample_points.size());
  for (const double delta : delta_sweep) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = pi_sector_kernel(sample_points[i], sample_points[j], delta, quad).value;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const double s1 = svd.singularValues()[0];
    if (s1 <= 0.0) throw std::invalid_argument("rank_one_report: degenerate sample set");
    const double ratio = svd.singularValues()[1] / s1;
    if (!(ratio >= 0.0 && ratio <= 1.0))
      throw std::runtime_error("rank_one_report: singular-value ratio left [0,1]");
    report.delta_values.push_back(delta);
    report.sigma_ratio.push_back(ratio);
  }
  report.rank = n;

  // Least-squares log-log slope of the ratio against delta.
  const int m = static_cast<int>(delta_sweep.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(report.delta_values[i]);
    const double y = std::log(std::max(report.sigma_ratio[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  report.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return report;
}

}  // namespace qproj
