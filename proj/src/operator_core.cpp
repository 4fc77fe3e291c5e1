#include "qproj/operator_core.hpp"

#include <cmath>

#include <lapacke.h>

namespace qproj {

ComplexMatrix ladder_operator(int n) {
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
  return a;
}

OperatorMatrix build_operator(const OperatorExpr& expr, const BasisSpec& basis) {
  if (basis.kind != BasisSpec::Kind::Fock)
    throw std::invalid_argument("build_operator: polynomial expressions need a Fock basis");
  const int n = basis.dim;
  const ComplexMatrix a = ladder_operator(n);
  const ComplexMatrix ad = a.adjoint();
  const Complex i_unit(0.0, 1.0);
  const ComplexMatrix Q = (a + ad) / std::sqrt(2.0);
  const ComplexMatrix P = -i_unit * (a - ad) / std::sqrt(2.0);

  // Cached powers keep Q^4-style terms cheap.
  std::vector<ComplexMatrix> p_pow{ComplexMatrix::Identity(n, n)};
  std::vector<ComplexMatrix> q_pow{ComplexMatrix::Identity(n, n)};
  auto power = [](std::vector<ComplexMatrix>& cache, const ComplexMatrix& base,
                  int k) -> const ComplexMatrix& {
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * base);
    return cache[k];
  };

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& t : expr.terms) {
    if (!std::isfinite(t.coeff))
      throw std::invalid_argument("build_operator: non-finite coefficient");
    const ComplexMatrix& pp = power(p_pow, P, t.p_power);
    const ComplexMatrix& qq = power(q_pow, Q, t.q_power);
    out += (0.5 * t.coeff) * (pp * qq + qq * pp);
  }
  if (!is_hermitian(out))
    throw std::invalid_argument("build_operator: expression did not produce a Hermitian matrix");
  return OperatorMatrix::dense(std::move(out), basis);
}

OperatorMatrix build_operator(const std::function<double(double)>& potential,
                              const BasisSpec& basis) {
  if (basis.kind != BasisSpec::Kind::Grid)
    throw std::invalid_argument("build_operator: potentials need a grid basis");
  const GridSpec& g = basis.grid;
  const int m = g.interior();
  const double h = g.spacing();
  RealVector diag(m), sub(m - 1);
  for (int j = 0; j < m; ++j) {
    const double v = potential(g.node(j));
    if (!std::isfinite(v))
      throw std::invalid_argument("build_operator: potential non-finite at q = " +
                                  std::to_string(g.node(j)));
    diag[j] = 2.0 / (h * h) + v;
    if (j + 1 < m) sub[j] = -1.0 / (h * h);
  }
  return OperatorMatrix::tridiagonal(std::move(diag), std::move(sub), basis);
}

StateVector coherent_state(const PhasePoint& point, const BasisSpec& basis,
                           double* norm_defect) {
  if (!std::isfinite(point.p) || !std::isfinite(point.q))
    throw std::invalid_argument("coherent_state: labels must be finite");
  StateVector st;
  st.basis = basis;
  if (basis.kind == BasisSpec::Kind::Fock) {
    const int n = basis.dim;
    st.components.resize(n);
    const Complex alpha = Complex(-point.q, point.p) / std::sqrt(2.0);
    Complex c = std::exp(Complex(-(point.p * point.p + point.q * point.q) / 4.0,
                                 point.p * point.q / 2.0));
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
      st.components[k] = c;
      sumsq += std::norm(c);
      c *= alpha / std::sqrt(double(k + 1));
    }
    if (norm_defect) *norm_defect = std::abs(1.0 - sumsq);
  } else {
    const GridSpec& g = basis.grid;
    const int m = g.interior();
    const double h = g.spacing();
    st.components.resize(m);
    const double amp = std::pow(std::acos(-1.0), -0.25) * std::sqrt(h);
    double sumsq = 0.0;
    for (int j = 0; j < m; ++j) {
      const double u = g.node(j) + point.q;
      st.components[j] = amp * std::exp(Complex(-u * u / 2.0, point.p * u));
      sumsq += std::norm(st.components[j]);
    }
    if (norm_defect) *norm_defect = std::abs(1.0 - sumsq);
  }
  return st;
}

namespace {

void require_hermitian(const OperatorMatrix& op, const char* who) {
  if (!op.hermitian()) throw std::invalid_argument(std::string(who) + ": operator not Hermitian");
}

RealVector tridiag_eigenvalues(const OperatorMatrix& op) {
  RealVector d = op.diag(), e = op.sub();
  const int n = op.dim();
  const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', n, d.data(), e.data(), nullptr, n);
  if (info != 0) throw std::runtime_error("tridiag_eigenvalues: dstev failed");
  return d;
}

}  // namespace

EigenSystem eigendecompose(const OperatorMatrix& op) {
  require_hermitian(op, "eigendecompose");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op.entries());
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector eigenvalues_of(const OperatorMatrix& op) {
  require_hermitian(op, "eigenvalues_of");
  if (op.storage() == OperatorMatrix::Storage::Tridiagonal) return tridiag_eigenvalues(op);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op.entries(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues_of: solver failed");
  return es.eigenvalues();
}

SelectedEigenPairs lowest_eigenpairs(const OperatorMatrix& op, int count) {
  require_hermitian(op, "lowest_eigenpairs");
  if (op.storage() != OperatorMatrix::Storage::Tridiagonal)
    throw std::invalid_argument("lowest_eigenpairs: tridiagonal operators only");
  const int n = op.dim();
  count = std::min(count, n);
  RealVector d = op.diag(), e = op.sub();
  SelectedEigenPairs out;
  out.values.resize(count);
  out.vectors.resize(n, count);
  std::vector<lapack_int> isuppz(2 * std::max(1, count));
  lapack_int found = 0;
  const int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                                  count, 0.0, &found, out.values.data(), out.vectors.data(), n,
                                  isuppz.data());
  if (info != 0 || found != count) throw std::runtime_error("lowest_eigenpairs: dstevr failed");
  return out;
}

SelectedEigenPairs eigenpairs_in_range(const OperatorMatrix& op, double lo, double hi) {
  require_hermitian(op, "eigenpairs_in_range");
  if (op.storage() != OperatorMatrix::Storage::Tridiagonal)
    throw std::invalid_argument("eigenpairs_in_range: tridiagonal operators only");
  const int n = op.dim();
  RealVector d = op.diag(), e = op.sub();
  RealVector values(n);
  RealMatrix vectors(n, n);
  std::vector<lapack_int> isuppz(2 * n);
  lapack_int found = 0;
  const int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'V', n, d.data(), e.data(), lo, hi, 0, 0,
                                  0.0, &found, values.data(), vectors.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("eigenpairs_in_range: dstevr failed");
  SelectedEigenPairs out;
  out.values = values.head(found);
  out.vectors = vectors.leftCols(found);
  return out;
}

double operator_norm(const OperatorMatrix& op) {
  require_hermitian(op, "operator_norm");
  const RealVector w = eigenvalues_of(op);
  return std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
}

ComplexMatrix evolution_operator(const OperatorMatrix& op, double tau) {
  const EigenSystem es = eigendecompose(op);
  ComplexVector phase(es.eigenvalues.size());
  for (int i = 0; i < es.eigenvalues.size(); ++i)
    phase[i] = std::exp(Complex(0.0, -tau * es.eigenvalues[i]));
  return es.eigenvectors * phase.asDiagonal() * es.eigenvectors.adjoint();
}

}  // namespace qproj
