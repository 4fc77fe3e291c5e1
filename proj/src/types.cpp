#include "qproj/types.hpp"

#include <mutex>

namespace qproj {

bool is_hermitian(const ComplexMatrix& m, double scale_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return defect <= scale_tol * scale;
}

OperatorMatrix OperatorMatrix::dense(ComplexMatrix m, const BasisSpec& basis) {
  if (m.rows() != m.cols()) throw std::invalid_argument("OperatorMatrix: matrix must be square");
  if (m.rows() != basis.size())
    throw std::invalid_argument("OperatorMatrix: dimension does not match basis");
  OperatorMatrix op;
  op.storage_ = Storage::Dense;
  op.dim_ = static_cast<int>(m.rows());
  op.basis_ = basis;
  op.hermitian_ = is_hermitian(m);
  op.entries_ = std::move(m);
  op.materialized_ = true;
  return op;
}

OperatorMatrix OperatorMatrix::tridiagonal(RealVector diag, RealVector sub,
                                           const BasisSpec& basis) {
  if (sub.size() != diag.size() - 1)
    throw std::invalid_argument("OperatorMatrix: subdiagonal length must be dim-1");
  if (diag.size() != basis.size())
    throw std::invalid_argument("OperatorMatrix: dimension does not match basis");
  OperatorMatrix op;
  op.storage_ = Storage::Tridiagonal;
  op.dim_ = static_cast<int>(diag.size());
  op.basis_ = basis;
  op.hermitian_ = true;  // real symmetric by construction
  op.diag_ = std::move(diag);
  op.sub_ = std::move(sub);
  return op;
}

namespace {
// Guards lazy materialization so concurrent readers stay safe; construction
// itself is rare, so one coarse lock is enough.
std::mutex materialize_mutex;
}  // namespace

const ComplexMatrix& OperatorMatrix::entries() const {
  if (materialized_) return entries_;
  if (dim_ > dense_guard)
    throw std::runtime_error(
        "OperatorMatrix: refusing to materialize a tridiagonal operator of dimension " +
        std::to_string(dim_) + " (> " + std::to_string(dense_guard) + ")");
  std::lock_guard<std::mutex> lock(materialize_mutex);
  if (materialized_) return entries_;
  ComplexMatrix m = ComplexMatrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    m(i, i) = diag_[i];
    if (i + 1 < dim_) {
      m(i, i + 1) = sub_[i];
      m(i + 1, i) = sub_[i];
    }
  }
  entries_ = std::move(m);
  materialized_ = true;
  return entries_;
}

Complex OperatorMatrix::entry(int r, int c) const {
  if (storage_ == Storage::Dense || materialized_) return entries()(r, c);
  if (r == c) return diag_[r];
  if (r == c + 1) return sub_[c];
  if (c == r + 1) return sub_[r];
  return 0.0;
}

double OperatorMatrix::max_abs() const {
  if (storage_ == Storage::Tridiagonal && !materialized_) {
    double m = diag_.cwiseAbs().maxCoeff();
    if (sub_.size() > 0) m = std::max(m, sub_.cwiseAbs().maxCoeff());
    return m;
  }
  return entries_.cwiseAbs().maxCoeff();
}

}  // namespace qproj
