#pragma once

#include <atomic>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace qproj {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

constexpr double kHermitianTol = 1e-12;

/// Uniform position grid on [q_min, q_max] with `points` nodes inclusive of
/// both walls.  Operators built on a grid act on the points-2 interior nodes
/// (Dirichlet boundary conditions).
struct GridSpec {
  double q_min = -1.0;
  double q_max = 1.0;
  int points = 0;

  double spacing() const { return (q_max - q_min) / (points - 1); }
  int interior() const { return points - 2; }
  double node(int j) const { return q_min + spacing() * (j + 1); }  // interior node j

  void validate() const {
    if (!(q_min < q_max)) throw std::invalid_argument("GridSpec: q_min must be < q_max");
    if (points < 8) throw std::invalid_argument("GridSpec: need at least 8 points");
  }
};

/// Truncated Hilbert-space basis: either a Fock basis of dimension `dim`
/// or the interior of a position grid.
struct BasisSpec {
  enum class Kind { Fock, Grid };
  Kind kind = Kind::Fock;
  int dim = 0;          // Fock dimension N
  GridSpec grid;        // populated when kind == Grid

  static BasisSpec fock(int n) {
    if (n < 2) throw std::invalid_argument("BasisSpec: Fock dimension must be >= 2");
    BasisSpec b;
    b.kind = Kind::Fock;
    b.dim = n;
    return b;
  }
  static BasisSpec grid_basis(const GridSpec& g) {
    g.validate();
    BasisSpec b;
    b.kind = Kind::Grid;
    b.grid = g;
    b.dim = g.interior();
    return b;
  }

  int size() const { return kind == Kind::Fock ? dim : grid.interior(); }
  bool operator==(const BasisSpec& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Fock) return dim == o.dim;
    return grid.q_min == o.grid.q_min && grid.q_max == o.grid.q_max &&
           grid.points == o.grid.points;
  }
};

/// Phase-space label of a coherent state.  The extended sector (s,t) and the
/// multiplier sector (pi,lambda) are optional.
struct PhasePoint {
  double p = 0.0;
  double q = 0.0;
  std::optional<double> s;
  std::optional<double> t;
  std::optional<double> pi;
  std::optional<double> lambda;

  static PhasePoint pq(double p, double q) { return {p, q, {}, {}, {}, {}}; }
  static PhasePoint pqt(double p, double q, double t) { return {p, q, {}, t, {}, {}}; }
  static PhasePoint pqst(double p, double q, double s, double t) {
    return {p, q, s, t, {}, {}};
  }
};

/// Coherent-state label of the multiplier (Pi, Lambda) sector.
struct SectorPoint {
  double pi = 0.0;
  double lambda = 0.0;
};

struct StateVector {
  ComplexVector components;
  BasisSpec basis;

  double norm() const { return components.norm(); }
};

/// Dense complex Hermitian-capable matrix with basis metadata.  Grid
/// operators (always real tridiagonal by construction) are kept in a compact
/// tridiagonal form so large grids stay solvable; they materialize to dense
/// on demand below a size guard.
class OperatorMatrix {
 public:
  enum class Storage { Dense, Tridiagonal };

  OperatorMatrix() = default;
  OperatorMatrix(const OperatorMatrix& o) { *this = o; }
  OperatorMatrix(OperatorMatrix&& o) noexcept { *this = std::move(o); }
  OperatorMatrix& operator=(const OperatorMatrix& o) {
    storage_ = o.storage_;
    dim_ = o.dim_;
    basis_ = o.basis_;
    hermitian_ = o.hermitian_;
    entries_ = o.entries_;
    materialized_.store(o.materialized_.load());
    diag_ = o.diag_;
    sub_ = o.sub_;
    return *this;
  }
  OperatorMatrix& operator=(OperatorMatrix&& o) noexcept {
    storage_ = o.storage_;
    dim_ = o.dim_;
    basis_ = std::move(o.basis_);
    hermitian_ = o.hermitian_;
    entries_ = std::move(o.entries_);
    materialized_.store(o.materialized_.load());
    diag_ = std::move(o.diag_);
    sub_ = std::move(o.sub_);
    return *this;
  }

  static OperatorMatrix dense(ComplexMatrix m, const BasisSpec& basis);
  static OperatorMatrix tridiagonal(RealVector diag, RealVector sub, const BasisSpec& basis);

  Storage storage() const { return storage_; }
  int dim() const { return dim_; }
  const BasisSpec& basis() const { return basis_; }
  bool hermitian() const { return hermitian_; }

  /// Dense entries.  Tridiagonal operators materialize up to `dense_guard`.
  const ComplexMatrix& entries() const;
  Complex entry(int r, int c) const;

  const RealVector& diag() const { return diag_; }
  const RealVector& sub() const { return sub_; }

  double max_abs() const;

  static constexpr int dense_guard = 4096;

 private:
  Storage storage_ = Storage::Dense;
  int dim_ = 0;
  BasisSpec basis_;
  bool hermitian_ = false;
  mutable ComplexMatrix entries_;   // dense storage (or cached materialization)
  mutable std::atomic<bool> materialized_{false};
  RealVector diag_, sub_;           // tridiagonal storage
};

/// Measures max |A - A^dagger| against kHermitianTol * max|A|.
bool is_hermitian(const ComplexMatrix& m, double scale_tol = kHermitianTol);

}  // namespace qproj
