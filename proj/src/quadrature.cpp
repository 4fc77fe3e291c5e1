#include "qproj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include <gsl/gsl_sf_expint.h>

namespace qproj {
namespace {

QuadratureRule make_gauss_legendre(int n) {
  // Newton iteration on P_n; nodes symmetric about 0.
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule make_gauss_hermite(int n) {
  // Golub-Welsch on the Hermite Jacobi matrix.
  RealVector diag = RealVector::Zero(n), sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::acos(-1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = sqrt_pi * v0 * v0;
  }
  return rule;
}

template <typename Maker>
const QuadratureRule& cached_rule(int n, std::map<int, QuadratureRule>& cache, std::mutex& mu,
                                  Maker maker) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, maker(n)).first;
  return it->second;
}

// Kronrod-15 extension of Gauss-7 on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GKInterval {
  double a, b;
  Complex value;
  double error;
  bool operator<(const GKInterval& o) const { return error < o.error; }
};

GKInterval gk15(const std::function<Complex(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex kron{0, 0}, gauss{0, 0};
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const Complex fv = (i == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
    kron += kKronrodWeights[i] * fv;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fv;
  }
  GKInterval iv;
  iv.a = a;
  iv.b = b;
  iv.value = kron * half;
  iv.error = std::abs(kron - gauss) * half;
  return iv;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  return cached_rule(n, cache, mu, make_gauss_legendre);
}

const QuadratureRule& gauss_hermite(int n) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  return cached_rule(n, cache, mu, make_gauss_hermite);
}

AdaptiveResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_intervals) {
  std::priority_queue<GKInterval> heap;
  heap.push(gk15(f, a, b));
  Complex total = heap.top().value;
  double err = heap.top().error;
  int count = 1;
  while (count < max_intervals) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) break;
    GKInterval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    GKInterval left = gk15(f, worst.a, mid);
    GKInterval right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  AdaptiveResult res;
  res.value = total;
  res.error = err;
  res.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
  return res;
}

double sine_integral(double x) { return gsl_sf_Si(x); }

Complex extrapolate_to_zero(std::vector<double> x, std::vector<Complex> y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("extrapolate_to_zero: mismatched or empty input");
  const size_t n = x.size();
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i) {
      y[i] = y[i] + (y[i] - y[i - 1]) * (x[i] / (x[i - level] - x[i]));
      if (i == level) break;
    }
  return y[n - 1];
}

}  // namespace qproj
