#pragma once

#include <functional>
#include <vector>

#include "qproj/types.hpp"

namespace qproj {

/// Controls for the numeric integration used by the kernel modules.
struct QuadratureSpec {
  enum class Scheme { GaussHermite, Adaptive };
  int node_count = 96;
  Scheme scheme = Scheme::GaussHermite;
  double regulator_epsilon = 1e-2;   // starting point of the oscillatory-regulator ladder
  int extrapolation_levels = 4;

  void validate() const {
    if (node_count < 16) throw std::invalid_argument("QuadratureSpec: node_count must be >= 16");
    if (regulator_epsilon <= 0)
      throw std::invalid_argument("QuadratureSpec: regulator_epsilon must be positive");
  }
};

/// Complex kernel evaluation together with its accuracy bookkeeping.
struct KernelValue {
  enum class Method { Quadrature, ClosedForm, LeadingOrder };
  Complex value{0.0, 0.0};
  double estimated_error = 0.0;
  Method method = Method::Quadrature;
  bool converged = true;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Hermite rule (weight e^{-x^2} on the real line).
const QuadratureRule& gauss_hermite(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
auto integrate_gl(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  decltype(f(a)) sum{};
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

/// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
template <typename F>
auto integrate_gl_panels(F&& f, double a, double b, int panels, int pts_per_panel = 16) {
  decltype(f(a)) sum{};
  const double w = (b - a) / panels;
  for (int i = 0; i < panels; ++i)
    sum += integrate_gl(f, a + i * w, a + (i + 1) * w, pts_per_panel);
  return sum;
}

struct AdaptiveResult {
  Complex value{0.0, 0.0};
  double error = 0.0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of a complex integrand over
/// [a, b].  Splits the worst interval until the global error estimate drops
/// below max(abs_tol, rel_tol * |I|) or the evaluation budget runs out.
AdaptiveResult integrate_adaptive(const std::function<Complex(double)>& f, double a, double b,
                                  double abs_tol = 1e-12, double rel_tol = 1e-12,
                                  int max_intervals = 20000);

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
double sine_integral(double x);

/// Neville polynomial extrapolation of (x_i, y_i) to x = 0.
Complex extrapolate_to_zero(std::vector<double> x, std::vector<Complex> y);

}  // namespace qproj
