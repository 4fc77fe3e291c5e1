#include "qproj/reparam.hpp"

#include <cmath>

namespace qproj {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrtPi = std::sqrt(kPi);

double sinc_at(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

struct ExtLabels {
  double p, q, s, t;
};

ExtLabels ext_labels(const PhasePoint& pt, const char* who) {
  if (!pt.s || !pt.t) throw std::invalid_argument(std::string(who) + ": point needs (s,t) labels");
  return {pt.p, pt.q, *pt.s, *pt.t};
}

struct RedLabels {
  double p, q, t;
};

RedLabels red_labels(const PhasePoint& pt, const char* who) {
  if (!pt.t) throw std::invalid_argument(std::string(who) + ": point needs a t label");
  return {pt.p, pt.q, *pt.t};
}

// Gauss-Hermite evaluation of int dk w(k) f(k) with w(k) = e^{-(k-center)^2};
// returns the n-node and (n-16)-node values for an error estimate.
template <typename F>
std::pair<Complex, Complex> gh_with_error(F&& f, double center, int n) {
  auto eval = [&](int m) {
    const auto& rule = gauss_hermite(m);
    Complex sum{0, 0};
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * f(center + rule.nodes[i]);
    return sum;
  };
  return {eval(n), eval(std::max(16, n - 16))};
}

// k-integrand of the reduced kernel with the Gaussian weight e^{-u^2}
// factored out: integrand(k) = e^{-u^2} g(k), u = k - (p_a+p_b)/2.
Complex reduced_by_quadrature(const RedLabels& a, const RedLabels& b, int nodes, double* err) {
  const double center = 0.5 * (a.p + b.p);
  const double d = a.p - b.p;
  const double dq = b.q - a.q, dt = b.t - a.t;
  auto g = [&](double k) {
    return std::exp(Complex(0.0, k * dq - 0.5 * k * k * dt));
  };
  auto [v1, v2] = gh_with_error(g, center, nodes);
  const Complex pref = std::exp(-d * d / 4.0) / kSqrtPi;
  if (err) *err = std::abs(pref * (v1 - v2));
  return pref * v1;
}

Complex reduced_closed_form(const RedLabels& a, const RedLabels& b) {
  const double dq = b.q - a.q, dt = b.t - a.t;
  const Complex alpha(1.0, 0.5 * dt);
  if (!(std::abs(std::arg(alpha)) < 0.5 * kPi))
    throw std::runtime_error("reduced_kernel: complex coefficient left the right half-plane");
  const Complex beta(a.p + b.p, dq);
  const double gamma = -0.5 * (a.p * a.p + b.p * b.p);
  return std::exp(beta * beta / (4.0 * alpha) + gamma) / std::sqrt(alpha);
}

// Exact extended kernel: outer k-integral (Gauss-Hermite around the momentum
// midpoint), inner sigma-integral over the window (Gauss-Legendre).
Complex extended_exact(const ExtLabels& a, const ExtLabels& b, double delta, int k_nodes,
                       int s_nodes, double* err) {
  const double center = 0.5 * (a.p + b.p);
  const double d = a.p - b.p;
  const double dq = b.q - a.q, dt = b.t - a.t;
  const auto& gl = gauss_legendre(s_nodes);
  auto g = [&](double k) {
    const double s0 = -0.5 * k * k;
    Complex inner{0, 0};
    for (size_t j = 0; j < gl.nodes.size(); ++j) {
      const double sig = s0 + delta * gl.nodes[j];
      inner += gl.weights[j] * std::exp(Complex(-0.5 * (sig - a.s) * (sig - a.s) -
                                                    0.5 * (sig - b.s) * (sig - b.s),
                                                sig * dt));
    }
    inner *= delta;
    return inner * std::exp(Complex(0.0, k * dq));
  };
  auto [v1, v2] = gh_with_error(g, center, k_nodes);
  const Complex pref = std::exp(-d * d / 4.0) / kPi;
  if (err) *err = std::abs(pref * (v1 - v2));
  return pref * v1;
}

Complex extended_leading(const ExtLabels& a, const ExtLabels& b, double delta, int k_nodes,
                         double* err) {
  const double center = 0.5 * (a.p + b.p);
  const double d = a.p - b.p;
  const double dq = b.q - a.q, dt = b.t - a.t;
  auto g = [&](double k) {
    const double h = 0.5 * k * k;
    return std::exp(Complex(-0.5 * (h + a.s) * (h + a.s) - 0.5 * (h + b.s) * (h + b.s),
                            k * dq - h * dt));
  };
  auto [v1, v2] = gh_with_error(g, center, k_nodes);
  const Complex pref =
      std::exp(-d * d / 4.0) / kPi * (2.0 * delta * sinc_at(delta * dt));
  if (err) *err = std::abs(pref * (v1 - v2));
  return pref * v1;
}

// Numeric int e^{-(sigma-s)^2/2} ds over a fixed domain wide enough for
// every window midpoint; composite Gauss-Legendre panels.
double s_marginal(double sigma, double s_lo, double s_hi) {
  auto f = [sigma](double s) {
    const double u = s - sigma;
    return Complex(std::exp(-0.5 * u * u), 0.0);
  };
  const int panels = std::max(8, static_cast<int>((s_hi - s_lo) / 2.0));
  return integrate_gl_panels(f, s_lo, s_hi, panels, 16).real();
}

}  // namespace

KernelValue extended_kernel(const PhasePoint& a, const PhasePoint& b, double delta,
                            ExtendedMode mode, const QuadratureSpec& quad) {
  quad.validate();
  if (delta <= 0) throw std::invalid_argument("extended_kernel: delta must be positive");
  const ExtLabels la = ext_labels(a, "extended_kernel");
  const ExtLabels lb = ext_labels(b, "extended_kernel");
  KernelValue out;
  double err = 0.0;
  if (mode == ExtendedMode::Exact) {
    out.value = extended_exact(la, lb, delta, quad.node_count, 24, &err);
    out.method = KernelValue::Method::Quadrature;
  } else {
    out.value = extended_leading(la, lb, delta, quad.node_count, &err);
    out.method = KernelValue::Method::LeadingOrder;
  }
  out.estimated_error = err;
  out.converged = err <= 1e-8 * std::max(1.0, std::abs(out.value));
  return out;
}

KernelValue reduced_kernel(const PhasePoint& a, const PhasePoint& b, ReducedMode mode,
                           const QuadratureSpec& quad) {
  quad.validate();
  const RedLabels la = red_labels(a, "reduced_kernel");
  const RedLabels lb = red_labels(b, "reduced_kernel");
  KernelValue out;
  switch (mode) {
    case ReducedMode::ClosedForm:
      out.value = reduced_closed_form(la, lb);
      out.method = KernelValue::Method::ClosedForm;
      out.estimated_error = 1e-15;
      break;
    case ReducedMode::Quadrature: {
      double err = 0.0;
      out.value = reduced_by_quadrature(la, lb, quad.node_count, &err);
      out.method = KernelValue::Method::Quadrature;
      out.estimated_error = err;
      out.converged = err <= 1e-8 * std::max(1.0, std::abs(out.value));
      break;
    }
    case ReducedMode::DeltaLimit: {
      // Integrate the exact extended kernel over (s_a, s_b).  The double
      // s-integral of each window sample factorizes into two independent
      // Gaussian marginals, which are themselves evaluated numerically.
      const double dq = lb.q - la.q, dt = lb.t - la.t;
      const double center = 0.5 * (la.p + lb.p);
      const double d = la.p - lb.p;
      const auto& gl = gauss_legendre(24);
      const auto& gh = gauss_hermite(quad.node_count);
      std::vector<double> deltas = {0.2, 0.1, 0.05};
      if (quad.extrapolation_levels > 3) deltas.push_back(0.025);
      std::vector<double> x2;
      std::vector<Complex> vals;
      for (const double delta : deltas) {
        Complex total{0, 0};
        for (size_t i = 0; i < gh.nodes.size(); ++i) {
          const double k = center + gh.nodes[i];
          const double s0 = -0.5 * k * k;
          Complex inner{0, 0};
          for (size_t j = 0; j < gl.nodes.size(); ++j) {
            const double sig = s0 + delta * gl.nodes[j];
            const double marg = s_marginal(sig, sig - 9.0, sig + 9.0);
            inner += gl.weights[j] * marg * marg *
                     std::exp(Complex(0.0, sig * dt));
          }
          inner *= delta;
          total += gh.weights[i] * inner * std::exp(Complex(0.0, k * dq));
        }
        total *= std::exp(-d * d / 4.0) / kPi;
        total /= 4.0 * kSqrtPi * delta;
        x2.push_back(delta * delta);  // correction is even in delta
        vals.push_back(total);
      }
      const Complex extrapolated = extrapolate_to_zero(x2, vals);
      out.value = extrapolated;
      out.method = KernelValue::Method::Quadrature;
      out.estimated_error = std::abs(extrapolated - vals.back());
      out.converged = true;
      break;
    }
  }
  return out;
}

double propagation_residual(const PhasePoint& a, const PhasePoint& b, double t_mid,
                            const QuadratureSpec& quad) {
  quad.validate();
  if (!std::isfinite(t_mid)) throw std::invalid_argument("propagation_residual: t_mid not finite");
  const RedLabels la = red_labels(a, "propagation_residual");
  const RedLabels lb = red_labels(b, "propagation_residual");
  const double dq = lb.q - la.q, dt = lb.t - la.t;

  // composed = pi^-1 intint dp dk e^{-(k-p)^2} e^{-(k-p_a)^2/2 - (k-p_b)^2/2
  //            + i k dq - i k^2 dt / 2}; t_mid has already cancelled inside
  //            the analytic q-integration.  The k-integral runs composite
  //            Simpson with node_count points so refinement studies show the
  //            h^4 convergence; the smooth p-marginal uses fixed panels.
  const double k_lo = std::min(la.p, lb.p) - 8.0, k_hi = std::max(la.p, lb.p) + 8.0;
  auto outer = [&](double k) {
    auto inner = [&](double p) {
      const double u = k - p;
      return Complex(std::exp(-u * u), 0.0);
    };
    const Complex p_int = integrate_gl_panels(inner, k - 8.0, k + 8.0, 4, 16);
    return p_int * std::exp(Complex(-0.5 * (k - la.p) * (k - la.p) -
                                        0.5 * (k - lb.p) * (k - lb.p),
                                    k * dq - 0.5 * k * k * dt));
  };
  const int intervals = 2 * std::max(8, quad.node_count / 2);  // even for Simpson
  const double h = (k_hi - k_lo) / intervals;
  Complex composed{0, 0};
  for (int i = 0; i <= intervals; ++i) {
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    composed += w * outer(k_lo + i * h);
  }
  composed *= h / (3.0 * kPi);
  const Complex direct = reduced_closed_form(la, lb);
  return std::abs(composed - direct);
}

KernelValue sharp_q_propagator(double q2, double q1, double dt, PropagatorMode mode,
                               const QuadratureSpec& quad) {
  quad.validate();
  if (dt == 0.0)
    throw std::invalid_argument(
        "sharp_q_propagator: dt = 0 is a delta function, outside numeric scope");
  const double dq = q2 - q1;
  KernelValue out;
  if (mode == PropagatorMode::ClosedForm) {
    const Complex root =
        std::sqrt(2.0 * kPi * std::abs(dt)) *
        std::exp(Complex(0.0, 0.25 * kPi * (dt > 0 ? 1.0 : -1.0)));
    out.value = std::exp(Complex(0.0, dq * dq / (2.0 * dt))) / root;
    out.method = KernelValue::Method::ClosedForm;
    out.estimated_error = 1e-15;
    return out;
  }
  // Regulated quadrature: dt -> dt - i eps, polynomial extrapolation to 0.
  std::vector<double> ladder;
  for (int i = 0; i < quad.extrapolation_levels; ++i)
    ladder.push_back(quad.regulator_epsilon * std::pow(10.0, -i));
  std::vector<Complex> vals;
  for (const double eps : ladder) {
    const double k_max = std::sqrt(2.0 * 42.0 / eps);
    const double oscillations =
        (k_max * k_max * std::abs(dt) / 2.0 + k_max * std::abs(dq)) / (2.0 * kPi);
    const int panels = std::max(64, static_cast<int>(oscillations) + 1);
    auto f = [&](double k) {
      return std::exp(Complex(-0.5 * eps * k * k, k * dq - 0.5 * k * k * dt));
    };
    vals.push_back(integrate_gl_panels(f, -k_max, k_max, panels, 16) / (2.0 * kPi));
  }
  const Complex full = extrapolate_to_zero(ladder, vals);
  std::vector<double> shorter(ladder.begin(), ladder.end() - 1);
  std::vector<Complex> shorter_vals(vals.begin(), vals.end() - 1);
  const Complex prev = extrapolate_to_zero(shorter, shorter_vals);
  out.value = full;
  out.method = KernelValue::Method::Quadrature;
  out.estimated_error = std::abs(full - prev);
  out.converged = out.estimated_error <= 1e-5;
  return out;
}

ComplexMatrix gram_matrix(const std::vector<PhasePoint>& points, GramKernel kernel, double delta,
                          const QuadratureSpec& quad) {
  const int n = static_cast<int>(points.size());
  if (n < 1 || n > 64)
    throw std::invalid_argument("gram_matrix: need between 1 and 64 points");
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Complex v;
      if (kernel == GramKernel::Extended)
        v = extended_kernel(points[i], points[j], delta, ExtendedMode::Exact, quad).value;
      else
        v = reduced_kernel(points[i], points[j], ReducedMode::ClosedForm, quad).value;
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  return g;
}

}  // namespace qproj
