#include "qpricer/cubic.hpp"

#include <cmath>

namespace qpricer {

namespace {
constexpr int kScanPoints = 1024;
constexpr double kWidthTolFactor = 1e-12;   // times (hi - lo)
constexpr double kResidualTol = 1e-8;       // times |c3| hi^3
constexpr double kBoundaryTol = 1e-9;
}  // namespace

CubicSpec CubicSpec::g(const QueueParams& q, double a, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw InvalidParameter("a and c must be > 0");
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  const double phi0 = mu - lp;
  CubicSpec s{CubicKind::G, a, c, phi0, 0, 0, 0, 0};
  s.c3 = 2.0 * mu;
  s.c2 = -(c * psi + mu * (a + 4.0 * phi0));
  s.c1 = 2.0 * phi0 * (c * psi + mu * (a + phi0));
  s.c0 = -a * mu * phi0 * phi0 + c * psi * lp * (mu + phi0);
  return s;
}

CubicSpec CubicSpec::g_tilde(const QueueParams& q, double a, double c) {
  if (!(a > 0.0) || !(c > 0.0)) throw InvalidParameter("a and c must be > 0");
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  CubicSpec s{CubicKind::GTilde, a, c, mu - lp, 0, 0, 0, 0};
  s.c3 = 2.0 * mu;
  s.c2 = -(a * mu + c * psi + 4.0 * mu * mu);
  s.c1 = 2.0 * mu * (a * mu + c * psi + mu * mu);
  s.c0 = -mu * (a * mu * mu - c * psi * lp);
  return s;
}

double CubicSpec::eval(double x) const {
  return ((c3 * x + c2) * x + c1) * x + c0;
}

double CubicSpec::slope(double x) const {
  return (3.0 * c3 * x + 2.0 * c2) * x + c1;
}

double CubicSpec::residual_scale(double hi) const {
  return std::abs(c3) * hi * hi * hi;
}

BracketedRoot root_in_interval(const CubicSpec& spec, double lo, double hi) {
  if (!(lo < hi)) throw BracketError("degenerate bracket: lo must be < hi");

  const double f_lo = spec.eval(lo);
  const double f_hi = spec.eval(hi);
  const double res_scale = spec.residual_scale(std::max(std::abs(lo), std::abs(hi)));

  // Uniqueness scan: count strict sign changes on a fixed grid.
  int sign_changes = 0;
  {
    double x_prev = lo;
    int s_prev = (f_lo > 0.0) - (f_lo < 0.0);
    for (int i = 1; i <= kScanPoints; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / kScanPoints;
      const double f = spec.eval(x);
      const int s = (f > 0.0) - (f < 0.0);
      if (s != 0 && s_prev != 0 && s != s_prev) ++sign_changes;
      if (s != 0) s_prev = s;
      x_prev = x;
    }
    (void)x_prev;
  }
  if (sign_changes > 1)
    throw AmbiguousRootError("multiple sign changes in bracket; unique-root premise violated");

  // Exact (or numerically exact) root at an endpoint.
  if (f_lo == 0.0) return {lo, 0.0, 0, true};
  if (f_hi == 0.0) return {hi, 0.0, 0, true};
  if (f_lo * f_hi > 0.0)
    throw BracketError("cubic does not change sign on the requested interval");

  double a = lo, b = hi, fa = f_lo;
  int iterations = 0;
  const double width_tol = kWidthTolFactor * (hi - lo);
  while (b - a > width_tol && iterations < 200) {
    const double mid = 0.5 * (a + b);
    const double fm = spec.eval(mid);
    ++iterations;
    if (fm == 0.0) {
      a = b = mid;
      break;
    }
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double root = 0.5 * (a + b);

  // Newton polish; keep the iterate inside the bracket.
  for (int i = 0; i < 3; ++i) {
    const double d = spec.slope(root);
    if (d == 0.0) break;
    const double next = root - spec.eval(root) / d;
    if (next <= lo || next >= hi) break;
    root = next;
    ++iterations;
  }

  const double residual = spec.eval(root);
  if (std::abs(residual) > kResidualTol * res_scale)
    throw BracketError("root residual above tolerance");

  const bool boundary = (root - lo) < kBoundaryTol || (hi - root) < kBoundaryTol;
  return {root, residual, iterations, boundary};
}

}  // namespace qpricer
