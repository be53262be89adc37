#pragma once

#include "qpricer/analytic_queue.hpp"
#include "qpricer/types.hpp"

namespace qpricer {

enum class CubicKind { G, GTilde };

// One of the two characteristic cubics whose roots locate the optimal
// secondary admission rates.  Coefficients are computed exactly from the
// queue and market parameters; evaluation is Horner form.
struct CubicSpec {
  CubicKind kind;
  double a;     // demand intercept
  double c;     // delay elasticity
  double phi0;  // mu - lambda_p
  double c3, c2, c1, c0;

  // G(x) = 2 mu x^3 - [c psi + mu (a + 4 phi0)] x^2
  //        + 2 phi0 [c psi + mu (a + phi0)] x - a mu phi0^2 + c psi lambda_p (mu + phi0)
  static CubicSpec g(const QueueParams& q, double a, double c);

  // G~(x) = 2 mu x^3 - [a mu + c psi + 4 mu^2] x^2
  //         + 2 mu [a mu + c psi + mu^2] x - mu [a mu^2 - c psi lambda_p]
  static CubicSpec g_tilde(const QueueParams& q, double a, double c);

  double eval(double lambda_s) const;
  double slope(double lambda_s) const;

  // Function-value tolerance scale: |leading coefficient| * hi^3.
  double residual_scale(double hi) const;
};

struct BracketedRoot {
  double value;
  double residual;    // cubic value at the root
  int iterations;
  bool boundary;      // root within 1e-9 of a bracket endpoint
};

// Locates the unique root of the cubic in the open interval (lo, hi) by
// bisection with a final Newton polish.  Uniqueness is asserted by scanning
// a 1024-point grid for additional sign changes.  Roots within 1e-9 of an
// endpoint are reported with the boundary flag instead of failing.
//
// Throws BracketError if the cubic does not change sign on (lo, hi) and
// AmbiguousRootError if the grid shows more than one sign change.
BracketedRoot root_in_interval(const CubicSpec& spec, double lo, double hi);

}  // namespace qpricer
