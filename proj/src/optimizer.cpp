#include "qpricer/optimizer.hpp"

#include <cmath>
#include <limits>

#include "qpricer/cubic.hpp"

namespace qpricer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBindingTol = 1e-9;

// Largest secondary rate keeping W_p(lambda_s, infinity) <= s_p; the smaller
// quadratic root of the binding condition.
double rate_binding_at_beta_inf(const QueueParams& q, double s_p) {
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  const double disc = (s_p * lp + psi) * (s_p * lp + psi) + 4.0 * mu * psi * s_p;
  return (s_p * (2.0 * mu - lp) + psi - std::sqrt(disc)) / (2.0 * s_p);
}

// Largest secondary rate keeping W_p(lambda_s, 0) <= s_p.
double rate_binding_at_beta_zero(const QueueParams& q, double s_p) {
  return q.mu * (q.mu - q.lambda_p) * s_p / q.psi - q.lambda_p;
}

// Scheduling ratio making W_p(lambda_s1, beta) = s_p for s_p inside I.
double beta_star_in_region_i(const QueueParams& q, double lambda_s1, double s_p) {
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  const double l1 = lp + lambda_s1;
  const double branch_point = psi * l1 / (mu * (mu - l1));
  double beta;
  if (s_p <= branch_point) {
    beta = (mu - l1) * (mu * s_p * (mu - lp) - psi * l1) /
           (psi * l1 * l1 - mu * s_p * lp * (mu - l1));
  } else {
    beta = s_p * lambda_s1 * (mu - l1) /
           (psi * l1 - s_p * (mu - lambda_s1) * (mu - l1));
  }
  return beta < 0.0 ? 0.0 : beta;  // guard rounding at the I_l endpoint
}

double objective_value(const QueueParams& q, const MarketParams& m, double lambda_s,
                       PriorityRatio beta) {
  const double ws = mean_wait(q, lambda_s, beta).w_s;
  return (m.a * lambda_s - lambda_s * lambda_s - m.c * lambda_s * ws) / m.b;
}

}  // namespace

MarketParams::MarketParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
  if (!(a > 0.0)) throw InvalidParameter("a must be > 0");
  if (!(b > 0.0)) throw InvalidParameter("b must be > 0");
  if (!(c > 0.0)) throw InvalidParameter("c must be > 0");
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Infeasible: return "infeasible";
    case Region::IMinus: return "I-";
    case Region::I: return "I";
    case Region::IPlus: return "I+";
    case Region::JMinus: return "J-";
    case Region::J: return "J";
  }
  return "?";
}

RegionReport classify_region(const QueueParams& q, const MarketParams& m, double s_p) {
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  RegionReport r;
  r.s_hat_p = lp * psi / (mu * (mu - lp));
  r.j_l = kInf;

  // Below the demand floor no secondary customer can ever be admitted.
  r.demand_feasible = m.a / m.c > lp * psi / (mu * mu);
  if (r.demand_feasible) {
    // Empty-J test; when it fails, G~ has its unique root below mu - lambda_p.
    const bool j_empty = (mu - lp) / (mu * lp) <=
                         (m.a * lp - m.c * psi) / (2.0 * mu * lp * lp + m.c * psi * (mu + lp));
    if (!j_empty) {
      const auto root3 = root_in_interval(CubicSpec::g_tilde(q, m.a, m.c), 0.0, mu - lp);
      r.lambda_s3 = root3.value;
      const double l3 = lp + root3.value;
      r.j_l = psi * l3 / ((mu - root3.value) * (mu - l3));
    }
    // Finite-beta side exists above the larger intercept threshold.
    const bool p1_defined = m.a / m.c > lp * (2.0 * mu - lp) * psi / (mu * (mu - lp) * (mu - lp));
    if (p1_defined) {
      const auto root1 = root_in_interval(CubicSpec::g(q, m.a, m.c), 0.0, mu - lp);
      r.lambda_s1 = root1.value;
      const double l1 = lp + root1.value;
      r.lambda1 = l1;
      r.i_l = psi * l1 / (mu * (mu - lp));
      r.i_u = psi * l1 / ((mu - root1.value) * (mu - l1));
    }
  }
  return reclassify(r, s_p);
}

RegionReport reclassify(const RegionReport& cached, double s_p) {
  RegionReport r = cached;
  r.s_p = s_p;
  if (s_p <= r.s_hat_p || !r.demand_feasible) {
    r.region = Region::Infeasible;
    return r;
  }
  if (std::isfinite(r.j_l) && s_p > r.j_l) {
    r.region = Region::J;
  } else if (!r.lambda_s1) {
    r.region = Region::JMinus;
  } else if (s_p < *r.i_l) {
    r.region = Region::IMinus;
  } else if (s_p < *r.i_u) {
    r.region = Region::I;
  } else {
    r.region = Region::IPlus;
  }
  return r;
}

double objective_p1(const QueueParams& q, const MarketParams& m, double lambda_s,
                    PriorityRatio beta) {
  if (beta.is_infinite()) throw InvalidParameter("objective_p1 requires a finite beta");
  return objective_value(q, m, lambda_s, beta);
}

double objective_p2(const QueueParams& q, const MarketParams& m, double lambda_s) {
  return objective_value(q, m, lambda_s, PriorityRatio::infinity());
}

OperatingPoint optimize(const QueueParams& q, const MarketParams& m, double s_p) {
  return optimize(q, m, classify_region(q, m, s_p));
}

OperatingPoint optimize(const QueueParams& q, const MarketParams& m,
                        const RegionReport& report) {
  OperatingPoint op;
  op.region = report.region;
  if (report.region == Region::Infeasible) return op;

  const double s_p = report.s_p;
  switch (report.region) {
    case Region::IMinus:
      op.lambda_s = rate_binding_at_beta_zero(q, s_p);
      op.beta = PriorityRatio(0.0);
      break;
    case Region::I:
      op.lambda_s = *report.lambda_s1;
      op.beta = PriorityRatio(beta_star_in_region_i(q, *report.lambda_s1, s_p));
      break;
    case Region::IPlus:
    case Region::JMinus:
      op.lambda_s = rate_binding_at_beta_inf(q, s_p);
      op.beta = PriorityRatio::infinity();
      break;
    case Region::J:
      op.lambda_s = *report.lambda_s3;
      op.beta = PriorityRatio::infinity();
      break;
    case Region::Infeasible:
      return op;
  }

  const WaitPair w = mean_wait(q, op.lambda_s, op.beta);
  op.s_s = w.w_s;
  op.theta = (m.a - m.c * op.s_s - op.lambda_s) / m.b;
  op.revenue = op.theta * op.lambda_s;
  op.theta_valid = op.theta >= 0.0;

  op.binding.primary_sla = std::abs(w.w_p - s_p) <= kBindingTol * std::max(1.0, s_p);
  op.binding.secondary_sla = std::abs(w.w_s - op.s_s) <= kBindingTol * std::max(1.0, op.s_s);
  op.binding.stability = (q.mu - q.lambda_p - op.lambda_s) <= kBindingTol * q.mu;
  op.binding.demand =
      std::abs(m.a - m.b * op.theta - m.c * op.s_s - op.lambda_s) <= kBindingTol * std::max(1.0, m.a);
  return op;
}

P1Solution solve_p1(const QueueParams& q, const MarketParams& m, double s_p) {
  return solve_p1(q, m, classify_region(q, m, s_p));
}

P1Solution solve_p1(const QueueParams& q, const MarketParams& m, const RegionReport& report) {
  if (report.region == Region::Infeasible)
    throw RegionError("P1 undefined: no feasible service level");
  if (!report.lambda_s1)
    throw RegionError("P1 undefined: demand intercept too small for a finite-beta optimum");
  const double s_p = report.s_p;
  if (!(s_p < *report.i_u))
    throw RegionError("P1 undefined for S_p >= I_u");
  P1Solution sol{0.0, PriorityRatio(0.0), 0.0};
  if (s_p < *report.i_l) {
    sol.lambda_s = rate_binding_at_beta_zero(q, s_p);
    sol.beta = PriorityRatio(0.0);
  } else {
    sol.lambda_s = *report.lambda_s1;
    sol.beta = PriorityRatio(beta_star_in_region_i(q, *report.lambda_s1, s_p));
  }
  sol.objective = objective_p1(q, m, sol.lambda_s, sol.beta);
  return sol;
}

P2Solution solve_p2(const QueueParams& q, const MarketParams& m, double s_p) {
  return solve_p2(q, m, classify_region(q, m, s_p));
}

P2Solution solve_p2(const QueueParams& q, const MarketParams& m, const RegionReport& report) {
  if (report.region == Region::Infeasible)
    throw RegionError("P2 undefined: no feasible service level");
  P2Solution sol{0.0, 0.0};
  if (std::isfinite(report.j_l) && report.s_p > report.j_l)
    sol.lambda_s = *report.lambda_s3;
  else
    sol.lambda_s = rate_binding_at_beta_inf(q, report.s_p);
  sol.objective = objective_p2(q, m, sol.lambda_s);
  return sol;
}

double sensitivity(const QueueParams& q, const MarketParams& m, double s_p) {
  return sensitivity(q, m, classify_region(q, m, s_p));
}

double sensitivity(const QueueParams& q, const MarketParams& m, const RegionReport& report) {
  const double mu = q.mu, lp = q.lambda_p, psi = q.psi;
  switch (report.region) {
    case Region::Infeasible:
      throw RegionError("sensitivity undefined for infeasible service levels");
    case Region::IMinus: {
      const double ls = rate_binding_at_beta_zero(q, report.s_p);
      const CubicSpec g = CubicSpec::g(q, m.a, m.c);
      const double rem = mu - lp - ls;
      const double u = (mu - lp) * g.eval(ls) / (m.b * psi * rem * rem) - m.c * lp / m.b;
      return -u;
    }
    case Region::I:
      // G vanishes at its own root, leaving only the -c lambda_p / b term.
      return m.c * lp / m.b;
    case Region::IPlus:
    case Region::JMinus: {
      const double ls = rate_binding_at_beta_inf(q, report.s_p);
      const CubicSpec gt = CubicSpec::g_tilde(q, m.a, m.c);
      const double rem = mu - lp - ls;
      const double l = lp + ls;
      const double v = rem * rem * gt.eval(ls) / (m.b * psi * mu * (mu * (mu + lp) - l * l));
      return -v;
    }
    case Region::J:
      // Unconstrained regime: the SLA multiplier vanishes with G~ at its root.
      return 0.0;
  }
  throw RegionError("unreachable");
}

}  // namespace qpricer
