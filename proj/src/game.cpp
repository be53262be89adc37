#include "qpricer/game.hpp"

#include <algorithm>
#include <cmath>

namespace qpricer {

namespace {

// Feasibility slack absorbing last-digit rounding in externally supplied
// rates (the SLA comparison happens at the edge of a binding constraint).
double sla_slack(double s_p) { return 1e-6 * std::max(1.0, s_p); }

}  // namespace

PriorityRatio max_beta_for_sla(const QueueParams& q, double s_p, double lambda_s_bar) {
  if (!(lambda_s_bar >= 0.0)) throw InvalidParameter("lambda_s_bar must be >= 0");
  if (!(q.mu - q.lambda_p - lambda_s_bar > kStabilityMargin * q.mu))
    throw InstabilityError("lambda_s_bar saturates the server");

  const double wf = w_fcfs(q, lambda_s_bar);
  const double rho_p = q.lambda_p / q.mu;
  const double rho_s = lambda_s_bar / q.mu;
  const double rho = rho_p + rho_s;
  const double slack = sla_slack(s_p);

  if (lambda_s_bar == 0.0) {
    // The lone class waits wf regardless of beta.
    if (wf <= s_p + slack) return PriorityRatio::infinity();
    throw InfeasibleError("primary SLA unattainable even without secondary load");
  }

  const double wp_at_inf = wf / (1.0 - rho_s);
  if (wp_at_inf <= s_p + slack) return PriorityRatio::infinity();

  if (wf <= s_p) {
    // Invert w_p = wf / (1 - rho_s (1 - 1/beta)) on beta >= 1.
    const double beta = 1.0 / (1.0 - (1.0 - wf / s_p) / rho_s);
    return PriorityRatio(std::max(beta, 1.0));
  }

  const double wp_at_zero = wf * (1.0 - rho) / (1.0 - rho_p);
  if (wp_at_zero > s_p + slack)
    throw InfeasibleError("primary SLA violated at every scheduling ratio");

  // Invert w_p = wf (1 - rho (1-beta)) / (1 - rho_p (1-beta)) on beta <= 1.
  const double m = (s_p - wf) / (s_p * rho_p - wf * rho);
  return PriorityRatio(std::clamp(1.0 - m, 0.0, 1.0));
}

ProviderStrategy best_response_provider(const QueueParams& q, const MarketParams& m,
                                        double s_p, double lambda_s_bar) {
  const PriorityRatio beta = max_beta_for_sla(q, s_p, lambda_s_bar);
  ProviderStrategy ps;
  ps.beta = beta;
  ps.s_s = mean_wait(q, lambda_s_bar, beta).w_s;
  ps.theta = (m.a - lambda_s_bar - m.c * ps.s_s) / m.b;
  ps.theta_valid = ps.theta >= 0.0;
  return ps;
}

UserStrategy best_response_user(const MarketParams& m, const ProviderStrategy& provider) {
  return {std::max(0.0, m.a - m.b * provider.theta - m.c * provider.s_s)};
}

NEReport run_dynamics(const QueueParams& q, const MarketParams& m, double s_p,
                      const UserStrategy& initial_user) {
  StrategyProfile profile;
  profile.provider = best_response_provider(q, m, s_p, initial_user.lambda_s);
  profile.user = best_response_user(m, profile.provider);
  return verify_ne(q, m, s_p, profile);
}

NEReport verify_ne(const QueueParams& q, const MarketParams& m, double s_p,
                   const StrategyProfile& profile) {
  NEReport report;
  report.profile = profile;
  report.revenue = profile.provider.theta * profile.user.lambda_s;

  const ProviderStrategy br = best_response_provider(q, m, s_p, profile.user.lambda_s);
  report.provider_deviation_gain = br.theta * profile.user.lambda_s - report.revenue;

  const UserStrategy reply = best_response_user(m, profile.provider);
  report.user_deviation_gain = std::abs(reply.lambda_s - profile.user.lambda_s);

  report.is_equilibrium = report.provider_deviation_gain <= kNeTolerance &&
                          report.user_deviation_gain <= kNeTolerance;
  return report;
}

double max_user_rate(const QueueParams& q, const MarketParams& m, double s_p) {
  // SLA cap at beta = 0 (where the primary is best protected), then the
  // stability cap, then shrink until the quoted price is nonnegative.
  const double sla_cap = q.mu * (q.mu - q.lambda_p) * s_p / q.psi - q.lambda_p;
  double hi = std::min(q.mu - q.lambda_p - 1e-6, sla_cap);
  if (!(hi > 0.0)) throw InfeasibleError("no positive user rate is feasible");

  const auto theta_at = [&](double ls) {
    return best_response_provider(q, m, s_p, ls).theta;
  };
  if (theta_at(hi) >= 0.0) return hi;

  // theta is strictly decreasing in the rate: bisect the sign change.
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (theta_at(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

std::vector<NEReport> ne_continuum(const QueueParams& q, const MarketParams& m, double s_p,
                                   int grid_size) {
  if (grid_size < 2) throw InvalidParameter("grid_size must be >= 2");
  const double rate_max = max_user_rate(q, m, s_p);
  std::vector<NEReport> reports;
  reports.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 1; i <= grid_size; ++i) {
    const double ls = rate_max * static_cast<double>(i) / grid_size;
    reports.push_back(run_dynamics(q, m, s_p, UserStrategy{ls}));
  }
  return reports;
}

}  // namespace qpricer
