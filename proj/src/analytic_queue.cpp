#include "qpricer/analytic_queue.hpp"

#include <cmath>

namespace qpricer {

double compute_psi(double sigma, double mu) {
  if (!(mu > 0.0)) throw InvalidParameter("mu must be > 0");
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  return (1.0 + sigma * sigma * mu * mu) / 2.0;
}

QueueParams::QueueParams(double lambda_p_, double mu_, double sigma_)
    : lambda_p(lambda_p_), mu(mu_), sigma(sigma_), psi(compute_psi(sigma_, mu_)) {
  if (!(lambda_p > 0.0)) throw InvalidParameter("lambda_p must be > 0");
  if (!(mu - lambda_p > kStabilityMargin * mu))
    throw InstabilityError("primary-only system unstable: lambda_p >= mu");
}

namespace {

void check_stable(const QueueParams& q, double lambda_s) {
  if (!(lambda_s >= 0.0)) throw InvalidParameter("lambda_s must be >= 0");
  if (!(q.mu - q.lambda_p - lambda_s > kStabilityMargin * q.mu))
    throw InstabilityError("total load at or beyond saturation: lambda_p + lambda_s >= mu");
}

}  // namespace

double w_fcfs(const QueueParams& q, double lambda_s) {
  check_stable(q, lambda_s);
  const double lambda = q.lambda_p + lambda_s;
  return lambda * q.psi / (q.mu * (q.mu - lambda));
}

WaitPair mean_wait(const QueueParams& q, double lambda_s, PriorityRatio beta) {
  const double wf = w_fcfs(q, lambda_s);
  const double rho_p = q.lambda_p / q.mu;
  const double rho_s = lambda_s / q.mu;
  const double rho = rho_p + rho_s;

  if (beta.value() <= 1.0) {
    // Secondary accrues priority no faster than primary.
    const double m = 1.0 - beta.value();
    const double den = 1.0 - rho_p * m;
    return {wf * (1.0 - rho * m) / den, wf / den};
  }
  // Secondary accrues faster; 1/beta = 0 at beta = infinity.
  const double k = beta.is_infinite() ? 1.0 : 1.0 - 1.0 / beta.value();
  const double den = 1.0 - rho_s * k;
  return {wf / den, wf * (1.0 - rho * k) / den};
}

}  // namespace qpricer
