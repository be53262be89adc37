#pragma once

#include "qpricer/types.hpp"

namespace qpricer {

// Second-moment factor of the service time, psi = (1 + sigma^2 mu^2) / 2.
// E[S^2] = 2 psi / mu^2; psi = 1/2 for deterministic service and 1 for
// exponential service.
double compute_psi(double sigma, double mu);

// Parameters of the contract-bound primary class and the shared server.
// The primary-only system must be stable (lambda_p < mu).
struct QueueParams {
  double lambda_p;  // primary arrival rate, > 0
  double mu;        // service rate, > 0
  double sigma;     // service-time standard deviation, >= 0
  double psi;       // derived: (1 + sigma^2 mu^2) / 2

  QueueParams(double lambda_p, double mu, double sigma);
};

struct WaitPair {
  double w_p;  // mean wait of the primary class
  double w_s;  // mean wait of the secondary class
};

// M/G/1 FCFS mean waiting time with both classes merged,
//   W = (lambda_p + lambda_s) psi / (mu (mu - lambda_p - lambda_s)).
// At lambda_s = 0 this is the minimal feasible primary service level.
double w_fcfs(const QueueParams& q, double lambda_s);

// Steady-state mean waits of the two-class M/G/1 queue under delay-dependent
// priority with weight ratio beta = b_s/b_p, due to Kleinrock.  With
// W_F = w_fcfs and rho_p, rho_s, rho the per-class and total loads:
//
//   beta <= 1:  w_s = W_F / (1 - rho_p (1-beta))
//               w_p = W_F (1 - rho (1-beta)) / (1 - rho_p (1-beta))
//   beta >= 1:  w_p = W_F / (1 - rho_s (1-1/beta))
//               w_s = W_F (1 - rho (1-1/beta)) / (1 - rho_s (1-1/beta))
//
// Both branches reduce to W_F at beta = 1 and satisfy the conservation law
// rho_p w_p + rho_s w_s = rho W_F identically.  The product forms above have
// removable singularities at rho_s = 0 (resp. rho_p = 0), so lambda_s = 0 is
// served by the limit value, not an error.
WaitPair mean_wait(const QueueParams& q, double lambda_s, PriorityRatio beta);

}  // namespace qpricer
