#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/types.hpp"

namespace qpricer {

enum class ServiceFamily { Deterministic, Exponential, Gamma };

// Service-time sampler matching the first two moments (mean 1/mu, std sigma).
// Only two moments are pinned; the gamma family covers every sigma > 0 other
// than the exponential point and degrades to exponential at sigma = mean.
struct ServiceDistribution {
  double mean = 0.0;
  double std_dev = 0.0;
  ServiceFamily family = ServiceFamily::Deterministic;
  double shape = 0.0;  // gamma shape (1/(sigma mu))^2
  double scale = 0.0;  // gamma scale sigma^2 mu

  static ServiceDistribution from_moments(double mean, double std_dev);
  static ServiceDistribution from_queue(const QueueParams& q) {
    return from_moments(1.0 / q.mu, q.sigma);
  }

  double sample(std::mt19937_64& rng) const;
};

struct SimConfig {
  std::uint64_t seed = 1;
  int replications = 10;
  std::int64_t departures_per_replication = 200000;
  // Negative means the default: discard the first 10% of departures.
  std::int64_t warmup_departures = -1;
};

struct SimulationReport {
  double w_p_est = 0.0;
  double w_s_est = 0.0;
  double w_p_ci_half = 0.0;  // 95% half-width across replications
  double w_s_ci_half = 0.0;
  std::int64_t count_p = 0;  // post-warmup served jobs per class, all replications
  std::int64_t count_s = 0;
  int replications = 0;
};

// Event-driven non-preemptive single-server simulation of the two-class
// queue under delay-dependent priority: at each service start the waiting
// job maximising (now - arrival) * b_class is served, with b_p = 1 and
// b_s = beta; beta = 0 leaves the secondary class FCFS among itself behind
// the primary, beta = infinity is static priority to the secondary class.
// Ties break to the earlier arrival, then to the primary class.  Identical
// (seed, cfg) inputs give a bit-identical report.
SimulationReport simulate_ddp(const QueueParams& q, double lambda_s, PriorityRatio beta,
                              const ServiceDistribution& dist, const SimConfig& cfg);

// One report per ratio, common seeds across ratios.
std::vector<std::pair<PriorityRatio, SimulationReport>> frontier_sweep(
    const QueueParams& q, double lambda_s, const std::vector<PriorityRatio>& betas,
    const ServiceDistribution& dist, const SimConfig& cfg);

// Per-job service-start log of a single replication, for order/tie tests.
struct ServiceRecord {
  double arrival = 0.0;
  double service_start = 0.0;
  int customer_class = 0;  // 0 primary, 1 secondary
};
std::vector<ServiceRecord> simulate_trace(const QueueParams& q, double lambda_s,
                                          PriorityRatio beta, const ServiceDistribution& dist,
                                          std::uint64_t seed, std::int64_t departures);

// Two-sided 95% Student t critical value (0.975 quantile) for df >= 1.
double student_t_975(int df);

}  // namespace qpricer
