#include "qpricer/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace qpricer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ReplicationResult {
  double w_p_mean = 0.0;
  double w_s_mean = 0.0;
  std::int64_t count_p = 0;
  std::int64_t count_s = 0;
};

// Single-replication event loop.  Waits are recorded at service start; with
// one non-preemptive server the n-th start is the n-th departure, so running
// until `departures` starts yields exactly the first `departures` waits.
template <typename OnStart>
void run_replication(const QueueParams& q, double lambda_s, PriorityRatio beta,
                     const ServiceDistribution& dist, std::uint64_t seed, std::uint64_t rep,
                     std::int64_t departures, OnStart&& on_start) {
  const auto make_rng = [&](std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), stream};
    return std::mt19937_64(seq);
  };
  std::mt19937_64 rng_arrival_p = make_rng(1);
  std::mt19937_64 rng_arrival_s = make_rng(2);
  std::mt19937_64 rng_service = make_rng(3);

  std::exponential_distribution<double> interarrival_p(q.lambda_p);
  std::exponential_distribution<double> interarrival_s(lambda_s > 0.0 ? lambda_s : 1.0);

  std::deque<double> waiting_p, waiting_s;
  double next_p = interarrival_p(rng_arrival_p);
  double next_s = lambda_s > 0.0 ? interarrival_s(rng_arrival_s) : kInf;
  double completion = kInf;
  bool busy = false;
  std::int64_t started = 0;

  // DDP choice between queue heads; within a class accumulation preserves
  // arrival order, so comparing heads is sufficient.
  const auto pick_secondary = [&](double now) {
    if (waiting_p.empty()) return true;
    if (waiting_s.empty()) return false;
    const double head_p = waiting_p.front();
    const double head_s = waiting_s.front();
    if (beta.is_infinite()) return true;  // static priority to secondary
    const double prio_p = now - head_p;
    const double prio_s = (now - head_s) * beta.value();
    if (prio_p != prio_s) return prio_s > prio_p;
    if (head_p != head_s) return head_s < head_p;  // earlier arrival wins
    return false;                                  // then primary class
  };

  const auto start_service = [&](double now) {
    const bool secondary = pick_secondary(now);
    double arrival;
    if (secondary) {
      arrival = waiting_s.front();
      waiting_s.pop_front();
    } else {
      arrival = waiting_p.front();
      waiting_p.pop_front();
    }
    on_start(started, arrival, now, secondary ? 1 : 0);
    ++started;
    busy = true;
    completion = now + dist.sample(rng_service);
  };

  while (started < departures) {
    if (busy && completion <= next_p && completion <= next_s) {
      const double now = completion;
      busy = false;
      completion = kInf;
      if (!waiting_p.empty() || !waiting_s.empty()) start_service(now);
    } else if (next_p <= next_s) {
      const double now = next_p;
      waiting_p.push_back(now);
      next_p = now + interarrival_p(rng_arrival_p);
      if (!busy) start_service(now);
    } else {
      const double now = next_s;
      waiting_s.push_back(now);
      next_s = now + interarrival_s(rng_arrival_s);
      if (!busy) start_service(now);
    }
  }
}

void check_sim_inputs(const QueueParams& q, double lambda_s, const SimConfig& cfg) {
  if (!(lambda_s >= 0.0)) throw InvalidParameter("lambda_s must be >= 0");
  if (!(q.mu - q.lambda_p - lambda_s > kStabilityMargin * q.mu))
    throw InstabilityError("simulated load at or beyond saturation");
  if (cfg.replications < 1) throw InvalidParameter("replications must be >= 1");
  if (cfg.departures_per_replication < 1)
    throw InvalidParameter("departures_per_replication must be >= 1");
}

std::int64_t effective_warmup(const SimConfig& cfg) {
  const std::int64_t warmup = cfg.warmup_departures >= 0
                                  ? cfg.warmup_departures
                                  : cfg.departures_per_replication / 10;
  if (warmup >= cfg.departures_per_replication)
    throw InvalidParameter("warmup_departures must be < departures_per_replication");
  return warmup;
}

}  // namespace

ServiceDistribution ServiceDistribution::from_moments(double mean, double std_dev) {
  if (!(mean > 0.0)) throw InvalidParameter("service mean must be > 0");
  if (!(std_dev >= 0.0)) throw InvalidParameter("service std_dev must be >= 0");
  ServiceDistribution d;
  d.mean = mean;
  d.std_dev = std_dev;
  if (std_dev == 0.0) {
    d.family = ServiceFamily::Deterministic;
  } else if (std::abs(std_dev - mean) <= 1e-12 * mean) {
    d.family = ServiceFamily::Exponential;
  } else {
    d.family = ServiceFamily::Gamma;
    const double ratio = std_dev / mean;           // sigma * mu
    d.shape = 1.0 / (ratio * ratio);
    d.scale = std_dev * std_dev / mean;            // sigma^2 mu
  }
  return d;
}

double ServiceDistribution::sample(std::mt19937_64& rng) const {
  switch (family) {
    case ServiceFamily::Deterministic:
      return mean;
    case ServiceFamily::Exponential:
      return std::exponential_distribution<double>(1.0 / mean)(rng);
    case ServiceFamily::Gamma:
      return std::gamma_distribution<double>(shape, scale)(rng);
  }
  return mean;
}

SimulationReport simulate_ddp(const QueueParams& q, double lambda_s, PriorityRatio beta,
                              const ServiceDistribution& dist, const SimConfig& cfg) {
  check_sim_inputs(q, lambda_s, cfg);
  const std::int64_t warmup = effective_warmup(cfg);

  std::vector<ReplicationResult> results;
  results.reserve(static_cast<std::size_t>(cfg.replications));
  for (int rep = 0; rep < cfg.replications; ++rep) {
    double sum_p = 0.0, sum_s = 0.0;
    std::int64_t n_p = 0, n_s = 0;
    run_replication(q, lambda_s, beta, dist, cfg.seed, static_cast<std::uint64_t>(rep),
                    cfg.departures_per_replication,
                    [&](std::int64_t index, double arrival, double start, int cls) {
                      if (index < warmup) return;
                      const double wait = start - arrival;
                      if (cls == 0) {
                        sum_p += wait;
                        ++n_p;
                      } else {
                        sum_s += wait;
                        ++n_s;
                      }
                    });
    ReplicationResult r;
    r.count_p = n_p;
    r.count_s = n_s;
    r.w_p_mean = n_p > 0 ? sum_p / static_cast<double>(n_p) : 0.0;
    r.w_s_mean = n_s > 0 ? sum_s / static_cast<double>(n_s) : 0.0;
    results.push_back(r);
  }

  SimulationReport report;
  report.replications = cfg.replications;
  const double n = static_cast<double>(cfg.replications);
  double mean_p = 0.0, mean_s = 0.0;
  for (const auto& r : results) {
    mean_p += r.w_p_mean;
    mean_s += r.w_s_mean;
    report.count_p += r.count_p;
    report.count_s += r.count_s;
  }
  mean_p /= n;
  mean_s /= n;
  report.w_p_est = mean_p;
  report.w_s_est = mean_s;

  if (cfg.replications >= 2) {
    double ss_p = 0.0, ss_s = 0.0;
    for (const auto& r : results) {
      ss_p += (r.w_p_mean - mean_p) * (r.w_p_mean - mean_p);
      ss_s += (r.w_s_mean - mean_s) * (r.w_s_mean - mean_s);
    }
    const double t = student_t_975(cfg.replications - 1);
    report.w_p_ci_half = t * std::sqrt(ss_p / (n - 1.0)) / std::sqrt(n);
    report.w_s_ci_half = t * std::sqrt(ss_s / (n - 1.0)) / std::sqrt(n);
  }
  return report;
}

std::vector<std::pair<PriorityRatio, SimulationReport>> frontier_sweep(
    const QueueParams& q, double lambda_s, const std::vector<PriorityRatio>& betas,
    const ServiceDistribution& dist, const SimConfig& cfg) {
  std::vector<std::pair<PriorityRatio, SimulationReport>> out;
  out.reserve(betas.size());
  for (const PriorityRatio& beta : betas)
    out.emplace_back(beta, simulate_ddp(q, lambda_s, beta, dist, cfg));
  return out;
}

std::vector<ServiceRecord> simulate_trace(const QueueParams& q, double lambda_s,
                                          PriorityRatio beta, const ServiceDistribution& dist,
                                          std::uint64_t seed, std::int64_t departures) {
  SimConfig probe;
  probe.seed = seed;
  probe.replications = 1;
  probe.departures_per_replication = departures;
  probe.warmup_departures = 0;
  check_sim_inputs(q, lambda_s, probe);

  std::vector<ServiceRecord> trace;
  trace.reserve(static_cast<std::size_t>(departures));
  run_replication(q, lambda_s, beta, dist, seed, 0, departures,
                  [&](std::int64_t, double arrival, double start, int cls) {
                    trace.push_back({arrival, start, cls});
                  });
  return trace;
}

double student_t_975(int df) {
  if (df < 1) throw InvalidParameter("degrees of freedom must be >= 1");
  static constexpr double table[] = {
      12.7062, 4.30265, 3.18245, 2.77645, 2.57058, 2.44691, 2.36462, 2.30600,
      2.26216, 2.22814, 2.20099, 2.17881, 2.16037, 2.14479, 2.13145, 2.11991,
      2.10982, 2.10092, 2.09302, 2.08596, 2.07961, 2.07387, 2.06866, 2.06390,
      2.05954, 2.05553, 2.05183, 2.04841, 2.04523, 2.04227};
  if (df <= 30) return table[df - 1];
  if (df >= 200) return 1.96;
  // Smooth tail approximation, accurate to ~1e-3 over 30 < df < 200.
  const double z = 1.959963985;
  const double d = static_cast<double>(df);
  return z + (z * z * z + z) / (4.0 * d) + (5.0 * z * z * z * z * z + 16.0 * z * z * z + 3.0 * z) / (96.0 * d * d);
}

}  // namespace qpricer
