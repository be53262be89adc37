#pragma once

#include <vector>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/optimizer.hpp"
#include "qpricer/types.hpp"

namespace qpricer {

// Absolute tolerance on deviation gains below which a profile counts as an
// equilibrium; revenues at realistic scales are O(1e3).
inline constexpr double kNeTolerance = 1e-6;

// Provider move: admission price, assured secondary service level and the
// scheduling ratio.  theta_valid mirrors the optimizer convention: negative
// prices are reported, not clamped.
struct ProviderStrategy {
  double theta = 0.0;
  double s_s = 0.0;
  PriorityRatio beta{0.0};
  bool theta_valid = true;
};

// User-set move: the offered secondary arrival rate.
struct UserStrategy {
  double lambda_s = 0.0;
};

struct StrategyProfile {
  ProviderStrategy provider;
  UserStrategy user;
};

struct NEReport {
  StrategyProfile profile;
  bool is_equilibrium = false;
  double provider_deviation_gain = 0.0;  // revenue the provider leaves on the table
  double user_deviation_gain = 0.0;      // admitted-rate change the user-set forgoes
  double revenue = 0.0;
};

// Largest scheduling ratio keeping the primary SLA, i.e. the inverse of the
// wait formulas in beta.  Throws InfeasibleError when even beta = 0 violates
// the SLA or the rate saturates the server.
PriorityRatio max_beta_for_sla(const QueueParams& q, double s_p, double lambda_s_bar);

// Provider's best response to an offered rate: grant the secondary class the
// highest priority the SLA allows (minimising its wait), quote that wait, and
// price the residual demand.  The demand and wait constraints bind by
// construction.
ProviderStrategy best_response_provider(const QueueParams& q, const MarketParams& m,
                                        double s_p, double lambda_s_bar);

// User-set's best response: offer the full linear demand at the quoted price
// and service level, floored at zero.
UserStrategy best_response_user(const MarketParams& m, const ProviderStrategy& provider);

// One exchange of best responses starting from the user's rate; the dynamics
// are a fixed point after a single step.
NEReport run_dynamics(const QueueParams& q, const MarketParams& m, double s_p,
                      const UserStrategy& initial_user);

// Re-solves both best responses at a profile and measures deviation gains.
NEReport verify_ne(const QueueParams& q, const MarketParams& m, double s_p,
                   const StrategyProfile& profile);

// Largest user rate admitting a provider best response with a nonnegative
// price; the upper end of the equilibrium continuum.
double max_user_rate(const QueueParams& q, const MarketParams& m, double s_p);

// Equilibria traced over a uniform grid of user rates in (0, max_user_rate].
std::vector<NEReport> ne_continuum(const QueueParams& q, const MarketParams& m, double s_p,
                                   int grid_size);

}  // namespace qpricer
