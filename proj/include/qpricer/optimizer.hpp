#pragma once

#include <optional>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/types.hpp"

namespace qpricer {

// Linear demand of the secondary class: lambda_s = a - b theta - c S_s.
struct MarketParams {
  double a;  // maximal demand rate
  double b;  // price elasticity
  double c;  // delay elasticity

  MarketParams(double a, double b, double c);
};

// Which branch of the finite-step solution applies for a given primary
// service level S_p.  Endpoint conventions:
//   IMinus = (S_hat_p, I_l), I = [I_l, I_u), IPlus = [I_u, J_l] or [I_u, inf),
//   JMinus = (S_hat_p, J_l] (low-intercept regime), J = (J_l, inf).
enum class Region { Infeasible, IMinus, I, IPlus, JMinus, J };

const char* region_name(Region r);

// Interval endpoints for a (queue, market) pair plus the label of one S_p.
// Endpoints do not depend on S_p, so a sweep can reuse a report via
// reclassify() without re-running the root finders.
struct RegionReport {
  double s_p = 0.0;
  double s_hat_p = 0.0;                 // minimal feasible primary bound
  bool demand_feasible = false;         // a/c > lambda_p psi / mu^2
  double j_l = 0.0;                     // +inf when J is empty
  std::optional<double> lambda1;        // lambda_p + root of G, when the finite-beta side exists
  std::optional<double> lambda_s1;      // root of G in (0, mu - lambda_p)
  std::optional<double> lambda_s3;      // root of G~ in (0, mu - lambda_p), when it exists
  std::optional<double> i_l;
  std::optional<double> i_u;
  Region region = Region::Infeasible;
};

struct BindingFlags {
  bool primary_sla = false;   // W_p <= S_p tight
  bool secondary_sla = false; // W_s <= S_s tight
  bool stability = false;     // lambda_s <= mu - lambda_p tight (never at an optimum)
  bool demand = false;        // lambda_s <= a - b theta - c S_s tight
};

// Revenue-optimal operating point: admission rate, scheduling ratio, price
// and assured service level, with revenue = theta * lambda_s.  theta_valid
// is false when the closing identity produced a negative price, signalling
// parameters outside the model's operating regime (the value is reported,
// not clamped).
struct OperatingPoint {
  double lambda_s = 0.0;
  PriorityRatio beta{0.0};
  double theta = 0.0;
  double s_s = 0.0;
  double revenue = 0.0;
  Region region = Region::Infeasible;
  BindingFlags binding;
  bool theta_valid = true;
};

RegionReport classify_region(const QueueParams& q, const MarketParams& m, double s_p);

// Relabels a cached report for a new S_p without recomputing endpoints.
RegionReport reclassify(const RegionReport& cached, double s_p);

// Revenue objective with the secondary SLA and demand constraints collapsed
// in:  (a lambda_s - lambda_s^2 - c lambda_s W_s(lambda_s, beta)) / b.
// objective_p1 takes a finite beta; objective_p2 is the beta = infinity case.
double objective_p1(const QueueParams& q, const MarketParams& m, double lambda_s,
                    PriorityRatio beta);
double objective_p2(const QueueParams& q, const MarketParams& m, double lambda_s);

// The finite-step solution of the joint pricing/scheduling problem.
OperatingPoint optimize(const QueueParams& q, const MarketParams& m, double s_p);
OperatingPoint optimize(const QueueParams& q, const MarketParams& m,
                        const RegionReport& report);

// d(optimal revenue)/d(S_p), from the Lagrange multiplier of the binding
// primary-SLA constraint.  Defined on the feasible S_p range; always >= 0.
double sensitivity(const QueueParams& q, const MarketParams& m, double s_p);
double sensitivity(const QueueParams& q, const MarketParams& m,
                   const RegionReport& report);

// Restricted solves used by the shape checks: P1 keeps beta finite (defined
// for S_p in (S_hat_p, I_u)), P2 pins beta = infinity (any feasible S_p).
struct P1Solution {
  double lambda_s;
  PriorityRatio beta;
  double objective;
};
struct P2Solution {
  double lambda_s;
  double objective;
};
P1Solution solve_p1(const QueueParams& q, const MarketParams& m, double s_p);
P2Solution solve_p2(const QueueParams& q, const MarketParams& m, double s_p);
P1Solution solve_p1(const QueueParams& q, const MarketParams& m, const RegionReport& report);
P2Solution solve_p2(const QueueParams& q, const MarketParams& m, const RegionReport& report);

}  // namespace qpricer
