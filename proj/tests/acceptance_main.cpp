// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.  Expected values are checked
// against the published table for the canonical parameter set; cells whose
// printed values fail an independent identity oracle (closing identity,
// conservation law, binding-SLA closed form) are flagged and matched against
// the oracle value instead.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/cubic.hpp"
#include "qpricer/game.hpp"
#include "qpricer/optimizer.hpp"
#include "qpricer/simulator.hpp"

using namespace qpricer;

namespace {

const QueueParams kQueue(6.0, 12.0, 0.2);
const MarketParams kMarket(120.0, 0.1, 0.3);
constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  g_notes.push_back(buf);
}

template <typename F>
void criterion(int index, const char* name, F&& body) {
  g_notes.clear();
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", index, name, seconds);
  for (const std::string& n : g_notes) std::printf("        %s\n", n.c_str());
  if (!error.empty()) std::printf("        exception: %s\n", error.c_str());
  if (!ok) ++g_failures;
}

bool expect(bool ok, const char* fmt, ...) {
  if (!ok) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, ap);
    va_end(ap);
    g_notes.push_back(std::string("FAILED: ") + buf);
  }
  return ok;
}

// ---- independent oracles (no calls into the library's solve path) ----

double oracle_g(double x, double a, double c) {
  const double mu = 12.0, lp = 6.0, psi = 3.38, phi0 = 6.0;
  return 2.0 * mu * x * x * x - (c * psi + mu * (a + 4.0 * phi0)) * x * x +
         2.0 * phi0 * (c * psi + mu * (a + phi0)) * x - a * mu * phi0 * phi0 +
         c * psi * lp * (mu + phi0);
}

double oracle_root_ls1() {
  double lo = 0.0, hi = 6.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_g(lo, 120.0, 0.3) * oracle_g(mid, 120.0, 0.3) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Binding primary SLA at beta = infinity, solved by the quadratic formula.
double oracle_ls4(double s_p) {
  const double mu = 12.0, lp = 6.0, psi = 3.38;
  const double disc = (s_p * lp + psi) * (s_p * lp + psi) + 4.0 * mu * psi * s_p;
  return (s_p * (2.0 * mu - lp) + psi - std::sqrt(disc)) / (2.0 * s_p);
}

double oracle_wfcfs(double lambda_s) {
  const double lambda = 6.0 + lambda_s;
  return lambda * 3.38 / (12.0 * (12.0 - lambda));
}

// Conservation law with the primary SLA binding: s_s from (rho W_F - rho_p s_p) / rho_s.
double oracle_ss_binding(double lambda_s, double s_p) {
  const double rho_p = 0.5, rho_s = lambda_s / 12.0;
  return ((rho_p + rho_s) * oracle_wfcfs(lambda_s) - rho_p * s_p) / rho_s;
}

// ---- criterion 1 ----

struct TableRow {
  double s_p;
  double beta;  // kInf for the static-priority rows
  double lambda_s, theta, s_s, revenue;
  // Which region's rate oracle applies.
  enum { RateBeta0, RateRoot, RateBetaInf } rate_kind;
};

const TableRow kTable[] = {
    {0.29, 0.0, 0.1775, 1196.4, 0.5977, 212.36, TableRow::RateBeta0},
    {0.35, 0.0, 1.4556, 1182.7, 0.9242, 1721.54, TableRow::RateBeta0},
    {0.45, 0.0, 3.5858, 1157.4, 2.23, 4150.20, TableRow::RateBeta0},
    {0.75, 0.011, 5.6655, 1085, 19.432, 6147.07, TableRow::RateRoot},
    {1.0, 0.025, 5.6655, 1085, 19.1672, 6147.07, TableRow::RateRoot},
    {8.0, 0.6715, 5.6655, 1108.1, 11.754, 6277.94, TableRow::RateRoot},
    {9.823, 1.0, 5.6655, 1113.9, 9.8233, 6310.80, TableRow::RateRoot},
    {10.0, 1.0389, 5.6655, 1144, 9.6359, 6481.33, TableRow::RateRoot},
    {12.0, 1.624, 5.6655, 1208, 7.5178, 6843.92, TableRow::RateRoot},
    {19.0, kInf, 5.6719, 1141.7, 0.5195, 6475.61, TableRow::RateBetaInf},
    {23.0, kInf, 5.72, 1141.2, 0.5264, 6527.66, TableRow::RateBetaInf},
    {32.0, kInf, 5.799, 1140.4, 0.5359, 6613.18, TableRow::RateBetaInf},
};

bool criterion1() {
  bool ok = true;
  const double root = oracle_root_ls1();
  const RegionReport cached = classify_region(kQueue, kMarket, 8.0);
  for (const TableRow& row : kTable) {
    const OperatingPoint op = optimize(kQueue, kMarket, reclassify(cached, row.s_p));

    // Expected admitted rate: the printed value unless it fails the
    // region's own rate identity.
    double rate_oracle = row.lambda_s;
    switch (row.rate_kind) {
      case TableRow::RateBeta0: rate_oracle = 12.0 * 6.0 * row.s_p / 3.38 - 6.0; break;
      case TableRow::RateRoot: rate_oracle = root; break;
      case TableRow::RateBetaInf: rate_oracle = oracle_ls4(row.s_p); break;
    }
    double exp_rate = row.lambda_s;
    if (std::abs(row.lambda_s - rate_oracle) > 1e-3) {
      note("flag s_p=%g: printed lambda_s=%g fails the binding-rate identity (%.5f); "
           "matching the identity value",
           row.s_p, row.lambda_s, rate_oracle);
      exp_rate = rate_oracle;
    }

    // Expected assured level: printed unless it fails conservation.  The
    // identity is evaluated at the full-precision binding rate; near
    // saturation it amplifies print rounding of the rate far beyond the
    // cell tolerance.
    const double ss_oracle = oracle_ss_binding(rate_oracle, row.s_p);
    double exp_ss = row.s_s;
    if (std::abs(row.s_s - ss_oracle) > 1e-3) {
      note("flag s_p=%g: printed s_s=%g fails the conservation identity (%.5f); "
           "matching the identity value",
           row.s_p, row.s_s, ss_oracle);
      exp_ss = ss_oracle;
    }

    // Expected price and revenue: printed unless the closing identity
    // theta = (a - c s_s - lambda_s)/b disagrees.
    const double theta_oracle = (120.0 - 0.3 * exp_ss - exp_rate) / 0.1;
    double exp_theta = row.theta;
    if (std::abs(row.theta - theta_oracle) > 0.5) {
      note("flag s_p=%g: printed theta=%g fails the closing identity (%.4f); "
           "matching the identity value",
           row.s_p, row.theta, theta_oracle);
      exp_theta = theta_oracle;
    }
    const double revenue_oracle = exp_theta * exp_rate;
    double exp_revenue = row.revenue;
    if (std::abs(row.revenue - revenue_oracle) > 0.5) {
      note("flag s_p=%g: printed revenue=%g fails theta * lambda_s (%.2f); "
           "matching the identity value",
           row.s_p, row.revenue, revenue_oracle);
      exp_revenue = revenue_oracle;
    }

    ok &= expect(std::abs(op.lambda_s - exp_rate) <= 1e-3, "s_p=%g lambda_s %.6f vs %.6f",
                 row.s_p, op.lambda_s, exp_rate);
    if (std::isinf(row.beta))
      ok &= expect(op.beta.is_infinite(), "s_p=%g beta should be inf", row.s_p);
    else
      ok &= expect(!op.beta.is_infinite() && std::abs(op.beta.value() - row.beta) <= 1e-3,
                   "s_p=%g beta %.5f vs %.5f", row.s_p, op.beta.value(), row.beta);
    ok &= expect(std::abs(op.s_s - exp_ss) <= 1e-3, "s_p=%g s_s %.5f vs %.5f", row.s_p, op.s_s,
                 exp_ss);
    ok &= expect(std::abs(op.theta - exp_theta) <= 0.5, "s_p=%g theta %.4f vs %.4f", row.s_p,
                 op.theta, exp_theta);
    ok &= expect(std::abs(op.revenue - exp_revenue) <= 0.5, "s_p=%g revenue %.2f vs %.2f",
                 row.s_p, op.revenue, exp_revenue);
  }
  return ok;
}

// ---- criterion 2 ----

bool criterion2() {
  bool ok = true;
  const RegionReport report = classify_region(kQueue, kMarket, 8.0);
  ok &= expect(std::abs(report.s_hat_p - 0.28167) <= 1e-4, "s_hat_p = %.6f", report.s_hat_p);
  ok &= expect(report.i_l && std::abs(*report.i_l - 0.5476) <= 1e-3, "i_l = %.6f",
               report.i_l ? *report.i_l : -1.0);
  ok &= expect(report.i_u && std::abs(*report.i_u - 18.61) <= 0.01, "i_u = %.4f",
               report.i_u ? *report.i_u : -1.0);
  const double l1 = 6.0 + *report.lambda_s1;
  const double branch = 3.38 * l1 / (12.0 * (12.0 - l1));
  ok &= expect(std::abs(branch - 9.823) <= 1e-3, "branch point = %.5f", branch);

  // Cross-check against the independent bisection and direct formulas.
  const double root = oracle_root_ls1();
  ok &= expect(std::abs(*report.lambda_s1 - root) <= 1e-9, "root mismatch: %.9f vs %.9f",
               *report.lambda_s1, root);
  ok &= expect(std::abs(report.s_hat_p - 6.0 * 3.38 / (12.0 * 6.0)) <= 1e-12, "s_hat formula");
  ok &= expect(std::abs(*report.i_l - 3.38 * (6.0 + root) / 72.0) <= 1e-9, "i_l formula");
  ok &= expect(
      std::abs(*report.i_u - 3.38 * (6.0 + root) / ((12.0 - root) * (6.0 - root))) <= 1e-9,
      "i_u formula");
  // Optimal ratio at the branch point is one from both formula branches.
  const OperatingPoint bp = optimize(kQueue, kMarket, reclassify(report, branch));
  ok &= expect(std::abs(bp.beta.value() - 1.0) <= 1e-9, "beta at branch point = %.12f",
               bp.beta.value());
  return ok;
}

// ---- criterion 3 ----

bool criterion3() {
  bool ok = true;
  const RegionReport cached = classify_region(kQueue, kMarket, 8.0);
  const double lo = cached.s_hat_p, hi = *cached.i_u, i_l = *cached.i_l;
  const int n = 200;
  std::vector<double> grid(n), o1(n), o2(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * (i + 1) / (n + 1);
    const RegionReport r = reclassify(cached, grid[i]);
    o1[i] = solve_p1(kQueue, kMarket, r).objective;
    o2[i] = solve_p2(kQueue, kMarket, r).objective;
  }
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(o1[i]));
  const double tol = 1e-6 * scale;

  for (int i = 0; i < n; ++i) {
    if (grid[i] < i_l)
      ok &= expect(o1[i] >= o2[i] - tol, "dominance at s_p=%.4f: %.6f < %.6f", grid[i], o1[i],
                   o2[i]);
    if (i > 0) ok &= expect(o2[i] >= o2[i - 1] - tol, "O2 decreasing at s_p=%.4f", grid[i]);
    if (i > 0 && i + 1 < n) {
      const double dd2 = o2[i + 1] - 2.0 * o2[i] + o2[i - 1];
      ok &= expect(dd2 <= tol, "O2 convex kink at s_p=%.4f (%.2e)", grid[i], dd2);
      if (grid[i - 1] >= i_l) {
        const double dd1 = o1[i + 1] - 2.0 * o1[i] + o1[i - 1];
        ok &= expect(std::abs(dd1) <= tol, "O1 not affine at s_p=%.4f (%.2e)", grid[i], dd1);
      }
    }
  }
  return ok;
}

// ---- criterion 4 ----

bool criterion4() {
  bool ok = true;
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int done = 0;
  while (done < 50) {
    const double mu = 4.0 + 21.0 * unit(rng);
    const double lp = (0.15 + 0.7 * unit(rng)) * mu;
    const double sigma = 2.5 * unit(rng) / mu;
    const QueueParams queue(lp, mu, sigma);
    const double psi = queue.psi;
    const double c = 0.05 + 1.95 * unit(rng);
    const double a_l = lp * (2.0 * mu - lp) * c * psi / (mu * (mu - lp) * (mu - lp));
    const double a_tilde_u =
        2.0 * (mu - lp) + (c * psi / lp) * (1.0 + (mu * mu - lp * lp) / (mu * lp));
    if (a_l >= a_tilde_u) continue;
    const double span = a_tilde_u - a_l;
    const double a = a_l + span * (0.001 + 0.998 * unit(rng));
    const MarketParams market(a, 0.1 + unit(rng), c);
    const RegionReport report = classify_region(queue, market, 1.0);
    if (!report.lambda_s1 || !report.lambda_s3) continue;
    ++done;
    ok &= expect(*report.lambda_s3 > *report.lambda_s1,
                 "roots out of order: %.6f <= %.6f (mu=%.3f lp=%.3f a=%.3f c=%.3f)",
                 *report.lambda_s3, *report.lambda_s1, mu, lp, a, c);
    if (std::isfinite(report.j_l))
      ok &= expect(*report.i_u < report.j_l, "I_u %.6f >= J_l %.6f", *report.i_u, report.j_l);
  }
  return ok;
}

// ---- criterion 5 ----

bool criterion5() {
  bool ok = true;
  const RegionReport cached = classify_region(kQueue, kMarket, 8.0);

  // Provider best response reproduces every optimum.
  for (const TableRow& row : kTable) {
    const OperatingPoint op = optimize(kQueue, kMarket, reclassify(cached, row.s_p));
    const ProviderStrategy br = best_response_provider(kQueue, kMarket, row.s_p, op.lambda_s);
    const double theta_step7 = (120.0 - 0.3 * br.s_s - op.lambda_s) / 0.1;
    ok &= expect(std::abs(br.theta - op.theta) <= 1e-6, "s_p=%g BR theta %.8f vs %.8f", row.s_p,
                 br.theta, op.theta);
    ok &= expect(std::abs(br.theta - theta_step7) <= 1e-6, "s_p=%g BR theta identity", row.s_p);
    ok &= expect(std::abs(br.s_s - op.s_s) <= 1e-6, "s_p=%g BR s_s", row.s_p);
    if (op.beta.is_infinite())
      ok &= expect(br.beta.is_infinite(), "s_p=%g BR beta inf", row.s_p);
    else
      ok &= expect(std::abs(br.beta.value() - op.beta.value()) <= 1e-6, "s_p=%g BR beta",
                   row.s_p);
  }

  // One-step convergence over a 100-point grid of user rates.
  const double rate_max = max_user_rate(kQueue, kMarket, 8.0);
  for (int i = 1; i <= 100; ++i) {
    const double ls = rate_max * i / 100.0;
    const ProviderStrategy ps = best_response_provider(kQueue, kMarket, 8.0, ls);
    const double reply = best_response_user(kMarket, ps).lambda_s;
    ok &= expect(std::abs(reply - ls) <= 1e-9, "one-step gap %.2e at lambda=%.4f",
                 std::abs(reply - ls), ls);
  }

  // Every enumerated equilibrium is revenue-dominated by the optimum.
  for (const TableRow& row : kTable) {
    const OperatingPoint op = optimize(kQueue, kMarket, reclassify(cached, row.s_p));
    for (const NEReport& ne : ne_continuum(kQueue, kMarket, row.s_p, 100)) {
      ok &= expect(ne.is_equilibrium, "s_p=%g grid point not an equilibrium", row.s_p);
      ok &= expect(ne.revenue <= op.revenue + 1e-6, "s_p=%g NE revenue %.6f beats %.6f",
                   row.s_p, ne.revenue, op.revenue);
    }
  }
  return ok;
}

// ---- criterion 6 ----

bool criterion6() {
  bool ok = true;
  const ServiceDistribution dist = ServiceDistribution::from_queue(kQueue);
  SimConfig cfg;
  cfg.seed = 20260808;
  cfg.replications = 10;
  cfg.departures_per_replication = 200000;

  const double rates[] = {1.0, 3.0, 5.5};
  const PriorityRatio betas[] = {PriorityRatio(0.25), PriorityRatio(1.0), PriorityRatio(4.0)};
  int covered = 0;
  for (double ls : rates) {
    for (const PriorityRatio& beta : betas) {
      const SimulationReport rep = simulate_ddp(kQueue, ls, beta, dist, cfg);
      const WaitPair w = mean_wait(kQueue, ls, beta);
      const bool cell_covered = std::abs(rep.w_p_est - w.w_p) <= rep.w_p_ci_half &&
                                std::abs(rep.w_s_est - w.w_s) <= rep.w_s_ci_half;
      if (cell_covered) ++covered;
      else
        note("cell (lambda_s=%.1f, beta=%.2f) outside CI: w_p %.4f vs %.4f (+/- %.4f), "
             "w_s %.4f vs %.4f (+/- %.4f)",
             ls, beta.value(), rep.w_p_est, w.w_p, rep.w_p_ci_half, rep.w_s_est, w.w_s,
             rep.w_s_ci_half);

      const double rho_p = 0.5, rho_s = ls / 12.0;
      const double lhs = rho_p * rep.w_p_est + rho_s * rep.w_s_est;
      const double rhs = (rho_p + rho_s) * w_fcfs(kQueue, ls);
      const double tol = 2.0 * (rho_p * rep.w_p_ci_half + rho_s * rep.w_s_ci_half);
      ok &= expect(std::abs(lhs - rhs) <= tol,
                   "conservation gap %.5f > %.5f at (lambda_s=%.1f, beta=%.2f)",
                   std::abs(lhs - rhs), tol, ls, beta.value());
    }
  }
  note("analytic waits inside the simulated 95%% CI in %d of 9 cells", covered);
  ok &= expect(covered >= 8, "coverage %d/9 below 8", covered);

  // Determinism: repeating one cell reproduces the report bit for bit.
  const SimulationReport a = simulate_ddp(kQueue, 3.0, PriorityRatio(1.0), dist, cfg);
  const SimulationReport b = simulate_ddp(kQueue, 3.0, PriorityRatio(1.0), dist, cfg);
  ok &= expect(a.w_p_est == b.w_p_est && a.w_s_est == b.w_s_est &&
                   a.w_p_ci_half == b.w_p_ci_half && a.w_s_ci_half == b.w_s_ci_half &&
                   a.count_p == b.count_p && a.count_s == b.count_s,
               "identical seeds produced different reports");
  return ok;
}

// ---- criterion 7 ----

bool criterion7() {
  bool ok = true;
  const RegionReport cached = classify_region(kQueue, kMarket, 8.0);
  const double lo = cached.s_hat_p, hi = *cached.i_u;
  const double h = 1e-4;
  for (int i = 1; i <= 20; ++i) {
    const double s_p = lo + (hi - lo) * i / 21.0;
    const double analytic = sensitivity(kQueue, kMarket, reclassify(cached, s_p));
    const double fd = (optimize(kQueue, kMarket, reclassify(cached, s_p + h)).revenue -
                       optimize(kQueue, kMarket, reclassify(cached, s_p - h)).revenue) /
                      (2.0 * h);
    ok &= expect(std::abs(analytic - fd) <= 0.01 * std::abs(fd),
                 "s_p=%.4f sensitivity %.6f vs FD %.6f", s_p, analytic, fd);
    ok &= expect(analytic >= 0.0, "negative sensitivity at s_p=%.4f", s_p);
  }
  for (double s_p : {1.0, 8.0, 12.0}) {
    const double analytic = sensitivity(kQueue, kMarket, reclassify(cached, s_p));
    ok &= expect(std::abs(analytic - 18.0) <= 1e-9, "region-I value %.12f != 18", analytic);
  }
  return ok;
}

}  // namespace

int main() {
  std::printf("acceptance suite: canonical parameters a=120 b=0.1 c=0.3 "
              "lambda_p=6 mu=12 sigma=0.2\n");
  criterion(1, "golden table reproduction (12 rows, identity-checked cells flagged)", criterion1);
  criterion(2, "region boundary values", criterion2);
  criterion(3, "objective shape: dominance, concavity, affinity", criterion3);
  criterion(4, "root ordering and interval nesting on 50 random feasible sets", criterion4);
  criterion(5, "game suite: best-response consistency, one-step dynamics, revenue maximality",
            criterion5);
  criterion(6, "simulation oracle: 9-cell coverage, conservation, determinism", criterion6);
  criterion(7, "sensitivity equals finite differences; exact multiplier on I", criterion7);
  if (g_failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures;
}
