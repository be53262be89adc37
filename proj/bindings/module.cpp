#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/cubic.hpp"
#include "qpricer/game.hpp"
#include "qpricer/optimizer.hpp"
#include "qpricer/simulator.hpp"

namespace py = pybind11;
using namespace qpricer;

namespace {

// Accepts float("inf") on the python side.
PriorityRatio to_ratio(double beta) {
  return std::isinf(beta) ? PriorityRatio::infinity() : PriorityRatio(beta);
}

double from_ratio(PriorityRatio beta) {
  return beta.is_infinite() ? std::numeric_limits<double>::infinity() : beta.value();
}

}  // namespace

PYBIND11_MODULE(_qpricer, m) {
  m.doc() = "Revenue-optimal pricing and delay-dependent scheduling for a shared two-class queue";

  py::register_exception<InvalidParameter>(m, "InvalidParameterError", PyExc_ValueError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
  py::register_exception<RegionError>(m, "RegionError", PyExc_ValueError);

  py::class_<QueueParams>(m, "QueueParams")
      .def(py::init<double, double, double>(), py::arg("lambda_p"), py::arg("mu"),
           py::arg("sigma"))
      .def_readonly("lambda_p", &QueueParams::lambda_p)
      .def_readonly("mu", &QueueParams::mu)
      .def_readonly("sigma", &QueueParams::sigma)
      .def_readonly("psi", &QueueParams::psi);

  py::class_<MarketParams>(m, "MarketParams")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
      .def_readonly("a", &MarketParams::a)
      .def_readonly("b", &MarketParams::b)
      .def_readonly("c", &MarketParams::c);

  py::class_<WaitPair>(m, "WaitPair")
      .def_readonly("w_p", &WaitPair::w_p)
      .def_readonly("w_s", &WaitPair::w_s);

  py::enum_<Region>(m, "Region")
      .value("INFEASIBLE", Region::Infeasible)
      .value("I_MINUS", Region::IMinus)
      .value("I", Region::I)
      .value("I_PLUS", Region::IPlus)
      .value("J_MINUS", Region::JMinus)
      .value("J", Region::J);

  py::class_<RegionReport>(m, "RegionReport")
      .def_readonly("s_p", &RegionReport::s_p)
      .def_readonly("s_hat_p", &RegionReport::s_hat_p)
      .def_readonly("j_l", &RegionReport::j_l)
      .def_readonly("lambda_s1", &RegionReport::lambda_s1)
      .def_readonly("lambda_s3", &RegionReport::lambda_s3)
      .def_readonly("i_l", &RegionReport::i_l)
      .def_readonly("i_u", &RegionReport::i_u)
      .def_readonly("region", &RegionReport::region);

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def_readonly("lambda_s", &OperatingPoint::lambda_s)
      .def_property_readonly("beta",
                             [](const OperatingPoint& op) { return from_ratio(op.beta); })
      .def_readonly("theta", &OperatingPoint::theta)
      .def_readonly("s_s", &OperatingPoint::s_s)
      .def_readonly("revenue", &OperatingPoint::revenue)
      .def_readonly("region", &OperatingPoint::region)
      .def_readonly("theta_valid", &OperatingPoint::theta_valid);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("w_p_est", &SimulationReport::w_p_est)
      .def_readonly("w_s_est", &SimulationReport::w_s_est)
      .def_readonly("w_p_ci_half", &SimulationReport::w_p_ci_half)
      .def_readonly("w_s_ci_half", &SimulationReport::w_s_ci_half)
      .def_readonly("count_p", &SimulationReport::count_p)
      .def_readonly("count_s", &SimulationReport::count_s)
      .def_readonly("replications", &SimulationReport::replications);

  py::class_<NEReport>(m, "NEReport")
      .def_readonly("is_equilibrium", &NEReport::is_equilibrium)
      .def_readonly("provider_deviation_gain", &NEReport::provider_deviation_gain)
      .def_readonly("user_deviation_gain", &NEReport::user_deviation_gain)
      .def_readonly("revenue", &NEReport::revenue)
      .def_property_readonly("theta",
                             [](const NEReport& r) { return r.profile.provider.theta; })
      .def_property_readonly("s_s", [](const NEReport& r) { return r.profile.provider.s_s; })
      .def_property_readonly("beta",
                             [](const NEReport& r) { return from_ratio(r.profile.provider.beta); })
      .def_property_readonly("lambda_s",
                             [](const NEReport& r) { return r.profile.user.lambda_s; });

  m.def("compute_psi", &compute_psi, py::arg("sigma"), py::arg("mu"));
  m.def("w_fcfs", &w_fcfs, py::arg("queue"), py::arg("lambda_s"));
  m.def(
      "mean_wait",
      [](const QueueParams& q, double lambda_s, double beta) {
        return mean_wait(q, lambda_s, to_ratio(beta));
      },
      py::arg("queue"), py::arg("lambda_s"), py::arg("beta"));

  m.def("classify_region",
        py::overload_cast<const QueueParams&, const MarketParams&, double>(&classify_region),
        py::arg("queue"), py::arg("market"), py::arg("s_p"));
  m.def("optimize",
        py::overload_cast<const QueueParams&, const MarketParams&, double>(&optimize),
        py::arg("queue"), py::arg("market"), py::arg("s_p"));
  m.def(
      "objective_p1",
      [](const QueueParams& q, const MarketParams& m_, double lambda_s, double beta) {
        return objective_p1(q, m_, lambda_s, to_ratio(beta));
      },
      py::arg("queue"), py::arg("market"), py::arg("lambda_s"), py::arg("beta"));
  m.def("objective_p2",
        py::overload_cast<const QueueParams&, const MarketParams&, double>(&objective_p2),
        py::arg("queue"), py::arg("market"), py::arg("lambda_s"));
  m.def("sensitivity",
        py::overload_cast<const QueueParams&, const MarketParams&, double>(&sensitivity),
        py::arg("queue"), py::arg("market"), py::arg("s_p"));

  m.def(
      "best_response_provider",
      [](const QueueParams& q, const MarketParams& m_, double s_p, double lambda_s_bar) {
        const ProviderStrategy ps = best_response_provider(q, m_, s_p, lambda_s_bar);
        return py::make_tuple(ps.theta, ps.s_s, from_ratio(ps.beta));
      },
      py::arg("queue"), py::arg("market"), py::arg("s_p"), py::arg("lambda_s_bar"));
  m.def(
      "best_response_user",
      [](const MarketParams& m_, double theta, double s_s) {
        return best_response_user(m_, ProviderStrategy{theta, s_s, PriorityRatio(0.0), true})
            .lambda_s;
      },
      py::arg("market"), py::arg("theta"), py::arg("s_s"));
  m.def(
      "run_dynamics",
      [](const QueueParams& q, const MarketParams& m_, double s_p, double lambda_s_bar) {
        return run_dynamics(q, m_, s_p, UserStrategy{lambda_s_bar});
      },
      py::arg("queue"), py::arg("market"), py::arg("s_p"), py::arg("lambda_s_bar"));
  m.def(
      "verify_ne",
      [](const QueueParams& q, const MarketParams& m_, double s_p, double theta, double s_s,
         double beta, double lambda_s) {
        StrategyProfile profile;
        profile.provider = ProviderStrategy{theta, s_s, to_ratio(beta), theta >= 0.0};
        profile.user = UserStrategy{lambda_s};
        return verify_ne(q, m_, s_p, profile);
      },
      py::arg("queue"), py::arg("market"), py::arg("s_p"), py::arg("theta"), py::arg("s_s"),
      py::arg("beta"), py::arg("lambda_s"));
  m.def(
      "ne_continuum",
      [](const QueueParams& q, const MarketParams& m_, double s_p, int grid_size) {
        return ne_continuum(q, m_, s_p, grid_size);
      },
      py::arg("queue"), py::arg("market"), py::arg("s_p"), py::arg("grid_size"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init([](std::uint64_t seed, int replications, std::int64_t departures,
                       std::int64_t warmup) {
             SimConfig cfg;
             cfg.seed = seed;
             cfg.replications = replications;
             cfg.departures_per_replication = departures;
             cfg.warmup_departures = warmup;
             return cfg;
           }),
           py::arg("seed") = 1, py::arg("replications") = 10,
           py::arg("departures_per_replication") = 200000, py::arg("warmup_departures") = -1)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("replications", &SimConfig::replications)
      .def_readwrite("departures_per_replication", &SimConfig::departures_per_replication)
      .def_readwrite("warmup_departures", &SimConfig::warmup_departures);

  m.def(
      "simulate_ddp",
      [](const QueueParams& q, double lambda_s, double beta, const SimConfig& cfg) {
        return simulate_ddp(q, lambda_s, to_ratio(beta), ServiceDistribution::from_queue(q), cfg);
      },
      py::arg("queue"), py::arg("lambda_s"), py::arg("beta"), py::arg("cfg") = SimConfig{});
  m.def(
      "frontier_sweep",
      [](const QueueParams& q, double lambda_s, const std::vector<double>& betas,
         const SimConfig& cfg) {
        std::vector<PriorityRatio> ratios;
        ratios.reserve(betas.size());
        for (double b : betas) ratios.push_back(to_ratio(b));
        std::vector<std::pair<double, SimulationReport>> out;
        for (auto& [beta, report] :
             frontier_sweep(q, lambda_s, ratios, ServiceDistribution::from_queue(q), cfg))
          out.emplace_back(from_ratio(beta), report);
        return out;
      },
      py::arg("queue"), py::arg("lambda_s"), py::arg("betas"), py::arg("cfg") = SimConfig{});
}
