#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpricer/game.hpp"
#include "qpricer/optimizer.hpp"
#include "qpricer/simulator.hpp"

namespace qpricer {

// Significant-digit formatting; infinities print as "inf".
std::string format_double(double v, int significant_digits);
std::string beta_to_string(PriorityRatio beta, int significant_digits);
PriorityRatio beta_from_string(const std::string& s);

Region region_from_name(const std::string& name);

// Binding flags packed as four 0/1 characters: primary SLA, secondary SLA,
// stability, demand.
std::string binding_to_string(const BindingFlags& flags);
BindingFlags binding_from_string(const std::string& s);

// One sweep line; numeric fields are NaN for infeasible service levels.
struct SweepRow {
  double s_p = 0.0;
  OperatingPoint op;
  double sensitivity = 0.0;
  double w_p = 0.0;
};

SweepRow make_sweep_row(const QueueParams& q, const MarketParams& m, const RegionReport& report);

// Fixed CSV schema shared by the sweep command and the round-trip tests.
std::string csv_header();
std::string to_csv_row(const SweepRow& row, int precision);
SweepRow parse_csv_row(const std::string& line);

// JSON renderings for the CLI's --format json.
std::string operating_point_json(const SweepRow& row, int precision);
std::string ne_report_json(const NEReport& report, int precision);
std::string simulation_report_json(const SimulationReport& report, const WaitPair& analytic,
                                   int precision);

}  // namespace qpricer
