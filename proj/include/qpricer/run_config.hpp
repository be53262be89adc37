#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpricer/analytic_queue.hpp"
#include "qpricer/optimizer.hpp"
#include "qpricer/simulator.hpp"
#include "qpricer/types.hpp"

namespace qpricer {

// All rates are per unit time and all times share that unit; units are the
// user's contract and are never converted.
struct OutputSpec {
  std::string path;              // empty: stdout
  std::string format = "table";  // table | csv | json
  int precision = 6;
};

struct SimSpec {
  SimConfig cfg;
  std::optional<double> lambda_s;       // default: the optimizer's rate
  std::optional<PriorityRatio> beta;    // default: the optimizer's ratio
};

// Parsed and validated run configuration.  Validation failures throw
// ConfigError naming the offending field (e.g. "queue.mu").
struct RunConfig {
  QueueParams queue;
  MarketParams market;
  std::vector<double> s_p_values;
  std::optional<SimSpec> sim;
  OutputSpec output;

  RunConfig(QueueParams q, MarketParams m) : queue(q), market(m) {}

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

// Parses an --sp argument: a single value "8", a comma list "0.3,0.5", or an
// inclusive range "0.3:0.5:0.1".
std::vector<double> parse_sp_argument(const std::string& arg);

}  // namespace qpricer
