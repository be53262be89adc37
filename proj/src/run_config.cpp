#include "qpricer/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qpricer {

namespace {

using nlohmann::json;

double require_number(const json& section, const std::string& prefix, const std::string& key) {
  if (!section.contains(key)) throw ConfigError(prefix + "." + key, "missing required field");
  const json& v = section.at(key);
  if (!v.is_number()) throw ConfigError(prefix + "." + key, "must be a number");
  return v.get<double>();
}

std::vector<double> parse_sla(const json& root) {
  if (!root.contains("sla")) throw ConfigError("sla", "missing required section");
  const json& sla = root.at("sla");
  if (!sla.contains("s_p")) throw ConfigError("sla.s_p", "missing required field");
  const json& sp = sla.at("s_p");
  std::vector<double> values;
  if (sp.is_number()) {
    values.push_back(sp.get<double>());
  } else if (sp.is_array()) {
    for (const json& v : sp) {
      if (!v.is_number()) throw ConfigError("sla.s_p", "array entries must be numbers");
      values.push_back(v.get<double>());
    }
  } else if (sp.is_object()) {
    const double start = require_number(sp, "sla.s_p", "start");
    const double stop = require_number(sp, "sla.s_p", "stop");
    const double step = require_number(sp, "sla.s_p", "step");
    if (!(step > 0.0)) throw ConfigError("sla.s_p.step", "must be > 0");
    if (stop < start) throw ConfigError("sla.s_p", "stop must be >= start");
    for (double v = start; v <= stop + 1e-12 * step; v += step) values.push_back(v);
  } else {
    throw ConfigError("sla.s_p", "must be a number, an array, or {start, stop, step}");
  }
  if (values.empty()) throw ConfigError("sla.s_p", "must name at least one service level");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("sla.s_p", "values must be finite and > 0");
  return values;
}

SimSpec parse_sim(const json& sim) {
  SimSpec spec;
  if (sim.contains("seed")) {
    if (!sim.at("seed").is_number_integer()) throw ConfigError("sim.seed", "must be an integer");
    spec.cfg.seed = sim.at("seed").get<std::uint64_t>();
  }
  if (sim.contains("replications")) {
    spec.cfg.replications = sim.at("replications").get<int>();
    if (spec.cfg.replications < 1) throw ConfigError("sim.replications", "must be >= 1");
  }
  if (sim.contains("departures_per_replication")) {
    spec.cfg.departures_per_replication = sim.at("departures_per_replication").get<std::int64_t>();
    if (spec.cfg.departures_per_replication < 1)
      throw ConfigError("sim.departures_per_replication", "must be >= 1");
  }
  if (sim.contains("warmup_departures")) {
    spec.cfg.warmup_departures = sim.at("warmup_departures").get<std::int64_t>();
    if (spec.cfg.warmup_departures >= spec.cfg.departures_per_replication)
      throw ConfigError("sim.warmup_departures", "must be < departures_per_replication");
  }
  if (sim.contains("lambda_s")) {
    if (!sim.at("lambda_s").is_number() || sim.at("lambda_s").get<double>() < 0.0)
      throw ConfigError("sim.lambda_s", "must be a number >= 0");
    spec.lambda_s = sim.at("lambda_s").get<double>();
  }
  if (sim.contains("beta")) {
    const json& b = sim.at("beta");
    if (b.is_string() && b.get<std::string>() == "inf") {
      spec.beta = PriorityRatio::infinity();
    } else if (b.is_number() && b.get<double>() >= 0.0) {
      spec.beta = PriorityRatio(b.get<double>());
    } else {
      throw ConfigError("sim.beta", "must be a number >= 0 or \"inf\"");
    }
  }
  return spec;
}

OutputSpec parse_output(const json& out) {
  OutputSpec spec;
  if (out.contains("path")) spec.path = out.at("path").get<std::string>();
  if (out.contains("format")) {
    spec.format = out.at("format").get<std::string>();
    if (spec.format != "table" && spec.format != "csv" && spec.format != "json")
      throw ConfigError("output.format", "must be one of table, csv, json");
  }
  if (out.contains("precision")) {
    spec.precision = out.at("precision").get<int>();
    if (spec.precision < 1 || spec.precision > 17)
      throw ConfigError("output.precision", "must be in [1, 17]");
  }
  return spec;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }

  if (!root.contains("queue")) throw ConfigError("queue", "missing required section");
  if (!root.contains("market")) throw ConfigError("market", "missing required section");

  const json& queue = root.at("queue");
  const json& market = root.at("market");
  const double lambda_p = require_number(queue, "queue", "lambda_p");
  const double mu = require_number(queue, "queue", "mu");
  const double sigma = require_number(queue, "queue", "sigma");
  const double a = require_number(market, "market", "a");
  const double b = require_number(market, "market", "b");
  const double c = require_number(market, "market", "c");

  try {
    RunConfig config{QueueParams(lambda_p, mu, sigma), MarketParams(a, b, c)};
    config.s_p_values = parse_sla(root);
    if (root.contains("sim")) config.sim = parse_sim(root.at("sim"));
    if (root.contains("output")) config.output = parse_output(root.at("output"));
    return config;
  } catch (const ConfigError&) {
    throw;
  } catch (const InstabilityError& e) {
    throw ConfigError("queue", e.what());
  } catch (const InvalidParameter& e) {
    throw ConfigError("queue/market", e.what());
  }
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<double> parse_sp_argument(const std::string& arg) {
  std::vector<double> values;
  const auto parse_one = [](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("--sp", "not a number: " + s);
    }
  };

  if (arg.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream in(arg);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("--sp", "range must be start:stop:step");
    const double start = parse_one(parts[0]);
    const double stop = parse_one(parts[1]);
    const double step = parse_one(parts[2]);
    if (!(step > 0.0)) throw ConfigError("--sp", "step must be > 0");
    if (stop < start) throw ConfigError("--sp", "stop must be >= start");
    for (double v = start; v <= stop + 1e-12 * step; v += step) values.push_back(v);
  } else {
    std::istringstream in(arg);
    std::string part;
    while (std::getline(in, part, ',')) values.push_back(parse_one(part));
  }
  if (values.empty()) throw ConfigError("--sp", "empty service-level list");
  return values;
}

}  // namespace qpricer
