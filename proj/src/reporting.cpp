#include "qpricer/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qpricer {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json beta_json(PriorityRatio beta) {
  if (beta.is_infinite()) return "inf";
  return beta.value();
}
}  // namespace

std::string format_double(double v, int significant_digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

std::string beta_to_string(PriorityRatio beta, int significant_digits) {
  return beta.is_infinite() ? "inf" : format_double(beta.value(), significant_digits);
}

PriorityRatio beta_from_string(const std::string& s) {
  if (s == "inf") return PriorityRatio::infinity();
  try {
    return PriorityRatio(std::stod(s));
  } catch (const std::exception&) {
    throw InvalidParameter("beta must be a nonnegative number or \"inf\"");
  }
}

Region region_from_name(const std::string& name) {
  for (Region r : {Region::Infeasible, Region::IMinus, Region::I, Region::IPlus,
                   Region::JMinus, Region::J})
    if (name == region_name(r)) return r;
  throw InvalidParameter("unknown region name: " + name);
}

std::string binding_to_string(const BindingFlags& f) {
  std::string s(4, '0');
  s[0] = f.primary_sla ? '1' : '0';
  s[1] = f.secondary_sla ? '1' : '0';
  s[2] = f.stability ? '1' : '0';
  s[3] = f.demand ? '1' : '0';
  return s;
}

BindingFlags binding_from_string(const std::string& s) {
  if (s.size() != 4) throw InvalidParameter("binding flags must be 4 characters");
  return {s[0] == '1', s[1] == '1', s[2] == '1', s[3] == '1'};
}

SweepRow make_sweep_row(const QueueParams& q, const MarketParams& m,
                        const RegionReport& report) {
  SweepRow row;
  row.s_p = report.s_p;
  row.op = optimize(q, m, report);
  if (report.region == Region::Infeasible) {
    row.sensitivity = kNaN;
    row.w_p = kNaN;
  } else {
    row.sensitivity = sensitivity(q, m, report);
    row.w_p = mean_wait(q, row.op.lambda_s, row.op.beta).w_p;
  }
  return row;
}

std::string csv_header() {
  return "s_p,region,lambda_s,beta,theta,s_s,revenue,sensitivity,w_p,binding";
}

std::string to_csv_row(const SweepRow& row, int precision) {
  std::ostringstream out;
  out << format_double(row.s_p, precision) << ',' << region_name(row.op.region) << ','
      << format_double(row.op.lambda_s, precision) << ',';
  if (row.op.region == Region::Infeasible) {
    out << ",,,,,," << binding_to_string(row.op.binding);
    return out.str();
  }
  out << beta_to_string(row.op.beta, precision) << ','
      << format_double(row.op.theta, precision) << ','
      << format_double(row.op.s_s, precision) << ','
      << format_double(row.op.revenue, precision) << ','
      << format_double(row.sensitivity, precision) << ','
      << format_double(row.w_p, precision) << ',' << binding_to_string(row.op.binding);
  return out.str();
}

SweepRow parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (line.size() && line.back() == ',') fields.push_back("");
  if (fields.size() != 10) throw InvalidParameter("expected 10 CSV fields");

  const auto num = [](const std::string& s) { return s.empty() ? kNaN : std::stod(s); };
  SweepRow row;
  row.s_p = num(fields[0]);
  row.op.region = region_from_name(fields[1]);
  row.op.lambda_s = num(fields[2]);
  if (row.op.region != Region::Infeasible) {
    row.op.beta = beta_from_string(fields[3]);
    row.op.theta = num(fields[4]);
    row.op.s_s = num(fields[5]);
    row.op.revenue = num(fields[6]);
    row.sensitivity = num(fields[7]);
    row.w_p = num(fields[8]);
  } else {
    row.sensitivity = kNaN;
    row.w_p = kNaN;
  }
  row.op.binding = binding_from_string(fields[9]);
  return row;
}

std::string operating_point_json(const SweepRow& row, int precision) {
  (void)precision;  // JSON carries full double precision
  nlohmann::json j;
  j["s_p"] = row.s_p;
  j["region"] = region_name(row.op.region);
  j["lambda_s"] = row.op.lambda_s;
  if (row.op.region != Region::Infeasible) {
    j["beta"] = beta_json(row.op.beta);
    j["theta"] = row.op.theta;
    j["s_s"] = row.op.s_s;
    j["revenue"] = row.op.revenue;
    j["sensitivity"] = row.sensitivity;
    j["w_p"] = row.w_p;
    j["theta_valid"] = row.op.theta_valid;
  }
  j["binding"] = {{"primary_sla", row.op.binding.primary_sla},
                  {"secondary_sla", row.op.binding.secondary_sla},
                  {"stability", row.op.binding.stability},
                  {"demand", row.op.binding.demand}};
  return j.dump(2);
}

std::string ne_report_json(const NEReport& report, int precision) {
  (void)precision;
  nlohmann::json j;
  j["provider"] = {{"theta", report.profile.provider.theta},
                   {"s_s", report.profile.provider.s_s},
                   {"beta", beta_json(report.profile.provider.beta)},
                   {"theta_valid", report.profile.provider.theta_valid}};
  j["user"] = {{"lambda_s", report.profile.user.lambda_s}};
  j["is_equilibrium"] = report.is_equilibrium;
  j["provider_deviation_gain"] = report.provider_deviation_gain;
  j["user_deviation_gain"] = report.user_deviation_gain;
  j["revenue"] = report.revenue;
  return j.dump(2);
}

std::string simulation_report_json(const SimulationReport& report, const WaitPair& analytic,
                                   int precision) {
  (void)precision;
  nlohmann::json j;
  j["w_p_est"] = report.w_p_est;
  j["w_s_est"] = report.w_s_est;
  j["w_p_ci_half"] = report.w_p_ci_half;
  j["w_s_ci_half"] = report.w_s_ci_half;
  j["count_p"] = report.count_p;
  j["count_s"] = report.count_s;
  j["replications"] = report.replications;
  j["analytic_w_p"] = analytic.w_p;
  j["analytic_w_s"] = analytic.w_s;
  j["w_p_covered"] = std::abs(report.w_p_est - analytic.w_p) <= report.w_p_ci_half;
  j["w_s_covered"] = std::abs(report.w_s_est - analytic.w_s) <= report.w_s_ci_half;
  return j.dump(2);
}

}  // namespace qpricer
