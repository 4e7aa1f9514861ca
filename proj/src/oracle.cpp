#include "specshare/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "specshare/experiment.hpp"
#include "specshare/indices.hpp"

namespace specshare {

namespace {

constexpr int kMonotoneAgeLimit = 5000;

double reward_of(const ChannelParams& params, const Threshold& h, double cost) {
  return h.is_finite() ? average_reward(params, h.value(), cost) : 0.0;
}

}  // namespace

double OracleRow::abs_error() const { return std::abs(closed_form_gain - dp_gain); }

bool OracleReport::passed() const {
  const bool rows_ok = std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) {
    return r.thresholds_agree && r.threshold_type;
  });
  return rows_ok && max_gain_error <= limits.gain_error &&
         max_indifference_residual <= limits.indifference && max_limit_error <= limits.limit &&
         whittle_zero_at_origin && whittle_monotone;
}

OracleReport oracle_check(const OracleGrid& grid, const OracleLimits& limits) {
  OracleReport report;
  report.limits = limits;

  for (double q : grid.q) {
    const ChannelParams params(q);
    for (double d : grid.cost) {
      OracleRow row;
      row.q = q;
      row.cost = d;
      const ThresholdPolicyEval cf = evaluate_optimal(params, d);
      const DpSolution dp = solve_dp(params, d, grid.delta_max, grid.tolerance);
      row.closed_form_threshold = cf.threshold;
      row.closed_form_gain = cf.gain;
      row.dp_threshold = dp.threshold();
      row.dp_gain = dp.gain;
      row.threshold_type = dp.is_threshold_type();
      row.thresholds_agree =
          row.closed_form_threshold == row.dp_threshold ||
          std::abs(reward_of(params, row.closed_form_threshold, d) -
                   reward_of(params, row.dp_threshold, d)) <= 1e-9;
      report.max_gain_error = std::max(report.max_gain_error, row.abs_error());
      report.rows.push_back(row);
    }

    if (whittle_value(params, 1) != 0.0) report.whittle_zero_at_origin = false;
    for (int h = grid.whittle_h_min; h <= grid.whittle_h_max; ++h) {
      const double w = whittle_value(params, h);
      const double residual =
          std::abs(average_reward(params, h - 1, w) - average_reward(params, h, w));
      report.max_indifference_residual = std::max(report.max_indifference_residual, residual);
    }
    double previous = whittle_value(params, 1);
    for (int age = 2; age <= kMonotoneAgeLimit; ++age) {
      const double w = whittle_value(params, age);
      if (w < previous) report.whittle_monotone = false;
      previous = w;
    }
    report.max_limit_error =
        std::max(report.max_limit_error, std::abs(previous - 1.0 / (1.0 + 2.0 * q)));
  }
  return report;
}

void write_oracle_table(std::ostream& out, const OracleReport& report) {
  out << "q,D,H_closed_form,H_dp,gain_closed_form,gain_dp,abs_error\n";
  for (const auto& r : report.rows) {
    out << format_float(r.q) << ',' << format_float(r.cost) << ','
        << r.closed_form_threshold.to_string() << ',' << r.dp_threshold.to_string() << ','
        << format_float(r.closed_form_gain) << ',' << format_float(r.dp_gain) << ','
        << format_float(r.abs_error()) << '\n';
  }
}

void write_oracle_summary(std::ostream& out, const OracleReport& report) {
  const auto disagreements = std::count_if(report.rows.begin(), report.rows.end(),
                                           [](const OracleRow& r) { return !r.thresholds_agree; });
  const auto non_threshold = std::count_if(report.rows.begin(), report.rows.end(),
                                           [](const OracleRow& r) { return !r.threshold_type; });
  out << "max gain error:            " << format_float(report.max_gain_error) << " (limit "
      << format_float(report.limits.gain_error) << ")\n"
      << "max indifference residual: " << format_float(report.max_indifference_residual)
      << " (limit " << format_float(report.limits.indifference) << ")\n"
      << "max limit error:           " << format_float(report.max_limit_error) << " (limit "
      << format_float(report.limits.limit) << ")\n"
      << "threshold disagreements:   " << disagreements << '\n'
      << "non-threshold DP policies: " << non_threshold << '\n'
      << "W(1,1) == 0:               " << (report.whittle_zero_at_origin ? "yes" : "no") << '\n'
      << "W nondecreasing in age:    " << (report.whittle_monotone ? "yes" : "no") << '\n'
      << (report.passed() ? "oracle check passed" : "oracle check FAILED") << '\n';
}

}  // namespace specshare
