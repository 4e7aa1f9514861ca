#pragma once

#include <iosfwd>
#include <vector>

#include "specshare/single_channel.hpp"

namespace specshare {

struct OracleGrid {
  std::vector<double> q{0.05, 0.15, 0.25, 0.35, 0.45};
  std::vector<double> cost{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int delta_max = 200;
  double tolerance = 1e-10;
  int whittle_h_min = 2;
  int whittle_h_max = 50;
};

struct OracleRow {
  double q = 0.0;
  double cost = 0.0;
  Threshold closed_form_threshold = Threshold::never();
  Threshold dp_threshold = Threshold::never();
  double closed_form_gain = 0.0;
  double dp_gain = 0.0;
  bool threshold_type = false;
  /// Same threshold, or both thresholds earn the same closed-form reward.
  bool thresholds_agree = false;

  double abs_error() const;
};

struct OracleLimits {
  double gain_error = 1e-6;
  double indifference = 1e-10;
  double limit = 1e-9;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_gain_error = 0.0;
  double max_indifference_residual = 0.0;
  double max_limit_error = 0.0;
  bool whittle_zero_at_origin = true;
  bool whittle_monotone = true;
  OracleLimits limits;

  bool passed() const;
};

/// Closed-form vs value-iteration comparison plus Whittle index checks.
OracleReport oracle_check(const OracleGrid& grid = {}, const OracleLimits& limits = {});

/// Table as CSV: q,D,H_closed_form,H_dp,gain_closed_form,gain_dp,abs_error.
void write_oracle_table(std::ostream& out, const OracleReport& report);

/// Human-readable verdict lines.
void write_oracle_summary(std::ostream& out, const OracleReport& report);

}  // namespace specshare
