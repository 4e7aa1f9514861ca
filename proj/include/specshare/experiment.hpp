#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specshare/config.hpp"
#include "specshare/episode.hpp"

namespace specshare {

/// Running mean and sample variance (Welford), mergeable with Chan's rule.
class SummaryStats {
 public:
  void add(double x);
  void merge(const SummaryStats& other);

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Sample standard deviation; 0 when fewer than two samples.
  double stddev() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct AggregateRow {
  SweepVariable sweep = SweepVariable::None;
  std::optional<double> sweep_value;
  std::string policy;
  std::size_t runs = 0;
  SummaryStats throughput;
  SummaryStats collision_rate;
  SummaryStats collision_per_attempt;
  SummaryStats objective;
  SummaryStats attempt_fraction;
  SummaryStats genie_throughput;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Worker count from SPECSHARE_WORKERS, else the hardware concurrency (>= 1).
std::size_t default_worker_count();

/**
 * Run every (sweep value, policy, run) episode and aggregate per
 * (sweep value, policy). Run r uses seed base_seed + r for every policy and
 * sweep value. Rows come out in sweep-value order, then config policy order,
 * and do not depend on `workers`.
 */
std::vector<AggregateRow> run_experiment(const ExperimentConfig& config, std::size_t workers,
                                         const ProgressCallback& progress = {});

extern const char* const kCsvHeader;

/// `%.9g` rendering used for every float column.
std::string format_float(double v);

void write_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace specshare
