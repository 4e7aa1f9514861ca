#include "specshare/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace specshare {

void SummaryStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void SummaryStats::merge(const SummaryStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double total = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

double SummaryStats::stddev() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_ - 1)));
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("SPECSHARE_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct EpisodeSummary {
  double throughput, collision_rate, collision_per_attempt, objective, attempt_fraction, genie;
};

}  // namespace

std::vector<AggregateRow> run_experiment(const ExperimentConfig& config, std::size_t workers,
                                         const ProgressCallback& progress) {
  validate(config);

  std::vector<ExperimentConfig> points;
  if (config.sweep == SweepVariable::None) {
    points.push_back(config);
  } else {
    for (double v : config.sweep_values) points.push_back(apply_sweep_value(config, v));
  }
  const auto specs = policy_specs(config);
  const std::size_t runs = config.runs;
  const std::size_t total = points.size() * specs.size() * runs;

  std::vector<EpisodeSummary> results(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;
  std::size_t done = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total || failed.load()) return;
      const std::size_t run = task % runs;
      const std::size_t policy = (task / runs) % specs.size();
      const std::size_t point = task / (runs * specs.size());
      try {
        const RunMetrics m = run_episode(points[point], specs[policy], config.base_seed + run);
        results[task] = {m.normalized_throughput(), m.collision_rate(), m.collision_per_attempt(),
                         m.objective(), m.attempt_fraction(), m.genie_throughput()};
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
      if (progress) {
        std::lock_guard lock(mutex);
        progress(++done, total);
      }
    }
  };

  const std::size_t pool = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(total, 1));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (std::size_t i = 0; i < pool; ++i) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Fold strictly in run order so the floating-point result is the same
  // whichever worker produced each episode.
  std::vector<AggregateRow> rows;
  rows.reserve(points.size() * specs.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      AggregateRow row;
      row.sweep = config.sweep;
      if (config.sweep != SweepVariable::None) row.sweep_value = config.sweep_values[p];
      row.policy = specs[s].name();
      row.runs = runs;
      for (std::size_t r = 0; r < runs; ++r) {
        const EpisodeSummary& e = results[(p * specs.size() + s) * runs + r];
        row.throughput.add(e.throughput);
        row.collision_rate.add(e.collision_rate);
        row.collision_per_attempt.add(e.collision_per_attempt);
        row.objective.add(e.objective);
        row.attempt_fraction.add(e.attempt_fraction);
        row.genie_throughput.add(e.genie);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

const char* const kCsvHeader =
    "sweep_var,sweep_value,policy,runs,mean_throughput,std_throughput,mean_collision_rate,"
    "std_collision_rate,mean_collision_per_attempt,mean_objective,mean_attempt_fraction";

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.sweep) << ',' << (r.sweep_value ? format_float(*r.sweep_value) : "") << ','
        << r.policy << ',' << r.runs << ',' << format_float(r.throughput.mean()) << ','
        << format_float(r.throughput.stddev()) << ',' << format_float(r.collision_rate.mean()) << ','
        << format_float(r.collision_rate.stddev()) << ','
        << format_float(r.collision_per_attempt.mean()) << ',' << format_float(r.objective.mean())
        << ',' << format_float(r.attempt_fraction.mean()) << '\n';
  }
}

}  // namespace specshare
