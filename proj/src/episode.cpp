#include "specshare/episode.hpp"

#include <algorithm>
#include <memory>
#include <variant>

#include "specshare/environment.hpp"

namespace specshare {

namespace {

constexpr std::uint64_t kWorldStream = 1;
constexpr std::uint64_t kPolicyStream = 2;
constexpr std::uint64_t kInitStream = 3;

double per_budget_slot(std::uint64_t count, std::size_t budget, std::int64_t horizon) {
  if (budget == 0 || horizon <= 0) return 0.0;
  return static_cast<double>(count) / (static_cast<double>(budget) * static_cast<double>(horizon));
}

}  // namespace

double RunMetrics::normalized_throughput() const { return per_budget_slot(successes, budget, horizon); }
double RunMetrics::genie_throughput() const { return per_budget_slot(genie_successes, budget, horizon); }
double RunMetrics::collision_rate() const { return per_budget_slot(collisions, budget, horizon); }
double RunMetrics::attempt_fraction() const { return per_budget_slot(attempts, budget, horizon); }

double RunMetrics::collision_per_attempt() const {
  return static_cast<double>(collisions) / static_cast<double>(std::max<std::uint64_t>(attempts, 1));
}

double RunMetrics::objective() const {
  return normalized_throughput() - gamma * collision_rate();
}

RunMetrics run_episode(const ExperimentConfig& config, const PolicySpec& policy, std::uint64_t seed,
                       const EpisodeOptions& options) {
  validate(config);
  policy.validate(config.world == WorldKind::Band);

  const RandomStream root(seed);
  RandomStream world_rng = root.substream(kWorldStream);
  RandomStream policy_rng = root.substream(kPolicyStream);
  RandomStream init_rng = root.substream(kInitStream);

  SchedulerContext context;
  context.total_channels = config.channels;
  context.budget = config.budget;
  context.band_width = config.band_width;
  context.band_memory = config.band_memory;
  context.mean_age_mode = config.mean_age;

  std::variant<IndependentWorld, BandWorld> world = [&]() -> std::variant<IndependentWorld, BandWorld> {
    if (config.world == WorldKind::Band) {
      const int n = static_cast<int>(config.channels);
      const int center = 1 + static_cast<int>(init_rng.uniform_index(config.channels));
      return BandWorld(n, config.band_width, center, config.band_sigma);
    }
    context.known_params = channel_params(config);
    std::vector<QSchedule> schedule;
    if (config.nonstationary) {
      schedule = default_nonstationary_schedule(context.known_params, config.horizon,
                                                config.schedule_amplitude);
    }
    return IndependentWorld(context.known_params, init_rng, std::move(schedule));
  }();

  std::unique_ptr<Scheduler> scheduler = make_scheduler(policy, context);
  if (options.configure) options.configure(*scheduler);

  RunMetrics m;
  m.horizon = config.horizon;
  m.budget = config.budget;
  m.gamma = config.gamma;

  std::vector<Occupancy> truth(config.channels);
  std::vector<ChannelObservation> outcomes;
  outcomes.reserve(config.budget);
  std::uint64_t window_successes = 0;

  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const Decision decision = scheduler->decide(policy_rng);

    if (auto* w = std::get_if<IndependentWorld>(&world)) {
      std::copy(w->occupancy().begin(), w->occupancy().end(), truth.begin());
    } else {
      truth = std::get<BandWorld>(world).occupancy();
    }

    outcomes.clear();
    for (ChannelId c : decision.transmit_set) {
      outcomes.push_back({c, truth[c]});
      ++m.attempts;
      if (truth[c] == Occupancy::Free) {
        ++m.successes;
        ++window_successes;
      } else {
        ++m.collisions;
      }
    }
    const auto free_now = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), Occupancy::Free));
    m.genie_successes += std::min(free_now, config.budget);

    if (options.on_slot) options.on_slot(t, decision, truth, *scheduler);

    if (auto* w = std::get_if<IndependentWorld>(&world)) {
      w->step(t, world_rng);
    } else {
      std::get<BandWorld>(world).step(world_rng);
    }
    scheduler->observe(decision, outcomes);

    if (options.series_window > 0 && (t + 1) % options.series_window == 0) {
      m.windowed_throughput.push_back(per_budget_slot(window_successes, config.budget, options.series_window));
      window_successes = 0;
    }
  }
  return m;
}

}  // namespace specshare
