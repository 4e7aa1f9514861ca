#include "specshare/scheduling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace specshare {

namespace {

constexpr double kGateRefreshDelta = 1e-3;
constexpr int kIndexCacheAges = 4096;

}  // namespace

bool Decision::contains(ChannelId c) const {
  return std::binary_search(transmit_set.begin(), transmit_set.end(), c);
}

// ---------------------------------------------------------------------------
// PolicySpec

std::string PolicySpec::name() const {
  std::string base;
  switch (kind) {
    case PolicyKind::PureRandom: return "pure_random";
    case PolicyKind::CheckEmptyRandom: return "check_empty_random";
    case PolicyKind::CorrelatedHeuristic: return "correlated_heuristic";
    case PolicyKind::WhittleIndex: base = "whittle"; break;
    case PolicyKind::HeuristicIndex: base = "heuristic"; break;
  }
  switch (learning) {
    case LearningMode::Off: return base;
    case LearningMode::Mle: return base + "_mle";
    case LearningMode::EwMle: return base + "_ewmle";
  }
  return base;
}

PolicySpec PolicySpec::from_name(std::string_view name) {
  PolicySpec spec;
  if (name == "pure_random") {
    spec.kind = PolicyKind::PureRandom;
    return spec;
  }
  if (name == "check_empty_random") {
    spec.kind = PolicyKind::CheckEmptyRandom;
    return spec;
  }
  if (name == "correlated_heuristic") {
    spec.kind = PolicyKind::CorrelatedHeuristic;
    return spec;
  }

  std::string_view base = name;
  if (name.ends_with("_ewmle")) {
    spec.learning = LearningMode::EwMle;
    base = name.substr(0, name.size() - 6);
  } else if (name.ends_with("_mle")) {
    spec.learning = LearningMode::Mle;
    base = name.substr(0, name.size() - 4);
  }
  if (base == "whittle") {
    spec.kind = PolicyKind::WhittleIndex;
  } else if (base == "heuristic") {
    spec.kind = PolicyKind::HeuristicIndex;
  } else {
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
  }
  return spec;
}

void PolicySpec::validate(bool band_world) const {
  if (!(collision_penalty >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  const bool index_kind = kind == PolicyKind::WhittleIndex || kind == PolicyKind::HeuristicIndex;
  if (learning != LearningMode::Off && !index_kind) {
    throw std::invalid_argument("learning requires a whittle or heuristic index policy");
  }
  if (kind == PolicyKind::CorrelatedHeuristic && !band_world) {
    throw std::invalid_argument("correlated_heuristic requires the band world");
  }
  if (index_kind && band_world) {
    throw std::invalid_argument(name() + " requires the independent world");
  }
  if (learning == LearningMode::EwMle) {
    if (ew_window == 0) throw std::invalid_argument("ew_window must be >= 1");
    if (!(ew_forgetting > 0.0 && ew_forgetting <= 1.0)) {
      throw std::invalid_argument("ew_alpha must lie in (0, 1]");
    }
  }
  if (!(prior_q > 0.0 && prior_q < 0.5)) throw std::invalid_argument("prior_q must lie in (0, 0.5)");
}

// ---------------------------------------------------------------------------
// Free functions

std::vector<BeliefState> update_beliefs(std::span<const BeliefState> beliefs,
                                        const Decision& decision,
                                        std::span<const ChannelObservation> observations) {
  std::vector<BeliefState> next(beliefs.begin(), beliefs.end());
  for (auto& b : next) ++b.age;

  std::vector<std::uint8_t> seen(beliefs.size(), 0);
  for (const auto& obs : observations) {
    if (obs.channel >= beliefs.size() || !decision.contains(obs.channel)) {
      throw std::invalid_argument("observation for channel " + std::to_string(obs.channel) +
                                  " which was not transmitted");
    }
    if (seen[obs.channel]) throw std::invalid_argument("duplicate observation");
    seen[obs.channel] = 1;
    next[obs.channel] = BeliefState{obs.occupancy, 1};
  }
  if (observations.size() != decision.size()) {
    throw std::invalid_argument("every transmitted channel needs exactly one observation");
  }
  return next;
}

std::vector<ChannelId> rank_channels(std::span<const IndexValue> indices,
                                     std::span<const BeliefState> beliefs, std::size_t top) {
  std::vector<ChannelId> order(indices.size());
  std::iota(order.begin(), order.end(), ChannelId{0});
  top = std::min(top, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](ChannelId a, ChannelId b) {
                      if (indices[a] != indices[b]) return indices[a] > indices[b];
                      if (beliefs[a].age != beliefs[b].age) return beliefs[a].age < beliefs[b].age;
                      return a < b;
                    });
  order.resize(top);
  return order;
}

IndexValue channel_index(IndexKind kind, const BeliefState& belief, const ChannelParams& params) {
  return kind == IndexKind::Whittle ? whittle_index(belief, params) : heuristic_index(belief, params);
}

std::vector<Threshold> gate_thresholds(std::span<const ChannelParams> params, double gamma) {
  const double cost = effective_cost(gamma);
  std::vector<Threshold> gates;
  gates.reserve(params.size());
  for (const auto& p : params) gates.push_back(optimal_threshold(p, cost));
  return gates;
}

Decision decide_index(std::span<const IndexValue> indices, std::span<const BeliefState> beliefs,
                      std::span<const Threshold> gates, std::size_t budget) {
  if (budget < 1) throw std::invalid_argument("budget L must be >= 1");
  Decision decision;
  for (ChannelId c : rank_channels(indices, beliefs, budget)) {
    const auto& b = beliefs[c];
    if (b.last_observed == Occupancy::Free || gates[c].admits(b.age)) {
      decision.transmit_set.push_back(c);
    }
  }
  std::sort(decision.transmit_set.begin(), decision.transmit_set.end());
  return decision;
}

Decision decide_index(std::span<const BeliefState> beliefs, std::span<const ChannelParams> params,
                      std::span<const Threshold> gates, IndexKind kind, std::size_t budget) {
  std::vector<IndexValue> indices;
  indices.reserve(beliefs.size());
  for (std::size_t c = 0; c < beliefs.size(); ++c) {
    indices.push_back(channel_index(kind, beliefs[c], params[c]));
  }
  return decide_index(indices, beliefs, gates, budget);
}

namespace {

/// Draw `count` distinct entries of `pool` uniformly (partial Fisher-Yates).
void draw_distinct(std::vector<ChannelId>& pool, std::size_t count, RandomStream& rng,
                   std::vector<ChannelId>& out) {
  count = std::min(count, pool.size());
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + rng.uniform_index(pool.size() - k);
    std::swap(pool[k], pool[j]);
    out.push_back(pool[k]);
  }
}

}  // namespace

Decision decide_pure_random(std::size_t total_channels, std::size_t budget, RandomStream& rng) {
  if (budget > total_channels) throw std::invalid_argument("budget L must be <= N");
  std::vector<ChannelId> pool(total_channels);
  std::iota(pool.begin(), pool.end(), ChannelId{0});
  Decision decision;
  draw_distinct(pool, budget, rng, decision.transmit_set);
  std::sort(decision.transmit_set.begin(), decision.transmit_set.end());
  return decision;
}

Decision decide_check_empty(std::span<const ChannelObservation> last_outcomes,
                            std::size_t total_channels, std::size_t budget, RandomStream& rng) {
  if (budget > total_channels) throw std::invalid_argument("budget L must be <= N");
  Decision decision;
  std::vector<std::uint8_t> kept(total_channels, 0);
  for (const auto& o : last_outcomes) {
    if (o.occupancy == Occupancy::Free && !kept[o.channel] && decision.size() < budget) {
      kept[o.channel] = 1;
      decision.transmit_set.push_back(o.channel);
    }
  }
  std::vector<ChannelId> pool;
  pool.reserve(total_channels);
  for (ChannelId c = 0; c < total_channels; ++c) {
    if (!kept[c]) pool.push_back(c);
  }
  draw_distinct(pool, budget - decision.size(), rng, decision.transmit_set);
  std::sort(decision.transmit_set.begin(), decision.transmit_set.end());
  return decision;
}

Decision decide_correlated(std::span<const BeliefState> beliefs, const BandBelief& band,
                           int band_width, std::size_t budget) {
  if (budget < 1) throw std::invalid_argument("budget L must be >= 1");
  std::vector<IndexValue> indices;
  indices.reserve(beliefs.size());
  for (std::size_t c = 0; c < beliefs.size(); ++c) {
    const bool occupied = beliefs[c].last_observed == Occupancy::Occupied;
    indices.push_back(correlated_index(static_cast<int>(c) + 1, occupied, band, band_width));
  }
  Decision decision;
  decision.transmit_set = rank_channels(indices, beliefs, budget);
  std::sort(decision.transmit_set.begin(), decision.transmit_set.end());
  return decision;
}

// ---------------------------------------------------------------------------
// Schedulers

Scheduler::Scheduler(std::size_t total_channels) : beliefs_(total_channels) {}

void Scheduler::observe(const Decision& decision, std::span<const ChannelObservation> outcomes) {
  beliefs_ = update_beliefs(beliefs_, decision, outcomes);
}

PureRandomScheduler::PureRandomScheduler(std::size_t total_channels, std::size_t budget)
    : Scheduler(total_channels), budget_(budget) {}

Decision PureRandomScheduler::decide(RandomStream& rng) {
  return decide_pure_random(total_channels(), budget_, rng);
}

CheckEmptyScheduler::CheckEmptyScheduler(std::size_t total_channels, std::size_t budget)
    : Scheduler(total_channels), budget_(budget) {}

Decision CheckEmptyScheduler::decide(RandomStream& rng) {
  return decide_check_empty(last_outcomes_, total_channels(), budget_, rng);
}

void CheckEmptyScheduler::observe(const Decision& decision,
                                  std::span<const ChannelObservation> outcomes) {
  Scheduler::observe(decision, outcomes);
  last_outcomes_.assign(outcomes.begin(), outcomes.end());
}

IndexScheduler::IndexScheduler(IndexKind kind, const PolicySpec& spec,
                               const SchedulerContext& context)
    : Scheduler(context.total_channels),
      kind_(kind),
      spec_(spec),
      budget_(context.budget),
      learning_(spec.learning != LearningMode::Off) {
  const std::size_t n = context.total_channels;
  if (learning_) {
    params_.assign(n, ChannelParams(spec.prior_q));
    const TransitionCounts fresh = spec.learning == LearningMode::EwMle
                                       ? TransitionCounts::windowed(spec.ew_window, spec.ew_forgetting)
                                       : TransitionCounts::cumulative();
    counts_.assign(n, fresh);
    transmitted_last_.assign(n, 0);
    seen_last_.assign(n, Occupancy::Occupied);
  } else {
    if (context.known_params.size() != n) {
      throw std::invalid_argument("known-q index policy needs one q per channel");
    }
    params_ = context.known_params;
    index_cache_.assign(n, std::vector<double>(kIndexCacheAges + 1, -1.0));
  }
  gates_ = gate_thresholds(params_, spec.collision_penalty);
  gate_basis_q_.resize(n);
  for (std::size_t c = 0; c < n; ++c) gate_basis_q_[c] = params_[c].q();
  scratch_.reserve(n);
}

void IndexScheduler::set_estimate_hook(EstimateHook hook) {
  hook_ = std::move(hook);
  if (!learning_) return;
  refresh_estimates();
  const double cost = effective_cost(spec_.collision_penalty);
  for (std::size_t c = 0; c < params_.size(); ++c) {
    gates_[c] = optimal_threshold(params_[c], cost);
    gate_basis_q_[c] = params_[c].q();
  }
}

double IndexScheduler::current_index(ChannelId c) {
  const int age = beliefs_[c].age;
  if (learning_ || age > kIndexCacheAges) {
    return kind_ == IndexKind::Whittle ? whittle_value(params_[c], age)
                                       : heuristic_value(params_[c], age);
  }
  double& slot = index_cache_[c][static_cast<std::size_t>(age)];
  if (slot < 0.0) {
    slot = kind_ == IndexKind::Whittle ? whittle_value(params_[c], age)
                                       : heuristic_value(params_[c], age);
  }
  return slot;
}

Decision IndexScheduler::decide(RandomStream&) {
  scratch_.clear();
  for (ChannelId c = 0; c < beliefs_.size(); ++c) {
    if (beliefs_[c].last_observed == Occupancy::Free) {
      scratch_.push_back(IndexValue::infinite());
    } else {
      scratch_.push_back(IndexValue::finite(current_index(c)));
    }
  }
  return decide_index(scratch_, beliefs_, gates_, budget_);
}

void IndexScheduler::observe(const Decision& decision,
                             std::span<const ChannelObservation> outcomes) {
  Scheduler::observe(decision, outcomes);
  if (!learning_) return;

  for (auto& counts : counts_) counts = advance_window(counts);
  std::vector<std::uint8_t> transmitted_now(counts_.size(), 0);
  for (const auto& o : outcomes) {
    if (transmitted_last_[o.channel]) {
      counts_[o.channel] = record(counts_[o.channel], seen_last_[o.channel], o.occupancy);
    }
    transmitted_now[o.channel] = 1;
    seen_last_[o.channel] = o.occupancy;
  }
  transmitted_last_ = std::move(transmitted_now);
  refresh_estimates();
}

void IndexScheduler::refresh_estimates() {
  const double cost = effective_cost(spec_.collision_penalty);
  for (ChannelId c = 0; c < counts_.size(); ++c) {
    const double q_hat = hook_ ? hook_(c, counts_[c]) : estimate(counts_[c], spec_.prior_q);
    params_[c] = ChannelParams(q_hat);
    if (std::abs(q_hat - gate_basis_q_[c]) > kGateRefreshDelta) {
      gates_[c] = optimal_threshold(params_[c], cost);
      gate_basis_q_[c] = q_hat;
    }
  }
}

CorrelatedScheduler::CorrelatedScheduler(std::size_t total_channels,
                                         const SchedulerContext& context)
    : Scheduler(total_channels),
      budget_(context.budget),
      band_width_(context.band_width),
      mean_age_mode_(context.mean_age_mode) {
  band_.center = 0.5 * (static_cast<double>(total_channels) + 1.0);
  band_.memory = context.band_memory;
  band_.mean_age = 1.0;
}

Decision CorrelatedScheduler::decide(RandomStream&) {
  return decide_correlated(beliefs_, band_, band_width_, budget_);
}

void CorrelatedScheduler::observe(const Decision& decision,
                                  std::span<const ChannelObservation> outcomes) {
  std::vector<int> ages;
  if (mean_age_mode_ == MeanAgeMode::SelectedChannels) {
    for (const auto& o : outcomes) ages.push_back(beliefs_[o.channel].age);
  }
  Scheduler::observe(decision, outcomes);
  if (mean_age_mode_ == MeanAgeMode::AllChannels) {
    ages.reserve(beliefs_.size());
    for (const auto& b : beliefs_) ages.push_back(b.age);
  }

  std::vector<BandObservation> observed;
  observed.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    observed.push_back({static_cast<int>(o.channel) + 1, o.occupancy});
  }
  band_ = update_band_belief(band_, observed, ages, static_cast<int>(total_channels()));
}

std::unique_ptr<Scheduler> make_scheduler(const PolicySpec& spec, const SchedulerContext& context) {
  const std::size_t n = context.total_channels;
  if (context.budget < 1 || context.budget > n) throw std::invalid_argument("L must lie in [1, N]");
  switch (spec.kind) {
    case PolicyKind::PureRandom: return std::make_unique<PureRandomScheduler>(n, context.budget);
    case PolicyKind::CheckEmptyRandom:
      return std::make_unique<CheckEmptyScheduler>(n, context.budget);
    case PolicyKind::WhittleIndex:
      return std::make_unique<IndexScheduler>(IndexKind::Whittle, spec, context);
    case PolicyKind::HeuristicIndex:
      return std::make_unique<IndexScheduler>(IndexKind::Heuristic, spec, context);
    case PolicyKind::CorrelatedHeuristic: return std::make_unique<CorrelatedScheduler>(n, context);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace specshare
