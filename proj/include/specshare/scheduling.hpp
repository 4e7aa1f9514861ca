#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specshare/belief.hpp"
#include "specshare/estimation.hpp"
#include "specshare/indices.hpp"
#include "specshare/markov_core.hpp"
#include "specshare/random.hpp"
#include "specshare/single_channel.hpp"

namespace specshare {

/// Channels the SU transmits on this slot, in ascending id order.
struct Decision {
  std::vector<ChannelId> transmit_set;

  bool contains(ChannelId c) const;
  std::size_t size() const noexcept { return transmit_set.size(); }
};

/// ACK feedback for one transmitted channel.
struct ChannelObservation {
  ChannelId channel;
  Occupancy occupancy;
};

enum class PolicyKind { PureRandom, CheckEmptyRandom, WhittleIndex, HeuristicIndex, CorrelatedHeuristic };
enum class LearningMode { Off, Mle, EwMle };
enum class MeanAgeMode { AllChannels, SelectedChannels };

struct PolicySpec {
  PolicyKind kind = PolicyKind::WhittleIndex;
  LearningMode learning = LearningMode::Off;
  double collision_penalty = 0.5;
  std::uint64_t ew_window = 1000;
  double ew_forgetting = 0.5;
  double prior_q = kDefaultPriorQ;

  /// Canonical name, e.g. "whittle", "heuristic_ewmle", "check_empty_random".
  std::string name() const;

  /// Inverse of name(); throws std::invalid_argument on unknown names.
  static PolicySpec from_name(std::string_view name);

  /// Throws std::invalid_argument when the combination is not runnable.
  void validate(bool band_world) const;
};

/// Age/observation update after the slot's ACKs. Observations must cover
/// exactly the transmitted channels.
std::vector<BeliefState> update_beliefs(std::span<const BeliefState> beliefs,
                                        const Decision& decision,
                                        std::span<const ChannelObservation> observations);

/// Channel ids ordered by index (descending), then age (ascending), then id.
std::vector<ChannelId> rank_channels(std::span<const IndexValue> indices,
                                     std::span<const BeliefState> beliefs, std::size_t top);

enum class IndexKind { Whittle, Heuristic };

IndexValue channel_index(IndexKind kind, const BeliefState& belief, const ChannelParams& params);

/// H*(q_i, gamma / (1 + gamma)) for every channel.
std::vector<Threshold> gate_thresholds(std::span<const ChannelParams> params, double gamma);

/// Top-L by index; occupied-last-seen channels in the top L transmit only
/// once their age reaches the channel's gate. No backfill.
Decision decide_index(std::span<const BeliefState> beliefs, std::span<const ChannelParams> params,
                      std::span<const Threshold> gates, IndexKind kind, std::size_t budget);

/// Same selection rule with precomputed index values.
Decision decide_index(std::span<const IndexValue> indices, std::span<const BeliefState> beliefs,
                      std::span<const Threshold> gates, std::size_t budget);

Decision decide_pure_random(std::size_t total_channels, std::size_t budget, RandomStream& rng);

/// Keep held channels that succeeded last slot; replace each collided (or
/// missing) one with a uniform draw from channels neither kept nor already
/// drawn this slot.
Decision decide_check_empty(std::span<const ChannelObservation> last_outcomes,
                            std::size_t total_channels, std::size_t budget, RandomStream& rng);

/// Top-L by correlated index; no threshold gate.
Decision decide_correlated(std::span<const BeliefState> beliefs, const BandBelief& band,
                           int band_width, std::size_t budget);

/// Static inputs a scheduler is built from.
struct SchedulerContext {
  std::size_t total_channels = 0;           ///< N
  std::vector<ChannelParams> known_params;  ///< true q; only read by non-learning index policies
  std::size_t budget = 1;                   ///< L
  int band_width = 12;
  double band_memory = 0.5;
  MeanAgeMode mean_age_mode = MeanAgeMode::AllChannels;
};

/**
 * Stateful per-episode policy driver. decide() is called once per slot,
 * followed by observe() with the ACKs of the transmitted channels.
 * Belief bookkeeping is shared by all policies.
 */
class Scheduler {
 public:
  explicit Scheduler(std::size_t total_channels);
  virtual ~Scheduler() = default;

  virtual Decision decide(RandomStream& rng) = 0;
  virtual void observe(const Decision& decision, std::span<const ChannelObservation> outcomes);

  const std::vector<BeliefState>& beliefs() const noexcept { return beliefs_; }
  std::size_t total_channels() const noexcept { return beliefs_.size(); }

 protected:
  std::vector<BeliefState> beliefs_;
};

class PureRandomScheduler final : public Scheduler {
 public:
  PureRandomScheduler(std::size_t total_channels, std::size_t budget);
  Decision decide(RandomStream& rng) override;

 private:
  std::size_t budget_;
};

class CheckEmptyScheduler final : public Scheduler {
 public:
  CheckEmptyScheduler(std::size_t total_channels, std::size_t budget);
  Decision decide(RandomStream& rng) override;
  void observe(const Decision& decision, std::span<const ChannelObservation> outcomes) override;

 private:
  std::size_t budget_;
  std::vector<ChannelObservation> last_outcomes_;
};

/// Whittle or heuristic index policy, with known q or online estimates.
class IndexScheduler final : public Scheduler {
 public:
  /// Replaces estimate() when set; receives the channel and its counts.
  using EstimateHook = std::function<double(ChannelId, const TransitionCounts&)>;

  IndexScheduler(IndexKind kind, const PolicySpec& spec, const SchedulerContext& context);

  Decision decide(RandomStream& rng) override;
  void observe(const Decision& decision, std::span<const ChannelObservation> outcomes) override;

  void set_estimate_hook(EstimateHook hook);

  const std::vector<ChannelParams>& believed_params() const noexcept { return params_; }
  const std::vector<Threshold>& gates() const noexcept { return gates_; }
  const std::vector<TransitionCounts>& counts() const noexcept { return counts_; }

 private:
  double current_index(ChannelId c);
  void refresh_estimates();

  IndexKind kind_;
  PolicySpec spec_;
  std::size_t budget_;
  bool learning_;
  std::vector<ChannelParams> params_;
  std::vector<Threshold> gates_;
  std::vector<double> gate_basis_q_;
  std::vector<TransitionCounts> counts_;
  std::vector<std::uint8_t> transmitted_last_;
  std::vector<Occupancy> seen_last_;
  std::vector<std::vector<double>> index_cache_;
  std::vector<IndexValue> scratch_;
  EstimateHook hook_;
};

class CorrelatedScheduler final : public Scheduler {
 public:
  CorrelatedScheduler(std::size_t total_channels, const SchedulerContext& context);

  Decision decide(RandomStream& rng) override;
  void observe(const Decision& decision, std::span<const ChannelObservation> outcomes) override;

  const BandBelief& band_belief() const noexcept { return band_; }

 private:
  std::size_t budget_;
  int band_width_;
  MeanAgeMode mean_age_mode_;
  BandBelief band_;
};

std::unique_ptr<Scheduler> make_scheduler(const PolicySpec& spec, const SchedulerContext& context);

}  // namespace specshare
