#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "robustfed/client_update.hpp"
#include "robustfed/truth_inference.hpp"

namespace robustfed {

struct AggregationOutcome {
  ParameterVector global_delta;
  std::optional<std::map<ClientId, double>> reliabilities;
  std::optional<std::set<ClientId>> candidates;
  std::map<std::string, double> diagnostics;
};

/// Weighted average of the deltas, weights alpha_i. The alphas of one round
/// must sum to 1 (+-1e-9). Throws UsageError on empty input.
AggregationOutcome fed_avg(std::span<const ClientUpdate> updates);

/// Coordinate-wise median of the deltas; alphas ignored.
AggregationOutcome median_agg(std::span<const ClientUpdate> updates);

/// Per coordinate drops the trim_k largest and trim_k smallest values and
/// averages the rest (unweighted). Requires 2*trim_k < count.
AggregationOutcome trimmed_mean_agg(std::span<const ClientUpdate> updates,
                                    int trim_k);

/// Krum / Multi-Krum. Each update is scored by the sum of squared Euclidean
/// distances to its (count - f - 2) nearest other updates; ties break toward
/// the lower client id. multi_m == 1 returns the minimum-score update
/// verbatim; multi_m > 1 returns the unweighted mean of the multi_m
/// lowest-score updates. Requires count >= f + 3 and
/// 1 <= multi_m <= count - f - 2. The selected ids are reported as
/// candidates.
AggregationOutcome krum(std::span<const ClientUpdate> updates, int f,
                        int multi_m);

struct RobustFedOptions {
  TruthInferenceConfig truth_inference;
  // Normalize the aggregation weights r_i * alpha_i to sum to 1. The raw
  // update (weights used as-is) is available for fidelity experiments.
  bool normalize = true;
};

/// Reliability-weighted aggregation: runs truth inference and emits
/// global_delta = sum_i (r_i * alpha_i / Z) * delta_i with
/// Z = sum_i r_i * alpha_i (Z omitted when normalize is false).
AggregationOutcome robust_fed(std::span<const ClientUpdate> updates,
                              const RobustFedOptions& opt);

/// robust_fed plus pruning: clients whose reliability falls outside
/// [median - stddev, median + stddev] are excluded from the aggregate. If no
/// client falls inside the band, the single client nearest the median is
/// used (diagnostic "fallback_used"). Requires >= 3 updates.
AggregationOutcome robust_fed_plus(std::span<const ClientUpdate> updates,
                                   const RobustFedOptions& opt);

/// Per-client history needed by the temporal aggregator. Stores each
/// client's most recent submitted delta; statistics are derived from it when
/// augmenting the next round.
class TemporalState {
 public:
  struct Entry {
    int round = -1;
    ParameterVector delta;
  };

  bool empty() const { return history_.empty(); }
  const Entry* find(ClientId id) const;

  /// Records the submitting clients' current deltas; called once per round
  /// after aggregation.
  void record(std::span<const ClientUpdate> updates);

  const std::map<ClientId, Entry>& history() const { return history_; }
  int round_counter() const { return round_counter_; }

 private:
  std::map<ClientId, Entry> history_;
  int round_counter_ = 0;
};

/// Maps a client's previous delta to (large_threshold, small_threshold);
/// coordinates above/below count as large/small weights.
using ThresholdRule =
    std::function<std::pair<double, double>(const ParameterVector&)>;

/// Default rule: large iff > mean + stddev, small iff < mean - stddev.
ThresholdRule mean_std_threshold_rule();

/// Static-setting augmentation: extends each delta with 4 coordinates
/// derived from that client's previous-round delta (large count / dim,
/// small count / dim, median, mean). With no history at all the updates
/// pass through unchanged; partial history is a StructuralError.
std::vector<ClientUpdate> augment_static(std::span<const ClientUpdate> updates,
                                         const TemporalState& state,
                                         const ThresholdRule& rule);

/// Dynamic-setting augmentation: appends (median, mean) of the client's most
/// recently recorded delta. Clients without history receive the median/mean
/// pooled over all current-round delta entries, so newcomers are neither
/// rewarded nor punished.
std::vector<ClientUpdate> augment_dynamic(
    std::span<const ClientUpdate> updates, const TemporalState& state);

enum class TemporalMode { kStatic, kDynamic };

/// RobustFed over temporally augmented vectors: augments per mode, infers
/// reliabilities on the augmented vectors, prunes with the median +- stddev
/// band, aggregates the unaugmented deltas of the retained clients, then
/// records the current deltas into `state`.
AggregationOutcome robust_fed_t(std::span<const ClientUpdate> updates,
                                TemporalState& state,
                                const RobustFedOptions& opt, TemporalMode mode,
                                const ThresholdRule& rule = mean_std_threshold_rule());

enum class AggregatorKind {
  kFedAvg,
  kMedian,
  kTrimmedMean,
  kKrum,
  kMultiKrum,
  kRobustFed,
  kRobustFedPlus,
  kRobustFedT,
};

AggregatorKind aggregator_from_name(const std::string& name);
std::string aggregator_name(AggregatorKind kind);

}  // namespace robustfed
