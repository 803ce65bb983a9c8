#include "robustfed/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "robustfed/errors.hpp"

namespace robustfed {

namespace {

void require_nonempty(std::span<const ClientUpdate> updates, const char* op) {
  if (updates.empty()) throw UsageError(std::string(op) + ": empty input");
  validate_updates(updates);
}

std::vector<ParameterVector> deltas_of(std::span<const ClientUpdate> updates) {
  std::vector<ParameterVector> out;
  out.reserve(updates.size());
  for (const auto& u : updates) out.push_back(u.delta);
  return out;
}

// Weighted sum of deltas with weights w (indexed like `updates`), folded in
// client-id order over the subset `chosen`.
ParameterVector weighted_fold(std::span<const ClientUpdate> updates,
                              const std::vector<double>& w,
                              const std::vector<std::size_t>& chosen_in_order) {
  ParameterVector out = ParameterVector::zeros(updates.front().delta.dim());
  for (std::size_t idx : chosen_in_order) {
    const auto& d = updates[idx].delta;
    for (std::size_t j = 0; j < out.dim(); ++j) out[j] += w[idx] * d[j];
  }
  return out;
}

struct BandPruneResult {
  std::vector<std::size_t> retained;  // indices in client-id order
  bool fallback_used = false;
};

// Retains indices whose reliability lies in [median - stddev, median + stddev].
// Falls back to the single client nearest the median when the band is empty.
BandPruneResult band_prune(std::span<const ClientUpdate> updates,
                           const std::vector<double>& reliability,
                           const std::vector<std::size_t>& order) {
  std::vector<double> values;
  values.reserve(order.size());
  for (std::size_t idx : order) values.push_back(reliability[idx]);
  const double mid = median_of(values);
  const double sigma = population_stddev(values);

  BandPruneResult result;
  for (std::size_t idx : order) {
    const double r = reliability[idx];
    if (r >= mid - sigma && r <= mid + sigma) result.retained.push_back(idx);
  }
  if (result.retained.empty()) {
    std::size_t best = order.front();
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t idx : order) {
      const double gap = std::abs(reliability[idx] - mid);
      if (gap < best_gap) {
        best_gap = gap;
        best = idx;
      }
    }
    result.retained.push_back(best);
    result.fallback_used = true;
  }
  return result;
}

// Shared tail of robust_fed_plus and robust_fed_t: band-prune on the inferred
// reliabilities, then reliability-weight the raw deltas of the retained set.
AggregationOutcome prune_and_aggregate(std::span<const ClientUpdate> updates,
                                       const TruthInferenceResult& inference,
                                       const RobustFedOptions& opt) {
  const auto order = client_id_order(updates);
  std::vector<double> reliability(updates.size());
  for (std::size_t i = 0; i < updates.size(); ++i) {
    reliability[i] = inference.reliabilities.at(updates[i].client_id);
  }

  const BandPruneResult pruned = band_prune(updates, reliability, order);

  std::vector<double> weights(updates.size(), 0.0);
  double z = 0.0;
  for (std::size_t idx : pruned.retained) {
    weights[idx] = reliability[idx] * updates[idx].alpha;
    z += weights[idx];
  }
  if (opt.normalize) {
    for (std::size_t idx : pruned.retained) weights[idx] /= z;
  }

  AggregationOutcome outcome;
  outcome.global_delta = weighted_fold(updates, weights, pruned.retained);
  outcome.reliabilities = inference.reliabilities;
  std::set<ClientId> candidates;
  for (std::size_t idx : pruned.retained) {
    candidates.insert(updates[idx].client_id);
  }
  outcome.candidates = std::move(candidates);
  outcome.diagnostics["iterations"] =
      static_cast<double>(inference.iterations_run);
  outcome.diagnostics["objective_final"] = inference.objective_trace.back();
  outcome.diagnostics["fallback_used"] = pruned.fallback_used ? 1.0 : 0.0;
  return outcome;
}

std::pair<double, double> summary_stats(const ParameterVector& v) {
  return {median_of(v.values), mean_of(v.values)};
}

}  // namespace

AggregationOutcome fed_avg(std::span<const ClientUpdate> updates) {
  require_nonempty(updates, "fed_avg");
  double alpha_sum = 0.0;
  for (const auto& u : updates) alpha_sum += u.alpha;
  if (std::abs(alpha_sum - 1.0) > 1e-9) {
    throw UsageError("fed_avg: alphas sum to " + std::to_string(alpha_sum) +
                     ", expected 1");
  }
  const auto order = client_id_order(updates);
  std::vector<double> weights(updates.size());
  for (std::size_t i = 0; i < updates.size(); ++i) weights[i] = updates[i].alpha;
  AggregationOutcome outcome;
  outcome.global_delta = weighted_fold(updates, weights, order);
  return outcome;
}

AggregationOutcome median_agg(std::span<const ClientUpdate> updates) {
  require_nonempty(updates, "median_agg");
  const auto deltas = deltas_of(updates);
  AggregationOutcome outcome;
  outcome.global_delta = coordinate_median(deltas);
  return outcome;
}

AggregationOutcome trimmed_mean_agg(std::span<const ClientUpdate> updates,
                                    int trim_k) {
  require_nonempty(updates, "trimmed_mean_agg");
  if (trim_k < 0) throw UsageError("trimmed_mean_agg: trim_k < 0");
  const std::size_t k = updates.size();
  if (2 * static_cast<std::size_t>(trim_k) >= k) {
    throw UsageError("trimmed_mean_agg: 2*trim_k (" +
                     std::to_string(2 * trim_k) + ") >= count (" +
                     std::to_string(k) + ")");
  }
  const std::size_t dim = updates.front().delta.dim();
  ParameterVector out = ParameterVector::zeros(dim);
  std::vector<double> column(k);
  const std::size_t kept = k - 2 * static_cast<std::size_t>(trim_k);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < k; ++i) column[i] = updates[i].delta[j];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (std::size_t i = trim_k; i < trim_k + kept; ++i) sum += column[i];
    out[j] = sum / static_cast<double>(kept);
  }
  AggregationOutcome outcome;
  outcome.global_delta = std::move(out);
  return outcome;
}

AggregationOutcome krum(std::span<const ClientUpdate> updates, int f,
                        int multi_m) {
  require_nonempty(updates, "krum");
  const int n = static_cast<int>(updates.size());
  if (f < 0) throw UsageError("krum: f < 0");
  if (n < f + 3) {
    throw UsageError("krum: needs count >= f + 3, got count " +
                     std::to_string(n) + " with f " + std::to_string(f));
  }
  const int neighbors = n - f - 2;
  if (multi_m < 1 || multi_m > neighbors) {
    throw UsageError("krum: multi_m must be in [1, count - f - 2]");
  }

  // squared pairwise distances
  std::vector<std::vector<double>> dist2(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = euclidean_distance(updates[i].delta, updates[j].delta);
      dist2[i][j] = dist2[j][i] = d * d;
    }
  }

  std::vector<double> score(n, 0.0);
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) row.push_back(dist2[i][j]);
    }
    std::sort(row.begin(), row.end());
    double s = 0.0;
    for (int j = 0; j < neighbors; ++j) s += row[j];
    score[i] = s;
  }

  std::vector<std::size_t> ranking(n);
  for (int i = 0; i < n; ++i) ranking[i] = i;
  std::sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] < score[b];
    return updates[a].client_id < updates[b].client_id;
  });
  ranking.resize(multi_m);

  AggregationOutcome outcome;
  std::set<ClientId> selected;
  for (std::size_t idx : ranking) selected.insert(updates[idx].client_id);
  outcome.candidates = std::move(selected);
  outcome.diagnostics["score_min"] = score[ranking.front()];

  if (multi_m == 1) {
    outcome.global_delta = updates[ranking.front()].delta;
    return outcome;
  }
  std::sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  std::vector<double> weights(updates.size(), 0.0);
  for (std::size_t idx : ranking) weights[idx] = 1.0 / multi_m;
  outcome.global_delta = weighted_fold(updates, weights, ranking);
  return outcome;
}

AggregationOutcome robust_fed(std::span<const ClientUpdate> updates,
                              const RobustFedOptions& opt) {
  if (updates.size() < 2) throw UsageError("robust_fed: needs >= 2 updates");
  const TruthInferenceResult inference = infer(updates, opt.truth_inference);
  const auto order = client_id_order(updates);

  std::vector<double> weights(updates.size());
  double z = 0.0;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    weights[i] =
        inference.reliabilities.at(updates[i].client_id) * updates[i].alpha;
    z += weights[i];
  }
  if (opt.normalize) {
    for (double& w : weights) w /= z;
  }

  AggregationOutcome outcome;
  outcome.global_delta = weighted_fold(updates, weights, order);
  outcome.reliabilities = inference.reliabilities;
  outcome.diagnostics["iterations"] =
      static_cast<double>(inference.iterations_run);
  outcome.diagnostics["objective_final"] = inference.objective_trace.back();
  return outcome;
}

AggregationOutcome robust_fed_plus(std::span<const ClientUpdate> updates,
                                   const RobustFedOptions& opt) {
  if (updates.size() < 3) {
    throw UsageError("robust_fed_plus: needs >= 3 updates");
  }
  const TruthInferenceResult inference = infer(updates, opt.truth_inference);
  return prune_and_aggregate(updates, inference, opt);
}

const TemporalState::Entry* TemporalState::find(ClientId id) const {
  auto it = history_.find(id);
  return it == history_.end() ? nullptr : &it->second;
}

void TemporalState::record(std::span<const ClientUpdate> updates) {
  for (const auto& u : updates) {
    history_[u.client_id] = Entry{u.round, u.delta};
  }
  ++round_counter_;
}

ThresholdRule mean_std_threshold_rule() {
  return [](const ParameterVector& prev) {
    const double mu = mean_of(prev.values);
    const double sigma = population_stddev(prev.values);
    return std::make_pair(mu + sigma, mu - sigma);
  };
}

std::vector<ClientUpdate> augment_static(std::span<const ClientUpdate> updates,
                                         const TemporalState& state,
                                         const ThresholdRule& rule) {
  validate_updates(updates);
  std::vector<ClientUpdate> out(updates.begin(), updates.end());
  if (state.empty()) return out;

  for (auto& u : out) {
    const TemporalState::Entry* entry = state.find(u.client_id);
    if (entry == nullptr) {
      throw StructuralError("augment_static: no history for client " +
                            std::to_string(u.client_id));
    }
    const ParameterVector& prev = entry->delta;
    if (prev.dim() != u.delta.dim()) {
      throw StructuralError("augment_static: history dim mismatch for client " +
                            std::to_string(u.client_id));
    }
    const auto [large_thr, small_thr] = rule(prev);
    double large = 0.0;
    double small = 0.0;
    for (double x : prev.values) {
      if (x > large_thr) large += 1.0;
      if (x < small_thr) small += 1.0;
    }
    const double dim = static_cast<double>(prev.dim());
    const auto [med, mean] = summary_stats(prev);
    u.delta.values.push_back(large / dim);
    u.delta.values.push_back(small / dim);
    u.delta.values.push_back(med);
    u.delta.values.push_back(mean);
  }
  return out;
}

std::vector<ClientUpdate> augment_dynamic(
    std::span<const ClientUpdate> updates, const TemporalState& state) {
  validate_updates(updates);
  std::vector<ClientUpdate> out(updates.begin(), updates.end());

  // Neutral fill for clients with no history: the median/mean pooled over
  // every entry of the current round's deltas.
  std::vector<double> pooled;
  for (const auto& u : out) {
    pooled.insert(pooled.end(), u.delta.values.begin(), u.delta.values.end());
  }
  const double fill_median = median_of(pooled);
  const double fill_mean = mean_of(pooled);

  for (auto& u : out) {
    const TemporalState::Entry* entry = state.find(u.client_id);
    double med = fill_median;
    double mean = fill_mean;
    if (entry != nullptr) {
      if (entry->delta.dim() != u.delta.dim()) {
        throw StructuralError(
            "augment_dynamic: history dim mismatch for client " +
            std::to_string(u.client_id));
      }
      std::tie(med, mean) = summary_stats(entry->delta);
    }
    u.delta.values.push_back(med);
    u.delta.values.push_back(mean);
  }
  return out;
}

AggregationOutcome robust_fed_t(std::span<const ClientUpdate> updates,
                                TemporalState& state,
                                const RobustFedOptions& opt, TemporalMode mode,
                                const ThresholdRule& rule) {
  if (updates.size() < 3) throw UsageError("robust_fed_t: needs >= 3 updates");
  const std::vector<ClientUpdate> augmented =
      mode == TemporalMode::kStatic ? augment_static(updates, state, rule)
                                    : augment_dynamic(updates, state);
  const TruthInferenceResult inference = infer(augmented, opt.truth_inference);
  AggregationOutcome outcome = prune_and_aggregate(updates, inference, opt);
  outcome.diagnostics["augmented_dim"] =
      static_cast<double>(augmented.front().delta.dim());
  state.record(updates);
  return outcome;
}

AggregatorKind aggregator_from_name(const std::string& name) {
  if (name == "fedavg") return AggregatorKind::kFedAvg;
  if (name == "median") return AggregatorKind::kMedian;
  if (name == "trimmed_mean") return AggregatorKind::kTrimmedMean;
  if (name == "krum") return AggregatorKind::kKrum;
  if (name == "multi_krum") return AggregatorKind::kMultiKrum;
  if (name == "robustfed") return AggregatorKind::kRobustFed;
  if (name == "robustfed_plus") return AggregatorKind::kRobustFedPlus;
  if (name == "robustfed_t") return AggregatorKind::kRobustFedT;
  throw ConfigError("aggregator: unknown name \"" + name + "\"");
}

std::string aggregator_name(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kFedAvg: return "fedavg";
    case AggregatorKind::kMedian: return "median";
    case AggregatorKind::kTrimmedMean: return "trimmed_mean";
    case AggregatorKind::kKrum: return "krum";
    case AggregatorKind::kMultiKrum: return "multi_krum";
    case AggregatorKind::kRobustFed: return "robustfed";
    case AggregatorKind::kRobustFedPlus: return "robustfed_plus";
    case AggregatorKind::kRobustFedT: return "robustfed_t";
  }
  throw ConfigError("aggregator: bad kind");
}

}  // namespace robustfed
