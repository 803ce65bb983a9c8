#include "robustfed/truth_inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robustfed/errors.hpp"

namespace robustfed {

std::vector<std::size_t> client_id_order(
    std::span<const ClientUpdate> updates) {
  std::vector<std::size_t> order(updates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  return order;
}

void validate_updates(std::span<const ClientUpdate> updates) {
  if (updates.empty()) return;
  const std::size_t dim = updates.front().delta.dim();
  for (const auto& u : updates) {
    if (u.delta.dim() != dim) {
      throw StructuralError("client updates: dimension mismatch (client " +
                            std::to_string(u.client_id) + ")");
    }
  }
  auto order = client_id_order(updates);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (updates[order[i - 1]].client_id == updates[order[i]].client_id) {
      throw UsageError("client updates: duplicate client id " +
                       std::to_string(updates[order[i]].client_id));
    }
  }
}

TruthInferenceResult infer(std::span<const ClientUpdate> updates,
                           const TruthInferenceConfig& cfg) {
  if (updates.size() < 2) {
    throw UsageError("infer: needs at least 2 updates, got " +
                     std::to_string(updates.size()));
  }
  validate_updates(updates);
  if (cfg.max_iterations < 1) throw UsageError("infer: max_iterations < 1");
  if (!(cfg.convergence_tol > 0)) throw UsageError("infer: convergence_tol <= 0");
  if (!(cfg.distance_floor > 0)) throw UsageError("infer: distance_floor <= 0");

  const auto order = client_id_order(updates);
  const std::size_t k = updates.size();
  const std::size_t dim = updates.front().delta.dim();

  std::vector<double> reliability(k, 1.0);  // indexed like `updates`
  std::vector<ParameterVector> deltas;
  deltas.reserve(k);
  for (const auto& u : updates) deltas.push_back(u.delta);
  ParameterVector truth = coordinate_median(deltas);

  TruthInferenceResult result;
  std::vector<double> distances(k, 0.0);

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    // truth step: reliability-weighted mean, folded in client-id order
    ParameterVector next = ParameterVector::zeros(dim);
    double weight_sum = 0.0;
    for (std::size_t idx : order) {
      const double r = reliability[idx];
      const auto& d = updates[idx].delta;
      for (std::size_t j = 0; j < dim; ++j) next[j] += r * d[j];
      weight_sum += r;
    }
    for (std::size_t j = 0; j < dim; ++j) next[j] /= weight_sum;

    // reliability step
    double total = 0.0;
    for (std::size_t idx : order) {
      distances[idx] =
          std::max(euclidean_distance(next, updates[idx].delta),
                   cfg.distance_floor);
      total += distances[idx];
    }
    double objective = 0.0;
    for (std::size_t idx : order) {
      reliability[idx] = -std::log(distances[idx] / total);
      objective += reliability[idx] * distances[idx];
    }
    result.objective_trace.push_back(objective);
    result.iterations_run = it;

    const double change = euclidean_distance(next, truth) /
                          std::max(l2_norm(truth), 1e-12);
    truth = std::move(next);
    if (change < cfg.convergence_tol) break;
  }

  result.truth = std::move(truth);
  for (std::size_t idx : order) {
    result.reliabilities[updates[idx].client_id] = reliability[idx];
  }
  return result;
}

}  // namespace robustfed
