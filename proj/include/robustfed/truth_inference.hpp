#pragma once

#include <map>
#include <span>
#include <vector>

#include "robustfed/client_update.hpp"
#include "robustfed/params.hpp"

namespace robustfed {

struct TruthInferenceConfig {
  int max_iterations = 100;
  double convergence_tol = 1e-6;  // relative L2 change of the truth vector
  double distance_floor = 1e-12;  // substituted for exact-zero distances
};

struct TruthInferenceResult {
  ParameterVector truth;
  std::map<ClientId, double> reliabilities;
  int iterations_run = 0;
  std::vector<double> objective_trace;  // one entry per full iteration
};

/// Iterative truth/reliability estimation over one round of client updates.
///
/// Reliabilities start at 1 and the truth at the coordinate-wise median of
/// the deltas. Each iteration first recomputes the truth as the
/// reliability-weighted mean of the deltas, then recomputes each client's
/// reliability as -log(d_i / sum_k d_k) where d_i is the Euclidean distance
/// from the new truth to client i's delta (floored at distance_floor).
/// Iteration stops when the relative L2 change of the truth falls below
/// convergence_tol, or after max_iterations. The objective recorded per
/// iteration is sum_i r_i * d_i.
///
/// Requires at least two updates (UsageError) with equal dimensions
/// (StructuralError).
TruthInferenceResult infer(std::span<const ClientUpdate> updates,
                           const TruthInferenceConfig& cfg);

}  // namespace robustfed
