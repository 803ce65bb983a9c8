#pragma once

#include <span>
#include <vector>

#include "robustfed/params.hpp"

namespace robustfed {

using ClientId = int;

/// One client's per-round submission.
struct ClientUpdate {
  ClientId client_id = 0;
  int round = 0;
  ParameterVector delta;
  double alpha = 1.0;  // sample fraction l_i / l, in (0, 1]
};

/// Indices into `updates` ordered by ascending client id. All reductions over
/// client updates fold in this order so results are reproducible across runs
/// and worker counts.
std::vector<std::size_t> client_id_order(std::span<const ClientUpdate> updates);

/// Checks that all deltas share one dimension (StructuralError otherwise)
/// and that client ids are distinct (UsageError otherwise).
void validate_updates(std::span<const ClientUpdate> updates);

}  // namespace robustfed
