#pragma once

#include <set>
#include <span>
#include <string>

#include "robustfed/client_update.hpp"
#include "robustfed/dataset.hpp"
#include "robustfed/rng.hpp"

namespace robustfed {

enum class AttackKind { kNone, kFlipLabel, kNoisyData, kByzantine };

AttackKind attack_from_name(const std::string& name);
std::string attack_name(AttackKind kind);

struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  int flip_source_class = 1;
  int flip_target_class = 7;
  double noise_low = -1.4;
  double noise_high = 1.4;
  double byz_sigma = 20.0;
  double malicious_fraction = 0.3;  // must stay below 0.5
};

/// Relabels every example of flip_source_class as flip_target_class.
/// Features and other labels are untouched. Classes must be distinct valid
/// indices (UsageError).
Dataset poison_flip(const Dataset& data, const AttackSpec& spec);

/// Adds per-feature uniform noise from [noise_low, noise_high] and clamps
/// back into [0, 1]. Requires features already normalized to [0, 1]
/// (UsageError). Labels are untouched.
Dataset poison_noise(const Dataset& data, const AttackSpec& spec, Rng& rng);

/// Adds an independent Normal(0, byz_sigma) draw to every coordinate.
/// byz_sigma == 0 returns the delta unchanged.
ParameterVector byzantine_perturb(const ParameterVector& delta,
                                  const AttackSpec& spec, Rng& rng);

/// Uniformly samples floor(malicious_fraction * count) clients without
/// replacement. Roles are fixed for the whole experiment.
std::set<ClientId> assign_adversaries(std::span<const ClientId> client_ids,
                                      const AttackSpec& spec, Rng& rng);

}  // namespace robustfed
