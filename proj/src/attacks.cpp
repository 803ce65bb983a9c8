#include "robustfed/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "robustfed/errors.hpp"

namespace robustfed {

AttackKind attack_from_name(const std::string& name) {
  if (name == "none") return AttackKind::kNone;
  if (name == "flip_label") return AttackKind::kFlipLabel;
  if (name == "noisy_data") return AttackKind::kNoisyData;
  if (name == "byzantine") return AttackKind::kByzantine;
  throw ConfigError("attack: unknown kind \"" + name + "\"");
}

std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kFlipLabel: return "flip_label";
    case AttackKind::kNoisyData: return "noisy_data";
    case AttackKind::kByzantine: return "byzantine";
  }
  throw ConfigError("attack: bad kind");
}

Dataset poison_flip(const Dataset& data, const AttackSpec& spec) {
  const int src = spec.flip_source_class;
  const int dst = spec.flip_target_class;
  if (src < 0 || src >= data.num_classes || dst < 0 ||
      dst >= data.num_classes) {
    throw UsageError("poison_flip: class index out of range");
  }
  if (src == dst) {
    throw UsageError("poison_flip: source and target class must differ");
  }
  Dataset out = data;
  for (int& label : out.labels) {
    if (label == src) label = dst;
  }
  return out;
}

Dataset poison_noise(const Dataset& data, const AttackSpec& spec, Rng& rng) {
  if (!(spec.noise_low < spec.noise_high)) {
    throw UsageError("poison_noise: noise_low must be < noise_high");
  }
  for (double x : data.features) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw UsageError("poison_noise: features must be normalized to [0, 1]");
    }
  }
  Dataset out = data;
  std::uniform_real_distribution<double> uniform(spec.noise_low,
                                                 spec.noise_high);
  for (double& x : out.features) {
    x = std::clamp(x + uniform(rng), 0.0, 1.0);
  }
  return out;
}

ParameterVector byzantine_perturb(const ParameterVector& delta,
                                  const AttackSpec& spec, Rng& rng) {
  if (spec.byz_sigma < 0) throw UsageError("byzantine_perturb: sigma < 0");
  if (spec.byz_sigma == 0.0) return delta;
  ParameterVector out = delta;
  std::normal_distribution<double> gaussian(0.0, spec.byz_sigma);
  for (double& x : out.values) x += gaussian(rng);
  return out;
}

std::set<ClientId> assign_adversaries(std::span<const ClientId> client_ids,
                                      const AttackSpec& spec, Rng& rng) {
  if (spec.malicious_fraction < 0.0 || spec.malicious_fraction >= 0.5) {
    throw UsageError("assign_adversaries: malicious_fraction must be in [0, 0.5)");
  }
  const auto count = static_cast<std::size_t>(
      spec.malicious_fraction * static_cast<double>(client_ids.size()));
  std::vector<ClientId> pool(client_ids.begin(), client_ids.end());
  std::sort(pool.begin(), pool.end());
  // partial Fisher-Yates: the first `count` slots end up a uniform sample
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  return std::set<ClientId>(pool.begin(), pool.begin() + count);
}

}  // namespace robustfed
