#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robustfed/rng.hpp"

namespace robustfed {

/// Labeled examples with real-valued features in [0, 1].
struct Dataset {
  std::vector<double> features;  // row-major, size() * feature_dim entries
  std::size_t feature_dim = 0;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> example(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }
};

/// Reads an images/labels pair in the IDX format used by the standard MNIST
/// distribution (big-endian magic + dims header, unsigned-byte payload).
/// Pixel values are scaled to [0, 1]. Malformed or truncated files raise
/// FormatError naming the byte offset; no partial dataset is returned.
Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path);

/// Reads headerless CSV rows "label,f1,f2,...". Features must already lie in
/// [0, 1]; violations raise FormatError with the line number.
Dataset load_csv(const std::string& path);

/// Synthetic 10-class-style blob task: one prototype per class drawn
/// uniformly in [0.1, 0.9]^features, examples are the prototype plus
/// Gaussian feature noise, clipped to [0, 1], classes balanced. Optionally a
/// pair of overlapping (confusable) classes whose prototypes nearly

/// coincide.
struct SyntheticSpec {
  int features = 64;
  int classes = 10;
  double noise_std = 0.5;
  bool overlap = true;
  std::array<int, 2> overlap_classes{1, 7};
  double overlap_std = 0.05;
};

/// Returns (train, test) drawn from the same prototypes, deterministically
/// under the seed.
std::pair<Dataset, Dataset> make_blobs(const SyntheticSpec& spec,
                                       std::size_t train_count,
                                       std::size_t test_count,
                                       std::uint64_t seed);

/// Shuffles under the rng and splits into num_clients shards of equal size;
/// any remainder goes to the first shards, one extra example each.
std::vector<Dataset> partition_iid(const Dataset& data, int num_clients,
                                   Rng& rng);

}  // namespace robustfed
