#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robustfed/client_update.hpp"
#include "robustfed/dataset.hpp"
#include "robustfed/params.hpp"
#include "robustfed/rng.hpp"

namespace robustfed {

enum class ModelKind { kSoftmaxRegression, kMlp1Hidden };

ModelKind model_from_name(const std::string& name);
std::string model_name(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::kSoftmaxRegression;
  int input_dim = 0;
  int hidden_dim = 0;  // mlp only
  int num_classes = 0;
  double learning_rate = 0.1;
  double momentum = 0.9;
  int local_epochs = 1;
  int batch_size = 32;
};

void validate_model_spec(const ModelSpec& spec);

/// Contiguous slice of the flat weight vector belonging to one layer.
struct LayerSlice {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;  // 1 for bias vectors
  std::size_t count() const { return rows * cols; }
};

std::vector<LayerSlice> layout(const ModelSpec& spec);
std::size_t param_count(const ModelSpec& spec);

/// Initial global weights: zeros for softmax regression; uniform(-s, s) with
/// s = sqrt(6 / (fan_in + fan_out)) per weight matrix for the MLP, biases
/// zero, drawn deterministically from the seed.
ParameterVector init_weights(const ModelSpec& spec, std::uint64_t seed);

/// Mean cross-entropy of the examples selected by `indices`.
double batch_loss(const ModelSpec& spec, std::span<const double> weights,
                  const Dataset& data, std::span<const std::size_t> indices);

/// Analytic gradient of batch_loss with respect to the flat weights.
std::vector<double> batch_gradient(const ModelSpec& spec,
                                   std::span<const double> weights,
                                   const Dataset& data,
                                   std::span<const std::size_t> indices);

/// Runs local_epochs of seeded mini-batch SGD with momentum on the shard,
/// starting from the round's global weights, and returns
/// delta = final - global. The caller supplies identity and sample fraction.
ClientUpdate local_train(const ParameterVector& global_weights,
                         const Dataset& shard, const ModelSpec& spec,
                         ClientId client_id, int round, double alpha,
                         Rng& rng);

/// (accuracy, mean cross-entropy) on the test set; argmax ties resolve to
/// the lowest class index.
std::pair<double, double> evaluate(const ParameterVector& weights,
                                   const Dataset& test, const ModelSpec& spec);

}  // namespace robustfed
