#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoforge/geometry.hpp"

namespace topoforge {

enum class Activation { relu, sigmoid, identity };

double activation_lipschitz(Activation act);

struct DenseLayer {
  int in = 0, out = 0;
  std::vector<double> weight;  // row-major, out x in
  std::vector<double> bias;
  Activation act = Activation::identity;

  // y = act(W x + b)
  void apply(const double* x, double* y) const;
};

enum class Aggregator { sum, mean, max };

struct RipsNetModel {
  std::vector<DenseLayer> phi1;
  std::vector<DenseLayer> phi2;
  Aggregator op = Aggregator::sum;
  int input_dim = 0;
  int output_dim = 0;
  std::string target_fingerprint;

  size_t parameter_count() const;
};

struct TrainSample {
  PointCloud cloud;
  std::vector<double> target;
};

struct TrainConfig {
  enum class Optimizer { adam, adamax };
  Optimizer optimizer = Optimizer::adamax;
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 32;
  int max_epochs = 1000;
  int patience = 200;       // epochs without min_delta improvement
  double min_delta = 1e-5;  // on validation loss
  double validation_fraction = 0.1;
  uint64_t seed = 0;

  void validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int best_epoch = -1;
};

struct LipschitzBound {
  double c1 = 0.0;
  double c2 = 0.0;
  double product = 0.0;
};

// Glorot-uniform initialized model; dims list hidden widths of each map.
RipsNetModel make_model(int input_dim, const std::vector<int>& phi1_dims,
                        const std::vector<int>& phi2_dims, int output_dim,
                        Aggregator op, uint64_t seed);

// Architecture presets: "synth" (op sum), "synth-mean", "shape" (op mean).
RipsNetModel make_preset(const std::string& name, int input_dim, int output_dim,
                         uint64_t seed);

// phi2(op({phi1(x)})). Points are aggregated in lexicographic point order so
// the result is bit-identical under any permutation of the input.
std::vector<double> forward(const RipsNetModel& model, const PointCloud& cloud);

// Mean over the batch of squared Euclidean errors.
double loss(const RipsNetModel& model, const std::vector<TrainSample>& batch);

// Exact reverse-mode gradients of loss, flattened layer-by-layer
// (phi1 then phi2, weights then bias). Also returns the batch loss.
std::vector<double> gradients(const RipsNetModel& model,
                              const std::vector<TrainSample>& batch,
                              double* loss_out = nullptr);

std::vector<double> flatten_parameters(const RipsNetModel& model);
void assign_parameters(RipsNetModel& model, const std::vector<double>& params);

TrainHistory train(RipsNetModel& model, const std::vector<TrainSample>& dataset,
                   const TrainConfig& config);

// Per-map spectral-norm products; requires the mean aggregator.
LipschitzBound lipschitz_upper_bound(const RipsNetModel& model);

double spectral_norm(const DenseLayer& layer, double rel_tol = 1e-8, int max_iter = 1000);

std::string model_to_json(const RipsNetModel& model);
RipsNetModel model_from_json(const std::string& json_text);
void save_model(const RipsNetModel& model, const std::string& path);
RipsNetModel load_model(const std::string& path);

}  // namespace topoforge
