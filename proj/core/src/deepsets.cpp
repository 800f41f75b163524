#include "topoforge/deepsets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace topoforge {

double activation_lipschitz(Activation act) {
  switch (act) {
    case Activation::relu: return 1.0;
    case Activation::identity: return 1.0;
    case Activation::sigmoid: return 0.25;
  }
  return 1.0;
}

namespace {

double activate(Activation act, double z) {
  switch (act) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::identity: return z;
  }
  return z;
}

// Derivative expressed through the activation output.
double activate_grad(Activation act, double a) {
  switch (act) {
    case Activation::relu: return a > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return a * (1.0 - a);
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  return "?";
}

Activation activation_from_name(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "identity") return Activation::identity;
  throw std::runtime_error("model: unknown activation " + s);
}

const char* aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::sum: return "sum";
    case Aggregator::mean: return "mean";
    case Aggregator::max: return "max";
  }
  return "?";
}

Aggregator aggregator_from_name(const std::string& s) {
  if (s == "sum") return Aggregator::sum;
  if (s == "mean") return Aggregator::mean;
  if (s == "max") return Aggregator::max;
  throw std::runtime_error("model: unknown aggregator " + s);
}

// Indices of the cloud's points in lexicographic coordinate order, shared
// between forward and backward so max ties break identically.
std::vector<int> canonical_order(const PointCloud& cloud) {
  std::vector<int> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  int d = cloud.dim();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double* pa = cloud.point(a);
    const double* pb = cloud.point(b);
    return std::lexicographical_compare(pa, pa + d, pb, pb + d);
  });
  return order;
}

void apply_chain(const std::vector<DenseLayer>& layers, std::vector<double>& x,
                 std::vector<double>& scratch) {
  for (const auto& layer : layers) {
    scratch.resize(layer.out);
    layer.apply(x.data(), scratch.data());
    x.swap(scratch);
  }
}

struct Tape {
  // acts[l] holds the activation outputs of layer l for all processed
  // points (phi1) or the single aggregate (phi2), row-major per point.
  std::vector<std::vector<double>> phi1_acts;
  std::vector<std::vector<double>> phi2_acts;
  std::vector<double> aggregate;
  std::vector<int> max_owner;  // per coordinate, position in canonical order
  std::vector<int> order;
};

std::vector<double> forward_tape(const RipsNetModel& model, const PointCloud& cloud,
                                 Tape* tape) {
  if (cloud.dim() != model.input_dim)
    throw std::invalid_argument("forward: cloud dimension != model input dim");
  int n = cloud.size();
  std::vector<int> order = canonical_order(cloud);
  int hid = model.phi1.empty() ? model.input_dim : model.phi1.back().out;

  std::vector<std::vector<double>> phi1_acts(model.phi1.size());
  for (size_t l = 0; l < model.phi1.size(); ++l)
    phi1_acts[l].resize(static_cast<size_t>(n) * model.phi1[l].out);

  std::vector<double> agg(hid, 0.0);
  std::vector<int> max_owner(hid, -1);
  std::vector<double> x, scratch;
  for (int rank = 0; rank < n; ++rank) {
    int i = order[rank];
    x.assign(cloud.point(i), cloud.point(i) + model.input_dim);
    for (size_t l = 0; l < model.phi1.size(); ++l) {
      scratch.resize(model.phi1[l].out);
      model.phi1[l].apply(x.data(), scratch.data());
      x.swap(scratch);
      std::copy(x.begin(), x.end(),
                phi1_acts[l].begin() + static_cast<size_t>(rank) * model.phi1[l].out);
    }
    switch (model.op) {
      case Aggregator::sum:
      case Aggregator::mean:
        for (int k = 0; k < hid; ++k) agg[k] += x[k];
        break;
      case Aggregator::max:
        for (int k = 0; k < hid; ++k)
          if (rank == 0 || x[k] > agg[k]) {
            agg[k] = x[k];
            max_owner[k] = rank;
          }
        break;
    }
  }
  if (model.op == Aggregator::mean)
    for (double& v : agg) v /= n;

  std::vector<std::vector<double>> phi2_acts(model.phi2.size());
  std::vector<double> y = agg;
  for (size_t l = 0; l < model.phi2.size(); ++l) {
    phi2_acts[l].resize(model.phi2[l].out);
    model.phi2[l].apply(y.data(), phi2_acts[l].data());
    y = phi2_acts[l];
  }

  if (tape) {
    tape->phi1_acts = std::move(phi1_acts);
    tape->phi2_acts = std::move(phi2_acts);
    tape->aggregate = std::move(agg);
    tape->max_owner = std::move(max_owner);
    tape->order = std::move(order);
  }
  return y;
}

struct GradAccum {
  std::vector<std::vector<double>> weight;  // per layer, matching shapes
  std::vector<std::vector<double>> bias;

  explicit GradAccum(const std::vector<DenseLayer>& layers) {
    for (const auto& l : layers) {
      weight.emplace_back(l.weight.size(), 0.0);
      bias.emplace_back(l.bias.size(), 0.0);
    }
  }
};

// Backprop through a layer stack given output-side gradient; `inputs[l]` is
// the input vector to layer l. Returns gradient w.r.t. the stack input.
std::vector<double> backprop_stack(const std::vector<DenseLayer>& layers,
                                   const std::vector<const double*>& inputs,
                                   const std::vector<const double*>& outputs,
                                   std::vector<double> grad_out, GradAccum& acc) {
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    const DenseLayer& layer = layers[l];
    const double* a = outputs[l];
    const double* x = inputs[l];
    std::vector<double> delta(layer.out);
    for (int r = 0; r < layer.out; ++r)
      delta[r] = grad_out[r] * activate_grad(layer.act, a[r]);
    for (int r = 0; r < layer.out; ++r) {
      acc.bias[l][r] += delta[r];
      double* wrow = acc.weight[l].data() + static_cast<size_t>(r) * layer.in;
      for (int c = 0; c < layer.in; ++c) wrow[c] += delta[r] * x[c];
    }
    std::vector<double> grad_in(layer.in, 0.0);
    for (int r = 0; r < layer.out; ++r) {
      const double* wrow = layer.weight.data() + static_cast<size_t>(r) * layer.in;
      for (int c = 0; c < layer.in; ++c) grad_in[c] += wrow[c] * delta[r];
    }
    grad_out = std::move(grad_in);
  }
  return grad_out;
}

}  // namespace

void DenseLayer::apply(const double* x, double* y) const {
  for (int r = 0; r < out; ++r) {
    double z = bias[r];
    const double* wrow = weight.data() + static_cast<size_t>(r) * in;
    for (int c = 0; c < in; ++c) z += wrow[c] * x[c];
    y[r] = activate(act, z);
  }
}

size_t RipsNetModel::parameter_count() const {
  size_t n = 0;
  for (const auto& l : phi1) n += l.weight.size() + l.bias.size();
  for (const auto& l : phi2) n += l.weight.size() + l.bias.size();
  return n;
}

RipsNetModel make_model(int input_dim, const std::vector<int>& phi1_dims,
                        const std::vector<int>& phi2_dims, int output_dim,
                        Aggregator op, uint64_t seed) {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("make_model: dimensions must be >= 1");
  Rng rng(seed);
  auto build = [&](int in, const std::vector<int>& dims, Activation last_act) {
    std::vector<DenseLayer> layers;
    for (size_t i = 0; i < dims.size(); ++i) {
      DenseLayer l;
      l.in = in;
      l.out = dims[i];
      l.act = i + 1 == dims.size() ? last_act : Activation::relu;
      double bound = std::sqrt(6.0 / (l.in + l.out));
      l.weight.resize(static_cast<size_t>(l.in) * l.out);
      for (double& w : l.weight) w = rng.uniform(-bound, bound);
      l.bias.assign(l.out, 0.0);
      in = dims[i];
      layers.push_back(std::move(l));
    }
    return layers;
  };
  RipsNetModel model;
  model.input_dim = input_dim;
  model.output_dim = output_dim;
  model.op = op;
  model.phi1 = build(input_dim, phi1_dims, Activation::relu);
  std::vector<int> phi2_full = phi2_dims;
  phi2_full.push_back(output_dim);
  int hid = phi1_dims.empty() ? input_dim : phi1_dims.back();
  model.phi2 = build(hid, phi2_full, Activation::sigmoid);
  return model;
}

RipsNetModel make_preset(const std::string& name, int input_dim, int output_dim,
                         uint64_t seed) {
  if (name == "synth")
    return make_model(input_dim, {30, 20, 10}, {50, 100, 200}, output_dim,
                      Aggregator::sum, seed);
  if (name == "synth-mean")
    return make_model(input_dim, {30, 20, 10}, {50, 100, 200}, output_dim,
                      Aggregator::mean, seed);
  if (name == "shape")
    return make_model(input_dim, {30, 20, 10}, {50, 100, 200}, output_dim,
                      Aggregator::mean, seed);
  throw std::invalid_argument("make_preset: unknown preset " + name);
}

std::vector<double> forward(const RipsNetModel& model, const PointCloud& cloud) {
  return forward_tape(model, cloud, nullptr);
}

double loss(const RipsNetModel& model, const std::vector<TrainSample>& batch) {
  if (batch.empty()) throw std::invalid_argument("loss: empty batch");
  double total = 0.0;
  for (const auto& s : batch) {
    std::vector<double> y = forward(model, s.cloud);
    if (y.size() != s.target.size())
      throw std::invalid_argument("loss: target length != model output dim");
    for (size_t k = 0; k < y.size(); ++k) {
      double e = y[k] - s.target[k];
      total += e * e;
    }
  }
  return total / batch.size();
}

std::vector<double> gradients(const RipsNetModel& model,
                              const std::vector<TrainSample>& batch, double* loss_out) {
  if (batch.empty()) throw std::invalid_argument("gradients: empty batch");
  GradAccum acc1(model.phi1), acc2(model.phi2);
  double total_loss = 0.0;
  int hid = model.phi1.empty() ? model.input_dim : model.phi1.back().out;

  for (const auto& s : batch) {
    Tape tape;
    std::vector<double> y = forward_tape(model, s.cloud, &tape);
    if (y.size() != s.target.size())
      throw std::invalid_argument("gradients: target length != model output dim");
    std::vector<double> grad(y.size());
    for (size_t k = 0; k < y.size(); ++k) {
      double e = y[k] - s.target[k];
      total_loss += e * e;
      grad[k] = 2.0 * e / batch.size();
    }

    // phi2
    std::vector<const double*> in2(model.phi2.size()), out2(model.phi2.size());
    for (size_t l = 0; l < model.phi2.size(); ++l) {
      in2[l] = l == 0 ? tape.aggregate.data() : tape.phi2_acts[l - 1].data();
      out2[l] = tape.phi2_acts[l].data();
    }
    std::vector<double> grad_agg = backprop_stack(model.phi2, in2, out2, std::move(grad), acc2);

    // aggregator
    int n = s.cloud.size();
    auto backprop_point = [&](int rank, const std::vector<double>& grad_point) {
      std::vector<const double*> in1(model.phi1.size()), out1(model.phi1.size());
      std::vector<double> raw(s.cloud.point(tape.order[rank]),
                              s.cloud.point(tape.order[rank]) + model.input_dim);
      for (size_t l = 0; l < model.phi1.size(); ++l) {
        in1[l] = l == 0 ? raw.data()
                        : tape.phi1_acts[l - 1].data() +
                              static_cast<size_t>(rank) * model.phi1[l - 1].out;
        out1[l] = tape.phi1_acts[l].data() + static_cast<size_t>(rank) * model.phi1[l].out;
      }
      backprop_stack(model.phi1, in1, out1, grad_point, acc1);
    };

    if (model.op == Aggregator::max) {
      // One gradient route per coordinate, to the first attaining point.
      std::vector<std::vector<double>> per_point(n);
      for (int k = 0; k < hid; ++k) {
        int owner = tape.max_owner[k];
        if (owner < 0) continue;
        if (per_point[owner].empty()) per_point[owner].assign(hid, 0.0);
        per_point[owner][k] = grad_agg[k];
      }
      for (int rank = 0; rank < n; ++rank)
        if (!per_point[rank].empty()) backprop_point(rank, per_point[rank]);
    } else {
      std::vector<double> grad_point = grad_agg;
      if (model.op == Aggregator::mean)
        for (double& g : grad_point) g /= n;
      for (int rank = 0; rank < n; ++rank) backprop_point(rank, grad_point);
    }
  }

  if (loss_out) *loss_out = total_loss / batch.size();

  std::vector<double> flat;
  flat.reserve(model.parameter_count());
  for (size_t l = 0; l < model.phi1.size(); ++l) {
    flat.insert(flat.end(), acc1.weight[l].begin(), acc1.weight[l].end());
    flat.insert(flat.end(), acc1.bias[l].begin(), acc1.bias[l].end());
  }
  for (size_t l = 0; l < model.phi2.size(); ++l) {
    flat.insert(flat.end(), acc2.weight[l].begin(), acc2.weight[l].end());
    flat.insert(flat.end(), acc2.bias[l].begin(), acc2.bias[l].end());
  }
  return flat;
}

std::vector<double> flatten_parameters(const RipsNetModel& model) {
  std::vector<double> flat;
  flat.reserve(model.parameter_count());
  for (const auto* stack : {&model.phi1, &model.phi2})
    for (const auto& l : *stack) {
      flat.insert(flat.end(), l.weight.begin(), l.weight.end());
      flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
  return flat;
}

void assign_parameters(RipsNetModel& model, const std::vector<double>& params) {
  if (params.size() != model.parameter_count())
    throw std::invalid_argument("assign_parameters: size mismatch");
  size_t pos = 0;
  for (auto* stack : {&model.phi1, &model.phi2})
    for (auto& l : *stack) {
      std::copy(params.begin() + pos, params.begin() + pos + l.weight.size(),
                l.weight.begin());
      pos += l.weight.size();
      std::copy(params.begin() + pos, params.begin() + pos + l.bias.size(), l.bias.begin());
      pos += l.bias.size();
    }
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("TrainConfig: bad learning rate");
  if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch size must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
  if (validation_fraction < 0.0 || validation_fraction >= 1.0)
    throw std::invalid_argument("TrainConfig: validation fraction out of [0,1)");
}

TrainHistory train(RipsNetModel& model, const std::vector<TrainSample>& dataset,
                   const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");

  Rng rng(config.seed);
  std::vector<int> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  size_t val_count = static_cast<size_t>(std::llround(config.validation_fraction * dataset.size()));
  if (val_count >= dataset.size()) val_count = dataset.size() - 1;
  std::vector<int> val_idx(idx.begin(), idx.begin() + val_count);
  std::vector<int> train_idx(idx.begin() + val_count, idx.end());

  auto eval = [&](const std::vector<int>& which) {
    double total = 0.0;
    for (int i : which) {
      std::vector<TrainSample> one = {dataset[i]};
      total += loss(model, one);
    }
    return which.empty() ? 0.0 : total / which.size();
  };

  size_t pcount = model.parameter_count();
  std::vector<double> m1(pcount, 0.0), m2(pcount, 0.0);
  int64_t step = 0;

  TrainHistory history;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = flatten_parameters(model);
  int since_improve = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(train_idx);
    double epoch_loss = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < train_idx.size(); start += config.batch_size) {
      size_t end = std::min(train_idx.size(), start + config.batch_size);
      std::vector<TrainSample> batch;
      batch.reserve(end - start);
      for (size_t i = start; i < end; ++i) batch.push_back(dataset[train_idx[i]]);
      double batch_loss = 0.0;
      std::vector<double> grad = gradients(model, batch, &batch_loss);
      epoch_loss += batch_loss * batch.size();
      seen += batch.size();
      if (!std::isfinite(batch_loss))
        throw std::runtime_error("train: loss became non-finite, aborting");

      ++step;
      std::vector<double> params = flatten_parameters(model);
      double b1t = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      double b2t = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (size_t k = 0; k < pcount; ++k) {
        double g = grad[k];
        m1[k] = config.beta1 * m1[k] + (1.0 - config.beta1) * g;
        if (config.optimizer == TrainConfig::Optimizer::adam) {
          m2[k] = config.beta2 * m2[k] + (1.0 - config.beta2) * g * g;
          params[k] -= config.learning_rate * (m1[k] / b1t) /
                       (std::sqrt(m2[k] / b2t) + config.epsilon);
        } else {  // adamax
          m2[k] = std::max(config.beta2 * m2[k], std::abs(g));
          params[k] -= (config.learning_rate / b1t) * m1[k] / (m2[k] + config.epsilon);
        }
      }
      assign_parameters(model, params);
    }
    history.train_loss.push_back(seen ? epoch_loss / seen : 0.0);

    double val = val_idx.empty() ? history.train_loss.back() : eval(val_idx);
    history.val_loss.push_back(val);
    if (val < best_val - config.min_delta) {
      best_val = val;
      best_params = flatten_parameters(model);
      history.best_epoch = epoch;
      since_improve = 0;
    } else {
      if (val < best_val) {
        // Track the best weights even when the improvement is too small to
        // reset the early-stop counter.
        best_val = val;
        best_params = flatten_parameters(model);
        history.best_epoch = epoch;
      }
      ++since_improve;
      if (since_improve >= config.patience) break;
    }
  }
  assign_parameters(model, best_params);
  return history;
}

double spectral_norm(const DenseLayer& layer, double rel_tol, int max_iter) {
  std::vector<double> v(layer.in, 1.0 / std::sqrt(static_cast<double>(layer.in)));
  std::vector<double> w(layer.out);
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    // w = W v
    for (int r = 0; r < layer.out; ++r) {
      double s = 0.0;
      const double* wrow = layer.weight.data() + static_cast<size_t>(r) * layer.in;
      for (int c = 0; c < layer.in; ++c) s += wrow[c] * v[c];
      w[r] = s;
    }
    double wn = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (wn == 0.0) return 0.0;
    // v = W^T w / ||...||
    for (int c = 0; c < layer.in; ++c) v[c] = 0.0;
    for (int r = 0; r < layer.out; ++r) {
      const double* wrow = layer.weight.data() + static_cast<size_t>(r) * layer.in;
      for (int c = 0; c < layer.in; ++c) v[c] += wrow[c] * w[r];
    }
    double vn = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (vn == 0.0) return wn;
    for (double& x : v) x /= vn;
    double next = vn / wn;  // ||W^T w|| / ||w|| converges to sigma
    if (it > 0 && std::abs(next - sigma) <= rel_tol * std::max(1.0, sigma)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

LipschitzBound lipschitz_upper_bound(const RipsNetModel& model) {
  if (model.op != Aggregator::mean)
    throw std::invalid_argument(
        "lipschitz_upper_bound: certification requires the mean aggregator");
  auto stack_bound = [](const std::vector<DenseLayer>& layers) {
    double c = 1.0;
    for (const auto& l : layers) c *= spectral_norm(l) * activation_lipschitz(l.act);
    return c;
  };
  LipschitzBound b;
  b.c1 = stack_bound(model.phi1);
  b.c2 = stack_bound(model.phi2);
  b.product = b.c1 * b.c2;
  return b;
}

std::string model_to_json(const RipsNetModel& model) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["aggregator"] = aggregator_name(model.op);
  j["architecture"] = {{"input_dim", model.input_dim},
                       {"output_dim", model.output_dim},
                       {"phi1_layers", model.phi1.size()},
                       {"phi2_layers", model.phi2.size()}};
  j["target_fingerprint"] = model.target_fingerprint;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto* stack : {&model.phi1, &model.phi2})
    for (const auto& l : *stack)
      layers.push_back({{"rows", l.out},
                        {"cols", l.in},
                        {"weights", l.weight},
                        {"bias", l.bias},
                        {"activation", activation_name(l.act)}});
  j["layers"] = std::move(layers);
  return j.dump();
}

RipsNetModel model_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model: parse error: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1)
      throw std::runtime_error("model: unsupported format version");
    RipsNetModel model;
    model.op = aggregator_from_name(j.at("aggregator").get<std::string>());
    model.input_dim = j.at("architecture").at("input_dim").get<int>();
    model.output_dim = j.at("architecture").at("output_dim").get<int>();
    size_t n1 = j.at("architecture").at("phi1_layers").get<size_t>();
    size_t n2 = j.at("architecture").at("phi2_layers").get<size_t>();
    model.target_fingerprint = j.value("target_fingerprint", "");
    const auto& layers = j.at("layers");
    if (layers.size() != n1 + n2) throw std::runtime_error("model: layer count mismatch");
    int expect_in = model.input_dim;
    for (size_t i = 0; i < layers.size(); ++i) {
      DenseLayer l;
      l.out = layers[i].at("rows").get<int>();
      l.in = layers[i].at("cols").get<int>();
      l.weight = layers[i].at("weights").get<std::vector<double>>();
      l.bias = layers[i].at("bias").get<std::vector<double>>();
      l.act = activation_from_name(layers[i].at("activation").get<std::string>());
      if (l.weight.size() != static_cast<size_t>(l.in) * l.out ||
          l.bias.size() != static_cast<size_t>(l.out))
        throw std::runtime_error("model: layer shape mismatch");
      if (l.in != expect_in) throw std::runtime_error("model: layer chain mismatch");
      expect_in = l.out;
      if (i < n1)
        model.phi1.push_back(std::move(l));
      else
        model.phi2.push_back(std::move(l));
    }
    if (expect_in != model.output_dim)
      throw std::runtime_error("model: output dimension mismatch");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model: malformed document: ") + e.what());
  }
}

void save_model(const RipsNetModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << model_to_json(model) << "\n";
}

RipsNetModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace topoforge
