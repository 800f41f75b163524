#include "topoforge/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "topoforge/parallel.hpp"
#include "topoforge/transport.hpp"

namespace topoforge {

// ---- classifiers -----------------------------------------------------------

namespace {

std::vector<double> softmax(std::vector<double> z) {
  double mx = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

std::vector<double> mlp_logits(const std::vector<DenseLayer>& layers,
                               const std::vector<double>& x,
                               std::vector<std::vector<double>>* acts = nullptr) {
  std::vector<double> cur = x;
  if (acts) acts->clear();
  for (const auto& layer : layers) {
    std::vector<double> next(layer.out);
    layer.apply(cur.data(), next.data());
    if (acts) acts->push_back(next);
    cur = std::move(next);
  }
  return cur;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

int ClassifierModel::predict(const std::vector<double>& x) const {
  if (spec.kind == ClassifierSpec::Kind::knn) {
    if (train_features.empty()) throw std::runtime_error("classifier: empty knn model");
    int k = std::min<int>(spec.knn_k, static_cast<int>(train_features.size()));
    std::vector<std::pair<double, int>> dist;
    dist.reserve(train_features.size());
    for (size_t i = 0; i < train_features.size(); ++i) {
      double d2 = 0.0;
      for (size_t j = 0; j < x.size(); ++j) {
        double e = x[j] - train_features[i][j];
        d2 += e * e;
      }
      dist.emplace_back(d2, train_labels[i]);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<int> votes(n_classes, 0);
    for (int i = 0; i < k; ++i) ++votes[dist[i].second];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  }
  std::vector<double> z = mlp_logits(layers, x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

ClassifierModel train_classifier(const std::vector<std::vector<double>>& features,
                                 const std::vector<int>& labels, const ClassifierSpec& spec) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("train_classifier: empty or mismatched data");
  int n_classes = 1 + *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0)
    throw std::invalid_argument("train_classifier: negative label");
  bool multi = false;
  for (int l : labels) multi = multi || l != labels[0];
  if (!multi) throw std::invalid_argument("train_classifier: single-class data");

  ClassifierModel model;
  model.spec = spec;
  model.n_classes = n_classes;
  if (spec.kind == ClassifierSpec::Kind::knn) {
    if (spec.knn_k < 1) throw std::invalid_argument("train_classifier: knn k must be >= 1");
    model.train_features = features;
    model.train_labels = labels;
    return model;
  }

  int in = static_cast<int>(features[0].size());
  Rng rng(spec.seed);
  std::vector<int> dims = spec.hidden;
  dims.push_back(n_classes);
  for (size_t i = 0; i < dims.size(); ++i) {
    DenseLayer l;
    l.in = in;
    l.out = dims[i];
    l.act = i + 1 == dims.size() ? Activation::identity : Activation::relu;
    double bound = std::sqrt(6.0 / (l.in + l.out));
    l.weight.resize(static_cast<size_t>(l.in) * l.out);
    for (double& w : l.weight) w = rng.uniform(-bound, bound);
    l.bias.assign(l.out, 0.0);
    in = l.out;
    model.layers.push_back(std::move(l));
  }

  // Adam on softmax cross-entropy.
  size_t pcount = 0;
  for (const auto& l : model.layers) pcount += l.weight.size() + l.bias.size();
  std::vector<double> m1(pcount, 0.0), m2(pcount, 0.0);
  int64_t step = 0;
  std::vector<int> idx(features.size());
  std::iota(idx.begin(), idx.end(), 0);

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    rng.shuffle(idx);
    for (size_t start = 0; start < idx.size(); start += spec.batch_size) {
      size_t end = std::min(idx.size(), start + static_cast<size_t>(spec.batch_size));
      std::vector<std::vector<double>> gw(model.layers.size());
      std::vector<std::vector<double>> gb(model.layers.size());
      for (size_t l = 0; l < model.layers.size(); ++l) {
        gw[l].assign(model.layers[l].weight.size(), 0.0);
        gb[l].assign(model.layers[l].bias.size(), 0.0);
      }
      double inv_batch = 1.0 / static_cast<double>(end - start);
      for (size_t s = start; s < end; ++s) {
        const std::vector<double>& x = features[idx[s]];
        std::vector<std::vector<double>> acts;
        std::vector<double> p = softmax(mlp_logits(model.layers, x, &acts));
        std::vector<double> delta = p;
        delta[labels[idx[s]]] -= 1.0;  // dCE/dlogits
        for (double& d : delta) d *= inv_batch;
        for (int l = static_cast<int>(model.layers.size()) - 1; l >= 0; --l) {
          const DenseLayer& layer = model.layers[l];
          const std::vector<double>& input = l == 0 ? x : acts[l - 1];
          if (l + 1 < static_cast<int>(model.layers.size()) || layer.act != Activation::identity)
            for (int r = 0; r < layer.out; ++r)
              if (layer.act == Activation::relu && acts[l][r] <= 0.0) delta[r] = 0.0;
          std::vector<double> prev(layer.in, 0.0);
          for (int r = 0; r < layer.out; ++r) {
            gb[l][r] += delta[r];
            const double* wrow = layer.weight.data() + static_cast<size_t>(r) * layer.in;
            double* grow = gw[l].data() + static_cast<size_t>(r) * layer.in;
            for (int c = 0; c < layer.in; ++c) {
              grow[c] += delta[r] * input[c];
              prev[c] += wrow[c] * delta[r];
            }
          }
          delta = std::move(prev);
        }
      }
      ++step;
      double b1t = 1.0 - std::pow(0.9, static_cast<double>(step));
      double b2t = 1.0 - std::pow(0.999, static_cast<double>(step));
      size_t pos = 0;
      auto adam = [&](std::vector<double>& params, const std::vector<double>& grad) {
        for (size_t k = 0; k < params.size(); ++k, ++pos) {
          m1[pos] = 0.9 * m1[pos] + 0.1 * grad[k];
          m2[pos] = 0.999 * m2[pos] + 0.001 * grad[k] * grad[k];
          params[k] -= spec.learning_rate * (m1[pos] / b1t) / (std::sqrt(m2[pos] / b2t) + 1e-8);
        }
      };
      for (size_t l = 0; l < model.layers.size(); ++l) {
        adam(model.layers[l].weight, gw[l]);
        adam(model.layers[l].bias, gb[l]);
      }
    }
  }
  return model;
}

double classifier_accuracy(const ClassifierModel& model,
                           const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("classifier_accuracy: empty or mismatched data");
  int hit = 0;
  for (size_t i = 0; i < features.size(); ++i)
    if (model.predict(features[i]) == labels[i]) ++hit;
  return static_cast<double>(hit) / features.size();
}

// ---- vectorization pipeline ------------------------------------------------

namespace {

double resolve_radius(const FiltrationSpec& filt, const PointCloud& cloud) {
  return filt.max_radius > 0.0 ? filt.max_radius : default_max_radius(cloud);
}

FilteredComplex build_complex(const FiltrationSpec& filt, const PointCloud& cloud,
                              double radius) {
  if (filt.kind == FiltrationSpec::Kind::rips)
    return rips_filtration(cloud, filt.max_dim, radius);
  return dtm_filtration(cloud, filt.m, filt.p, filt.max_dim, radius);
}

PersistenceDiagram restrict_dims(const PersistenceDiagram& d, const std::vector<int>& dims) {
  PersistenceDiagram out;
  for (const auto& p : d.points)
    if (std::find(dims.begin(), dims.end(), p.dim) != dims.end()) out.points.push_back(p);
  return out;
}

std::vector<double> vector_from_diagram(const PersistenceDiagram& finitized,
                                        const PvParamsFile& pv) {
  PersistenceVector v = pv.kind == PvKind::pi ? persistence_image(finitized, pv.pi)
                                              : persistence_landscape(finitized, pv.pl);
  if (pv.normalized) v = normalize(v);
  return v.values;
}

}  // namespace

PersistenceDiagram PvPipeline::diagram(const PointCloud& cloud) const {
  double radius = resolve_radius(filt, cloud);
  int max_hom = *std::max_element(hom_dims.begin(), hom_dims.end());
  PersistenceDiagram d = compute_persistence(build_complex(filt, cloud, radius), max_hom);
  return finitize(restrict_dims(d, hom_dims), drop_infinite ? 0.0 : radius, drop_infinite);
}

std::vector<double> PvPipeline::vectorize(const PointCloud& cloud) const {
  return vector_from_diagram(diagram(cloud), pv);
}

// ---- config parsing --------------------------------------------------------

namespace {

Law law_from_json(const nlohmann::json& j) {
  Law law;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "point_mass") {
    law.kind = Law::Kind::point_mass;
    law.center = j.at("center").get<std::vector<double>>();
  } else if (kind == "uniform_box") {
    law.kind = Law::Kind::uniform_box;
    law.lo = j.at("lo").get<std::vector<double>>();
    law.hi = j.at("hi").get<std::vector<double>>();
  } else if (kind == "gaussian") {
    law.kind = Law::Kind::gaussian;
    law.center = j.at("center").get<std::vector<double>>();
    law.scale = j.at("stddev").get<double>();
  } else if (kind == "uniform_circle") {
    law.kind = Law::Kind::uniform_circle;
    law.center = j.at("center").get<std::vector<double>>();
    law.scale = j.at("radius").get<double>();
  } else {
    throw std::runtime_error("config: unknown law kind " + kind);
  }
  return law;
}

FiltrationSpec filtration_from_json(const nlohmann::json& j) {
  FiltrationSpec f;
  std::string kind = j.value("kind", std::string("rips"));
  if (kind == "rips")
    f.kind = FiltrationSpec::Kind::rips;
  else if (kind == "dtm")
    f.kind = FiltrationSpec::Kind::dtm;
  else
    throw std::runtime_error("config: unknown filtration " + kind);
  f.m = j.value("m", 0.05);
  f.p = j.value("p", 2.0);
  f.max_dim = j.value("max_dim", 2);
  f.max_radius = j.value("max_radius", 0.0);
  return f;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("config: parse error: ") + e.what());
  }
  try {
    ExperimentConfig c;
    const auto& data = j.at("data");
    std::string dk = data.value("kind", std::string("synthetic"));
    if (dk == "synthetic") {
      c.data.kind = DataSource::Kind::synthetic;
      c.data.classes = data.value("classes", std::vector<int>{1, 2});
      c.data.n_points = data.at("n_points").get<int>();
      c.data.center_lo = data.value("center_lo", std::vector<double>{-2.0, -2.0});
      c.data.center_hi = data.value("center_hi", std::vector<double>{2.0, 2.0});
      c.data.radius_lo = data.value("radius_lo", 0.5);
      c.data.radius_hi = data.value("radius_hi", 1.5);
    } else if (dk == "cloud_files") {
      c.data.kind = DataSource::Kind::cloud_files;
      c.data.paths = data.at("paths").get<std::vector<std::string>>();
    } else if (dk == "series_files") {
      c.data.kind = DataSource::Kind::series_files;
      c.data.paths = data.at("paths").get<std::vector<std::string>>();
      c.data.embed_dim = data.value("embed_dim", 3);
      c.data.delay = data.value("delay", 1);
      c.data.skip = data.value("skip", 1);
    } else {
      throw std::runtime_error("config: unknown data kind " + dk);
    }
    const auto& splits = j.at("splits");
    c.tr1 = splits.at("tr1").get<int>();
    c.tr2 = splits.at("tr2").get<int>();
    c.te = splits.at("te").get<int>();

    const auto& pv = j.at("pv");
    std::string pvk = pv.at("kind").get<std::string>();
    if (pvk == "pi")
      c.pv.kind = PvKind::pi;
    else if (pvk == "pl")
      c.pv.kind = PvKind::pl;
    else
      throw std::runtime_error("config: unknown pv kind " + pvk);
    c.pv.normalized = pv.value("normalized", true);
    c.estimate_pv = pv.value("estimate", true);
    c.pi_quantile = pv.value("quantile", 0.2);
    if (c.pv.kind == PvKind::pi) {
      c.pv.pi.nx = pv.value("nx", 20);
      c.pv.pi.ny = pv.value("ny", 20);
      std::string w = pv.value("weight", std::string("ten_tanh_persistence"));
      if (w == "ten_tanh_persistence")
        c.pv.pi.weight = PiWeight::ten_tanh_persistence;
      else if (w == "persistence_squared")
        c.pv.pi.weight = PiWeight::persistence_squared;
      else if (w == "constant_one")
        c.pv.pi.weight = PiWeight::constant_one;
      else
        throw std::runtime_error("config: unknown pi weight " + w);
      if (!c.estimate_pv) {
        c.pv.pi.x0 = pv.at("x0").get<double>();
        c.pv.pi.x1 = pv.at("x1").get<double>();
        c.pv.pi.y0 = pv.at("y0").get<double>();
        c.pv.pi.y1 = pv.at("y1").get<double>();
        c.pv.pi.sigma = pv.at("sigma").get<double>();
        c.pv.pi.validate();
      }
    } else {
      c.pv.pl.k_max = pv.value("k_max", 5);
      c.pv.pl.resolution = pv.value("resolution", 50);
      if (!c.estimate_pv) {
        c.pv.pl.t0 = pv.at("t0").get<double>();
        c.pv.pl.t1 = pv.at("t1").get<double>();
        c.pv.pl.validate();
      }
    }

    if (j.contains("filtration")) c.filtration = filtration_from_json(j.at("filtration"));
    if (j.contains("dtm")) c.dtm = filtration_from_json(j.at("dtm"));
    else c.dtm.kind = FiltrationSpec::Kind::dtm;
    c.hom_dims = j.value("hom_dims", std::vector<int>{1});

    if (j.contains("ripsnet")) {
      const auto& rn = j.at("ripsnet");
      c.rn_preset = rn.value("preset", std::string("synth-mean"));
      std::string opt = rn.value("optimizer", std::string("adamax"));
      if (opt == "adam")
        c.rn_train.optimizer = TrainConfig::Optimizer::adam;
      else if (opt == "adamax")
        c.rn_train.optimizer = TrainConfig::Optimizer::adamax;
      else
        throw std::runtime_error("config: unknown optimizer " + opt);
      c.rn_train.learning_rate = rn.value("learning_rate", 5e-4);
      c.rn_train.batch_size = rn.value("batch_size", 32);
      c.rn_train.max_epochs = rn.value("max_epochs", 1000);
      c.rn_train.patience = rn.value("patience", 200);
      c.rn_train.min_delta = rn.value("min_delta", 1e-5);
      c.rn_train.validation_fraction = rn.value("validation_fraction", 0.1);
    }
    if (j.contains("classifier")) {
      const auto& cl = j.at("classifier");
      std::string ck = cl.value("kind", std::string("mlp"));
      if (ck == "mlp")
        c.classifier.kind = ClassifierSpec::Kind::mlp;
      else if (ck == "knn")
        c.classifier.kind = ClassifierSpec::Kind::knn;
      else
        throw std::runtime_error("config: unknown classifier " + ck);
      c.classifier.hidden = cl.value("hidden", std::vector<int>{100, 50});
      c.classifier.epochs = cl.value("epochs", 200);
      c.classifier.learning_rate = cl.value("learning_rate", 1e-2);
      c.classifier.batch_size = cl.value("batch_size", 32);
      c.classifier.knn_k = cl.value("k", 5);
    }
    if (j.contains("noise")) {
      const auto& noise = j.at("noise");
      c.lambdas = noise.value("lambdas", std::vector<double>{});
      if (noise.contains("law")) c.noise_law = law_from_json(noise.at("law"));
    }
    for (double l : c.lambdas)
      if (!(l > 0.0 && l < 1.0)) throw std::runtime_error("config: lambda out of (0,1)");
    c.repetitions = j.value("repetitions", 10);
    c.seed = j.at("seed").get<uint64_t>();
    c.timing = j.value("timing", false);
    c.threads = j.value("threads", 1);
    c.output_dir = j.value("output_dir", std::string());
    if (c.tr1 < 1 || c.tr2 < 2 || c.te < 1)
      throw std::runtime_error("config: split sizes too small");
    if (c.repetitions < 1) throw std::runtime_error("config: repetitions must be >= 1");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
}

// ---- experiment driver -----------------------------------------------------

namespace {

std::vector<LabeledCloud> resolve_data(const ExperimentConfig& config) {
  int total = config.tr1 + config.tr2 + config.te;
  std::vector<LabeledCloud> clouds;
  switch (config.data.kind) {
    case DataSource::Kind::synthetic: {
      clouds.resize(total);
      parallel_for(total, config.threads, [&](int i) {
        int n_circles = config.data.classes[i % config.data.classes.size()];
        clouds[i] = generate_circles(n_circles, config.data.n_points, config.data.center_lo,
                                     config.data.center_hi, config.data.radius_lo,
                                     config.data.radius_hi, Rng::derive(config.seed, 1000 + i));
      });
      break;
    }
    case DataSource::Kind::cloud_files: {
      for (const auto& path : config.data.paths) {
        auto part = clouds_from_ndjson(read_file(path));
        clouds.insert(clouds.end(), part.begin(), part.end());
      }
      break;
    }
    case DataSource::Kind::series_files: {
      for (const auto& path : config.data.paths)
        for (const auto& [label, series] : series_from_csv(read_file(path)))
          clouds.push_back({time_delay_embed(series, config.data.embed_dim, config.data.delay,
                                             config.data.skip),
                            label});
      break;
    }
  }
  if (static_cast<int>(clouds.size()) < total)
    throw std::runtime_error("experiment: need " + std::to_string(total) + " clouds, have " +
                             std::to_string(clouds.size()));
  clouds.resize(total);
  return clouds;
}

std::vector<std::vector<double>> vectorize_all(const PvPipeline& pipeline,
                                               const std::vector<const PointCloud*>& clouds,
                                               int threads) {
  std::vector<std::vector<double>> out(clouds.size());
  parallel_for(static_cast<int>(clouds.size()), threads,
               [&](int i) { out[i] = pipeline.vectorize(*clouds[i]); });
  return out;
}

}  // namespace

std::string accuracy_rows_to_csv(const std::vector<AccuracyRow>& rows) {
  std::string csv = "feature,lambda,mean,std\n";
  for (const auto& r : rows)
    csv += r.feature + "," + format_double(r.lambda) + "," + format_double(r.mean) + "," +
           format_double(r.stddev) + "\n";
  return csv;
}

std::string timing_rows_to_csv(const std::vector<TimingRow>& rows) {
  std::string csv = "pipeline,seconds\n";
  for (const auto& r : rows) csv += r.pipeline + "," + format_double(r.seconds) + "\n";
  return csv;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.rn_train.validate();
  std::vector<LabeledCloud> all = resolve_data(config);
  auto slice = [&](int begin, int count) {
    std::vector<const PointCloud*> out;
    std::vector<int> labels;
    for (int i = begin; i < begin + count; ++i) {
      out.push_back(&all[i].cloud);
      labels.push_back(all[i].label);
    }
    return std::make_pair(out, labels);
  };
  auto [tr1_clouds, tr1_labels] = slice(0, config.tr1);
  auto [tr2_clouds, tr2_labels] = slice(config.tr1, config.tr2);
  auto [te_clouds, te_labels] = slice(config.tr1 + config.tr2, config.te);

  PvPipeline exact;
  exact.filt = config.filtration;
  exact.hom_dims = config.hom_dims;
  PvPipeline dtm_pipe = exact;
  dtm_pipe.filt = config.dtm;

  // Stage 1: exact diagrams on Tr1 (labels unused here) and PV parameters.
  std::vector<PersistenceDiagram> tr1_diagrams(tr1_clouds.size());
  parallel_for(static_cast<int>(tr1_clouds.size()), config.threads,
               [&](int i) { tr1_diagrams[i] = exact.diagram(*tr1_clouds[i]); });

  PvParamsFile pv = config.pv;
  if (config.estimate_pv) {
    if (pv.kind == PvKind::pi)
      pv.pi = estimate_pi_params(tr1_diagrams, pv.pi.nx, pv.pi.ny, pv.pi.weight,
                                 config.pi_quantile);
    else
      pv.pl = estimate_pl_params(tr1_diagrams, pv.pl.k_max, pv.pl.resolution);
  }
  pv.fingerprint = pv.kind == PvKind::pi ? pi_fingerprint(pv.pi, pv.normalized)
                                         : pl_fingerprint(pv.pl, pv.normalized);
  exact.pv = pv;
  dtm_pipe.pv = pv;

  // Stage 2: RipsNet on (cloud -> target PV).
  std::vector<TrainSample> rn_data(tr1_clouds.size());
  parallel_for(static_cast<int>(tr1_clouds.size()), config.threads, [&](int i) {
    rn_data[i] = {*tr1_clouds[i], vector_from_diagram(tr1_diagrams[i], pv)};
  });
  RipsNetModel rn = make_preset(config.rn_preset, all[0].cloud.dim(), pv.length(),
                                Rng::derive(config.seed, 1));
  rn.target_fingerprint = pv.fingerprint;
  TrainConfig tc = config.rn_train;
  if (tc.seed == 0) tc.seed = Rng::derive(config.seed, 2);
  ExperimentReport report;
  report.rn_history = train(rn, rn_data, tc);

  // Stage 3: feature sources for Tr2 / Te.
  auto rn_features = [&](const std::vector<const PointCloud*>& clouds) {
    std::vector<std::vector<double>> out(clouds.size());
    parallel_for(static_cast<int>(clouds.size()), config.threads,
                 [&](int i) { out[i] = forward(rn, *clouds[i]); });
    return out;
  };
  std::vector<std::vector<std::vector<double>>> tr2_features = {
      vectorize_all(exact, tr2_clouds, config.threads),
      vectorize_all(dtm_pipe, tr2_clouds, config.threads), rn_features(tr2_clouds)};
  std::vector<std::vector<std::vector<double>>> te_features = {
      vectorize_all(exact, te_clouds, config.threads),
      vectorize_all(dtm_pipe, te_clouds, config.threads), rn_features(te_clouds)};

  double risk = 0.0;
  for (size_t i = 0; i < te_clouds.size(); ++i) {
    double s = 0.0;
    for (size_t k = 0; k < te_features[0][i].size(); ++k) {
      double e = te_features[2][i][k] - te_features[0][i][k];
      s += e * e;
    }
    risk += std::sqrt(s);
  }
  report.rn_risk = risk / te_clouds.size();

  // Stage 4/5: classifiers and the noise sweep, repeated with derived seeds.
  const std::vector<std::string> names = {"exact", "dtm", "rn"};
  int n_lambda = static_cast<int>(config.lambdas.size());
  // acc[feature][lambda slot][rep]; slot 0 = clean.
  std::vector<std::vector<std::vector<double>>> acc(
      3, std::vector<std::vector<double>>(1 + n_lambda));

  for (int rep = 0; rep < config.repetitions; ++rep) {
    std::vector<ClassifierModel> classifiers(3);
    for (int f = 0; f < 3; ++f) {
      ClassifierSpec spec = config.classifier;
      spec.seed = Rng::derive(config.seed, 3000 + rep * 10 + f);
      classifiers[f] = train_classifier(tr2_features[f], tr2_labels, spec);
      acc[f][0].push_back(classifier_accuracy(classifiers[f], te_features[f], te_labels));
    }
    for (int li = 0; li < n_lambda; ++li) {
      std::vector<PointCloud> noisy(te_clouds.size());
      parallel_for(static_cast<int>(te_clouds.size()), config.threads, [&](int i) {
        NoiseSpec spec;
        spec.lambda = config.lambdas[li];
        spec.law = config.noise_law;
        spec.seed = Rng::derive(config.seed,
                                4000 + (static_cast<uint64_t>(rep) * n_lambda + li) * 100000 + i);
        noisy[i] = corrupt(*te_clouds[i], spec);
      });
      std::vector<const PointCloud*> noisy_ptrs;
      for (const auto& c : noisy) noisy_ptrs.push_back(&c);
      std::vector<std::vector<std::vector<double>>> noisy_features = {
          vectorize_all(exact, noisy_ptrs, config.threads),
          vectorize_all(dtm_pipe, noisy_ptrs, config.threads), rn_features(noisy_ptrs)};
      for (int f = 0; f < 3; ++f)
        acc[f][1 + li].push_back(
            classifier_accuracy(classifiers[f], noisy_features[f], te_labels));
    }
  }

  for (int f = 0; f < 3; ++f)
    for (int li = 0; li <= n_lambda; ++li)
      report.accuracy.push_back({names[f], li == 0 ? 0.0 : config.lambdas[li - 1],
                                 mean_of(acc[f][li]), sample_std(acc[f][li])});

  if (config.timing)
    report.timing = timing_bench(
        [&] {
          std::vector<PointCloud> copy;
          for (const auto* c : te_clouds) copy.push_back(*c);
          return copy;
        }(),
        &exact, &dtm_pipe, &rn);

  // Report files.
  nlohmann::json jr;
  jr["rn"] = {{"risk", report.rn_risk},
              {"best_epoch", report.rn_history.best_epoch},
              {"epochs", report.rn_history.train_loss.size()},
              {"final_train_loss",
               report.rn_history.train_loss.empty() ? 0.0 : report.rn_history.train_loss.back()},
              {"final_val_loss",
               report.rn_history.val_loss.empty() ? 0.0 : report.rn_history.val_loss.back()}};
  jr["pv"] = nlohmann::json::parse(pv_params_to_json(pv));
  nlohmann::json ja = nlohmann::json::array();
  for (const auto& r : report.accuracy)
    ja.push_back({{"feature", r.feature}, {"lambda", r.lambda}, {"mean", r.mean},
                  {"std", r.stddev}});
  jr["accuracy"] = std::move(ja);
  report.report_json = jr.dump(2) + "\n";
  report.accuracy_csv = accuracy_rows_to_csv(report.accuracy);
  report.timing_csv = timing_rows_to_csv(report.timing);

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    std::filesystem::path dir(config.output_dir);
    write_file((dir / "report.json").string(), report.report_json);
    write_file((dir / "accuracy.csv").string(), report.accuracy_csv);
    if (config.timing) write_file((dir / "timing.csv").string(), report.timing_csv);
    save_model(rn, (dir / "model.json").string());
    write_file((dir / "pv_params.json").string(), pv_params_to_json(pv));
  }
  return report;
}

std::vector<TimingRow> timing_bench(const std::vector<PointCloud>& clouds,
                                    const PvPipeline* exact, const PvPipeline* dtm,
                                    const RipsNetModel* rn, int reps) {
  std::vector<TimingRow> rows;
  if (clouds.empty()) return rows;
  if (reps < 1) throw std::invalid_argument("timing_bench: reps must be >= 1");
  auto bench = [&](const std::string& name, auto&& run) {
    std::vector<double> times(reps);
    for (int r = 0; r < reps; ++r) {
      auto start = std::chrono::steady_clock::now();
      run();
      times[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    std::sort(times.begin(), times.end());
    rows.push_back({name, times[reps / 2]});
  };
  volatile double sink = 0.0;
  if (exact)
    bench("exact", [&] {
      for (const auto& c : clouds) sink = sink + exact->vectorize(c)[0];
    });
  if (dtm)
    bench("dtm", [&] {
      for (const auto& c : clouds) sink = sink + dtm->vectorize(c)[0];
    });
  if (rn)
    bench("rn", [&] {
      for (const auto& c : clouds) sink = sink + forward(*rn, c)[0];
    });
  return rows;
}

// ---- stability -------------------------------------------------------------

StabilityReport stability_report(const RipsNetModel& model, const PvPipeline& pipeline,
                                 const Law& p_law, const Law& q_law, int n,
                                 const std::vector<double>& lambdas, int trials,
                                 uint64_t seed, int threads) {
  if (trials < 2) throw std::invalid_argument("stability_report: trials must be >= 2");
  LipschitzBound lb = lipschitz_upper_bound(model);  // also enforces mean aggregator
  StabilityReport report;
  report.c1 = lb.c1;
  report.c2 = lb.c2;
  report.cpq = expected_pair_distance(p_law, q_law, Rng::derive(seed, 1));

  auto sample_cloud = [&](uint64_t s) {
    Rng rng(s);
    PointCloud cloud;
    for (int i = 0; i < n; ++i) cloud.push_back(p_law.sample(rng));
    return cloud;
  };
  auto l2_gap = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };

  // R_hat on clean clouds.
  std::vector<double> clean_gaps(trials);
  parallel_for(trials, threads, [&](int t) {
    PointCloud x = sample_cloud(Rng::derive(seed, 10000 + t));
    clean_gaps[t] = l2_gap(forward(model, x), pipeline.vectorize(x));
  });
  report.r_hat = mean_of(clean_gaps);

  for (size_t li = 0; li < lambdas.size(); ++li) {
    double lambda = lambdas[li];
    std::vector<double> rn_gaps(trials), pv_gaps(trials);
    parallel_for(trials, threads, [&](int t) {
      uint64_t base = Rng::derive(seed, 20000 + li * 100000 + t);
      PointCloud x = sample_cloud(Rng::derive(base, 0));
      NoiseSpec spec{lambda, q_law, Rng::derive(base, 1)};
      PointCloud noisy = corrupt(x, spec);
      std::vector<double> pv_clean = pipeline.vectorize(x);
      rn_gaps[t] = l2_gap(forward(model, noisy), pv_clean);
      pv_gaps[t] = l2_gap(pipeline.vectorize(noisy), pv_clean);
    });
    StabilityRow row;
    row.lambda = lambda;
    row.rn_gap_mean = mean_of(rn_gaps);
    row.rn_gap_stderr = sample_std(rn_gaps) / std::sqrt(static_cast<double>(trials));
    row.pv_gap_mean = mean_of(pv_gaps);
    row.pv_gap_stderr = sample_std(pv_gaps) / std::sqrt(static_cast<double>(trials));
    row.bound = lambda * lb.product * report.cpq + report.r_hat;
    report.rows.push_back(row);
  }

  // Instability pair: 60 regular points on the unit circle, then + origin.
  {
    PointCloud a;
    for (int k = 0; k < 60; ++k)
      a.push_back({std::cos(2.0 * M_PI * k / 60.0), std::sin(2.0 * M_PI * k / 60.0)});
    PointCloud b = a;
    b.push_back({0.0, 0.0});
    PersistenceDiagram da = pipeline.diagram(a);
    PersistenceDiagram db = pipeline.diagram(b);
    auto dominant_death = [](const PersistenceDiagram& d) {
      double best = 0.0, death = 0.0;
      for (const auto& p : d.points)
        if (p.dim == 1 && p.death - p.birth > best) {
          best = p.death - p.birth;
          death = p.death;
        }
      return death;
    };
    double death_a = dominant_death(da);
    report.instability_death_ratio = death_a > 0.0 ? dominant_death(db) / death_a : 0.0;

    PIParams pi = estimate_pi_params({da, db}, 20, 20, PiWeight::ten_tanh_persistence);
    PvParamsFile pvp;
    pvp.kind = PvKind::pi;
    pvp.pi = pi;
    pvp.normalized = true;
    auto l1 = [](const std::vector<double>& x, const std::vector<double>& y) {
      double s = 0.0;
      for (size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
      return s;
    };
    report.instability_pv_gap = l1(vector_from_diagram(da, pvp), vector_from_diagram(db, pvp));
    report.instability_rn_gap = l1(forward(model, a), forward(model, b));
  }

  report.csv = "lambda,rn_gap_mean,rn_gap_stderr,bound,pv_gap_mean,pv_gap_stderr\n";
  for (const auto& r : report.rows)
    report.csv += format_double(r.lambda) + "," + format_double(r.rn_gap_mean) + "," +
                  format_double(r.rn_gap_stderr) + "," + format_double(r.bound) + "," +
                  format_double(r.pv_gap_mean) + "," + format_double(r.pv_gap_stderr) + "\n";
  return report;
}

}  // namespace topoforge
