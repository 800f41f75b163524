#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topoforge/experiment.hpp"
#include "topoforge/io.hpp"
#include "topoforge/parallel.hpp"
#include "topoforge/transport.hpp"

namespace tf = topoforge;

namespace {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("TOPOFORGE_LOG");
    if (!env) return 0;
    std::string s(env);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

// ph output path: single cloud goes to `out` verbatim, cloud i of many gets
// an `_i` suffix before the extension.
std::string indexed_path(const std::string& out, size_t index, size_t total) {
  if (total <= 1) return out;
  std::filesystem::path p(out);
  std::filesystem::path stem = p.stem();
  stem += "_" + std::to_string(index);
  stem += p.extension();
  return (p.parent_path() / stem).string();
}

tf::Law law_from_flags(const std::string& kind, const std::vector<double>& center,
                       double scale, const std::vector<double>& lo,
                       const std::vector<double>& hi) {
  tf::Law law;
  if (kind == "point_mass") {
    law.kind = tf::Law::Kind::point_mass;
    law.center = center;
  } else if (kind == "gaussian") {
    law.kind = tf::Law::Kind::gaussian;
    law.center = center;
    law.scale = scale;
  } else if (kind == "uniform_circle") {
    law.kind = tf::Law::Kind::uniform_circle;
    law.center = center;
    law.scale = scale;
  } else if (kind == "uniform_box") {
    law.kind = tf::Law::Kind::uniform_box;
    law.lo = lo;
    law.hi = hi;
  } else {
    throw std::invalid_argument("unknown law kind " + kind);
  }
  return law;
}

std::vector<int> labels_from_file(const std::string& path) {
  std::vector<int> labels;
  for (const auto& row : tf::vectors_from_csv(tf::read_file(path))) {
    if (row.size() != 1 || row[0] != static_cast<int>(row[0]) || row[0] < 0)
      throw std::runtime_error("labels file must hold one nonnegative integer per line");
    labels.push_back(static_cast<int>(row[0]));
  }
  return labels;
}

tf::PvParamsFile sidecar_for(const std::string& kind, bool normalized, int nx, int ny,
                             double sigma, std::vector<double> xr, std::vector<double> yr,
                             const std::string& weight, int k_max, int resolution,
                             std::vector<double> tr, bool estimate,
                             const std::vector<tf::PersistenceDiagram>& diagrams,
                             double quantile) {
  tf::PvParamsFile pv;
  pv.normalized = normalized;
  if (kind == "pi") {
    pv.kind = tf::PvKind::pi;
    if (weight == "ten_tanh_persistence")
      pv.pi.weight = tf::PiWeight::ten_tanh_persistence;
    else if (weight == "persistence_squared")
      pv.pi.weight = tf::PiWeight::persistence_squared;
    else if (weight == "constant_one")
      pv.pi.weight = tf::PiWeight::constant_one;
    else
      throw std::invalid_argument("unknown weight " + weight);
    if (estimate) {
      pv.pi = tf::estimate_pi_params(diagrams, nx, ny, pv.pi.weight, quantile);
    } else {
      pv.pi.nx = nx;
      pv.pi.ny = ny;
      pv.pi.sigma = sigma;
      pv.pi.x0 = xr.at(0);
      pv.pi.x1 = xr.at(1);
      pv.pi.y0 = yr.at(0);
      pv.pi.y1 = yr.at(1);
      pv.pi.validate();
    }
    pv.fingerprint = tf::pi_fingerprint(pv.pi, normalized);
  } else if (kind == "pl") {
    pv.kind = tf::PvKind::pl;
    if (estimate) {
      pv.pl = tf::estimate_pl_params(diagrams, k_max, resolution);
    } else {
      pv.pl.k_max = k_max;
      pv.pl.resolution = resolution;
      pv.pl.t0 = tr.at(0);
      pv.pl.t1 = tr.at(1);
      pv.pl.validate();
    }
    pv.fingerprint = tf::pl_fingerprint(pv.pl, normalized);
  } else {
    throw std::invalid_argument("unknown vectorization kind " + kind);
  }
  return pv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topoforge: persistent homology, persistence vectorizations, and the "
               "RipsNet estimator"};
  app.require_subcommand(1);
  int threads = tf::default_thread_count();
  app.add_option("--threads", threads, "worker threads (1 = fully serial)")
      ->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "sample labeled circle clouds (NDJSON)");
  std::vector<int> gen_classes = {1, 2};
  int gen_count = 10, gen_points = 100;
  std::vector<double> gen_center_lo = {-2.0, -2.0}, gen_center_hi = {2.0, 2.0};
  double gen_radius_lo = 0.5, gen_radius_hi = 1.5;
  uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--classes", gen_classes, "circle counts per class (1..3)");
  gen->add_option("--count", gen_count, "total clouds, classes round-robin")->required();
  gen->add_option("--n-points", gen_points, "points per cloud")->required();
  gen->add_option("--center-lo", gen_center_lo, "center box lower corner");
  gen->add_option("--center-hi", gen_center_hi, "center box upper corner");
  gen->add_option("--radius-lo", gen_radius_lo, "min circle radius");
  gen->add_option("--radius-hi", gen_radius_hi, "max circle radius");
  gen->add_option("--seed", gen_seed, "rng seed")->required();
  gen->add_option("--out", gen_out, "output NDJSON path")->required();

  // embed
  auto* embed = app.add_subcommand("embed", "time-delay embed series CSV into clouds");
  std::string embed_in, embed_out;
  int embed_dim = 3, embed_delay = 1, embed_skip = 1;
  embed->add_option("--input", embed_in, "series CSV (label, values...)")->required();
  embed->add_option("--dim", embed_dim, "embedding dimension");
  embed->add_option("--delay", embed_delay, "delay");
  embed->add_option("--skip", embed_skip, "skip");
  embed->add_option("--out", embed_out, "output NDJSON path")->required();

  // ph
  auto* ph = app.add_subcommand("ph", "persistence diagrams of clouds");
  std::string ph_in, ph_out, ph_filtration = "rips", ph_convention = "radius";
  double ph_m = 0.05, ph_p = 2.0, ph_max_radius = 0.0;
  int ph_max_dim = 2;
  ph->add_option("--input", ph_in, "clouds NDJSON")->required();
  ph->add_option("--filtration", ph_filtration, "rips|dtm")
      ->check(CLI::IsMember({"rips", "dtm"}));
  ph->add_option("--m", ph_m, "dtm mass fraction");
  ph->add_option("--p", ph_p, "dtm exponent (>= 1)");
  ph->add_option("--max-dim", ph_max_dim, "max simplex dimension (<= 2)");
  ph->add_option("--max-radius", ph_max_radius, "truncation radius (0 = half box diameter)");
  ph->add_option("--convention", ph_convention, "radius|diameter filtration values")
      ->check(CLI::IsMember({"radius", "diameter"}));
  ph->add_option("--out", ph_out, "output CSV (indexed when multiple clouds)")->required();

  // vectorize
  auto* vec = app.add_subcommand("vectorize", "diagram CSVs to a vector CSV + sidecar");
  std::vector<std::string> vec_in;
  std::string vec_kind = "pi", vec_weight = "ten_tanh_persistence", vec_out;
  bool vec_estimate = false, vec_raw = false;
  int vec_nx = 20, vec_ny = 20, vec_kmax = 5, vec_res = 50;
  double vec_sigma = 0.1, vec_quantile = 0.2, vec_cap = 0.0;
  bool vec_has_cap = false;
  std::vector<int> vec_dims = {1};
  std::vector<double> vec_xr = {0.0, 1.0}, vec_yr = {0.0, 1.0}, vec_tr = {0.0, 1.0};
  vec->add_option("--input", vec_in, "diagram CSV paths")->required();
  vec->add_option("--dims", vec_dims, "homology dimensions to keep");
  vec->add_option("--cap", vec_cap, "replace infinite deaths by this value (default: drop)");
  vec->add_option("--kind", vec_kind, "pi|pl")->check(CLI::IsMember({"pi", "pl"}));
  vec->add_flag("--estimate", vec_estimate, "estimate range/bandwidth from the inputs");
  vec->add_flag("--raw", vec_raw, "skip per-vector max normalization");
  vec->add_option("--nx", vec_nx, "PI birth-axis pixels");
  vec->add_option("--ny", vec_ny, "PI persistence-axis pixels");
  vec->add_option("--sigma", vec_sigma, "PI bandwidth");
  vec->add_option("--x-range", vec_xr, "PI birth range")->expected(2);
  vec->add_option("--y-range", vec_yr, "PI persistence range")->expected(2);
  vec->add_option("--weight", vec_weight,
                  "ten_tanh_persistence|persistence_squared|constant_one");
  vec->add_option("--quantile", vec_quantile, "bandwidth quantile for --estimate");
  vec->add_option("--k-max", vec_kmax, "PL depth");
  vec->add_option("--resolution", vec_res, "PL grid size");
  vec->add_option("--t-range", vec_tr, "PL range")->expected(2);
  vec->add_option("--out", vec_out, "output CSV (sidecar at <out>.params.json)")->required();

  // train
  auto* trn = app.add_subcommand("train", "train a RipsNet model on clouds + vectors");
  std::string trn_clouds, trn_vectors, trn_params, trn_out, trn_history;
  std::string trn_preset = "synth-mean", trn_opt = "adamax";
  double trn_lr = 5e-4, trn_min_delta = 1e-5, trn_val_frac = 0.1;
  int trn_batch = 32, trn_epochs = 1000, trn_patience = 200;
  uint64_t trn_seed = 0;
  trn->add_option("--clouds", trn_clouds, "training clouds NDJSON")->required();
  trn->add_option("--vectors", trn_vectors, "target vectors CSV")->required();
  trn->add_option("--params", trn_params, "vector params sidecar JSON")->required();
  trn->add_option("--preset", trn_preset, "synth|synth-mean|shape");
  trn->add_option("--optimizer", trn_opt, "adam|adamax")
      ->check(CLI::IsMember({"adam", "adamax"}));
  trn->add_option("--learning-rate", trn_lr, "step size");
  trn->add_option("--batch-size", trn_batch, "minibatch size");
  trn->add_option("--max-epochs", trn_epochs, "epoch cap");
  trn->add_option("--patience", trn_patience, "early-stop patience (epochs)");
  trn->add_option("--min-delta", trn_min_delta, "early-stop improvement threshold");
  trn->add_option("--validation-fraction", trn_val_frac, "validation split");
  trn->add_option("--seed", trn_seed, "rng seed")->required();
  trn->add_option("--out", trn_out, "output model JSON")->required();
  trn->add_option("--history", trn_history, "per-epoch loss CSV");

  // infer
  auto* inf = app.add_subcommand("infer", "apply a RipsNet model to clouds");
  std::string inf_model, inf_clouds, inf_params, inf_out;
  inf->add_option("--model", inf_model, "model JSON")->required();
  inf->add_option("--clouds", inf_clouds, "clouds NDJSON")->required();
  inf->add_option("--params", inf_params, "vector params sidecar (fingerprint check)")
      ->required();
  inf->add_option("--out", inf_out, "output vectors CSV")->required();

  // classify
  auto* cls = app.add_subcommand("classify", "train + evaluate a vector classifier");
  std::string cls_train_vec, cls_train_lab, cls_test_vec, cls_test_lab, cls_kind = "mlp";
  std::string cls_out;
  int cls_epochs = 200, cls_batch = 32, cls_k = 5;
  double cls_lr = 1e-2;
  uint64_t cls_seed = 0;
  cls->add_option("--train-vectors", cls_train_vec)->required();
  cls->add_option("--train-labels", cls_train_lab)->required();
  cls->add_option("--test-vectors", cls_test_vec)->required();
  cls->add_option("--test-labels", cls_test_lab)->required();
  cls->add_option("--kind", cls_kind, "mlp|knn")->check(CLI::IsMember({"mlp", "knn"}));
  cls->add_option("--epochs", cls_epochs, "mlp epochs");
  cls->add_option("--batch-size", cls_batch, "mlp batch size");
  cls->add_option("--learning-rate", cls_lr, "mlp step size");
  cls->add_option("--k", cls_k, "knn neighbor count");
  cls->add_option("--seed", cls_seed, "rng seed")->required();
  cls->add_option("--out", cls_out, "metrics JSON (stdout when omitted)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "full pipeline from a JSON config");
  std::string exp_config, exp_outdir;
  exp->add_option("--config", exp_config, "experiment config JSON")->required();
  exp->add_option("--output-dir", exp_outdir, "override config output_dir");

  // stability
  auto* stab = app.add_subcommand("stability", "Prop. 2 stability table for a model");
  std::string stab_model, stab_params, stab_outdir, stab_q_kind = "point_mass";
  std::vector<double> stab_lambdas = {1.0 / 30.0, 1.0 / 6.0, 1.0 / 3.0};
  std::vector<double> stab_center = {0.0, 0.0}, stab_q_center = {0.0, 0.0};
  std::vector<double> stab_q_lo = {0.0, 0.0}, stab_q_hi = {1.0, 1.0};
  double stab_radius = 1.0, stab_q_scale = 1.0, stab_max_radius = 0.0;
  int stab_n = 60, stab_trials = 100;
  uint64_t stab_seed = 0;
  stab->add_option("--model", stab_model, "mean-aggregator model JSON")->required();
  stab->add_option("--params", stab_params, "vector params sidecar JSON")->required();
  stab->add_option("--n", stab_n, "points per cloud");
  stab->add_option("--circle-center", stab_center, "P: circle center")->expected(2);
  stab->add_option("--circle-radius", stab_radius, "P: circle radius");
  stab->add_option("--q-kind", stab_q_kind, "point_mass|gaussian|uniform_circle|uniform_box");
  stab->add_option("--q-center", stab_q_center, "Q center / mean")->expected(2);
  stab->add_option("--q-scale", stab_q_scale, "Q stddev / radius");
  stab->add_option("--q-lo", stab_q_lo, "Q box lower corner")->expected(2);
  stab->add_option("--q-hi", stab_q_hi, "Q box upper corner")->expected(2);
  stab->add_option("--lambdas", stab_lambdas, "noise fractions");
  stab->add_option("--trials", stab_trials, "Monte-Carlo trials per row");
  stab->add_option("--max-radius", stab_max_radius, "filtration truncation (0 = default)");
  stab->add_option("--seed", stab_seed, "rng seed")->required();
  stab->add_option("--output-dir", stab_outdir, "directory for stability.csv/json")->required();

  // bench
  auto* ben = app.add_subcommand("bench", "timing of exact/dtm/RN vectorization");
  std::string ben_clouds, ben_model, ben_params, ben_out;
  double ben_max_radius = 0.0;
  int ben_reps = 5;
  bool ben_with_dtm = false;
  ben->add_option("--clouds", ben_clouds, "clouds NDJSON")->required();
  ben->add_option("--model", ben_model, "RipsNet model JSON (optional)");
  ben->add_option("--params", ben_params, "vector params sidecar JSON")->required();
  ben->add_option("--max-radius", ben_max_radius, "filtration truncation (0 = default)");
  ben->add_option("--reps", ben_reps, "repetitions per pipeline (median reported)");
  ben->add_flag("--with-dtm", ben_with_dtm, "also time the dtm pipeline");
  ben->add_option("--out", ben_out, "output timing CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    if (*gen) {
      std::vector<tf::LabeledCloud> clouds(gen_count);
      tf::parallel_for(gen_count, threads, [&](int i) {
        clouds[i] = tf::generate_circles(gen_classes[i % gen_classes.size()], gen_points,
                                         gen_center_lo, gen_center_hi, gen_radius_lo,
                                         gen_radius_hi, tf::Rng::derive(gen_seed, i));
      });
      tf::write_file(gen_out, tf::clouds_to_ndjson(clouds));
      log_info("wrote " + std::to_string(clouds.size()) + " clouds to " + gen_out);
    } else if (*embed) {
      std::vector<tf::LabeledCloud> clouds;
      for (const auto& [label, series] : tf::series_from_csv(tf::read_file(embed_in)))
        clouds.push_back(
            {tf::time_delay_embed(series, embed_dim, embed_delay, embed_skip), label});
      tf::write_file(embed_out, tf::clouds_to_ndjson(clouds));
    } else if (*ph) {
      auto clouds = tf::clouds_from_ndjson(tf::read_file(ph_in));
      std::vector<std::string> csvs(clouds.size());
      tf::parallel_for(static_cast<int>(clouds.size()), threads, [&](int i) {
        const tf::PointCloud& cloud = clouds[i].cloud;
        double radius = ph_max_radius > 0.0 ? ph_max_radius : tf::default_max_radius(cloud);
        tf::FilteredComplex complex =
            ph_filtration == "rips"
                ? tf::rips_filtration(cloud, ph_max_dim, radius)
                : tf::dtm_filtration(cloud, ph_m, ph_p, ph_max_dim, radius);
        tf::PersistenceDiagram d = tf::compute_persistence(complex, ph_max_dim - 1);
        if (ph_convention == "diameter")
          for (auto& p : d.points) {
            p.birth *= 2.0;
            p.death *= 2.0;
          }
        csvs[i] = tf::diagram_to_csv(d);
      });
      for (size_t i = 0; i < csvs.size(); ++i)
        tf::write_file(indexed_path(ph_out, i, csvs.size()), csvs[i]);
    } else if (*vec) {
      vec_has_cap = vec->count("--cap") > 0;
      std::vector<tf::PersistenceDiagram> diagrams;
      for (const auto& path : vec_in) {
        tf::PersistenceDiagram d = tf::diagram_from_csv(tf::read_file(path));
        tf::PersistenceDiagram kept;
        for (const auto& p : d.points)
          if (std::find(vec_dims.begin(), vec_dims.end(), p.dim) != vec_dims.end())
            kept.points.push_back(p);
        diagrams.push_back(tf::finitize(kept, vec_cap, !vec_has_cap));
      }
      tf::PvParamsFile pv =
          sidecar_for(vec_kind, !vec_raw, vec_nx, vec_ny, vec_sigma, vec_xr, vec_yr,
                      vec_weight, vec_kmax, vec_res, vec_tr, vec_estimate, diagrams,
                      vec_quantile);
      std::vector<std::vector<double>> rows;
      for (const auto& d : diagrams) {
        tf::PersistenceVector v = pv.kind == tf::PvKind::pi
                                      ? tf::persistence_image(d, pv.pi)
                                      : tf::persistence_landscape(d, pv.pl);
        if (pv.normalized) v = tf::normalize(v);
        rows.push_back(v.values);
      }
      tf::write_file(vec_out, tf::vectors_to_csv(rows));
      tf::write_file(vec_out + ".params.json", tf::pv_params_to_json(pv));
    } else if (*trn) {
      auto clouds = tf::clouds_from_ndjson(tf::read_file(trn_clouds));
      auto targets = tf::vectors_from_csv(tf::read_file(trn_vectors));
      tf::PvParamsFile pv = tf::pv_params_from_json(tf::read_file(trn_params));
      if (clouds.size() != targets.size())
        throw std::runtime_error("clouds and vectors differ in count");
      if (targets.empty() || static_cast<int>(targets[0].size()) != pv.length())
        throw std::runtime_error("vector length does not match the params sidecar");
      std::vector<tf::TrainSample> data;
      for (size_t i = 0; i < clouds.size(); ++i)
        data.push_back({clouds[i].cloud, targets[i]});
      tf::RipsNetModel model = tf::make_preset(trn_preset, clouds[0].cloud.dim(),
                                               pv.length(), tf::Rng::derive(trn_seed, 1));
      model.target_fingerprint = pv.fingerprint;
      tf::TrainConfig tc;
      tc.optimizer = trn_opt == "adam" ? tf::TrainConfig::Optimizer::adam
                                       : tf::TrainConfig::Optimizer::adamax;
      tc.learning_rate = trn_lr;
      tc.batch_size = trn_batch;
      tc.max_epochs = trn_epochs;
      tc.patience = trn_patience;
      tc.min_delta = trn_min_delta;
      tc.validation_fraction = trn_val_frac;
      tc.seed = tf::Rng::derive(trn_seed, 2);
      tf::TrainHistory history = tf::train(model, data, tc);
      tf::save_model(model, trn_out);
      if (!trn_history.empty()) {
        std::string csv = "epoch,train_loss,val_loss\n";
        for (size_t e = 0; e < history.train_loss.size(); ++e)
          csv += std::to_string(e) + "," + tf::format_double(history.train_loss[e]) + "," +
                 tf::format_double(history.val_loss[e]) + "\n";
        tf::write_file(trn_history, csv);
      }
      log_info("best epoch " + std::to_string(history.best_epoch));
    } else if (*inf) {
      tf::RipsNetModel model = tf::load_model(inf_model);
      tf::PvParamsFile pv = tf::pv_params_from_json(tf::read_file(inf_params));
      if (model.target_fingerprint != pv.fingerprint)
        throw std::runtime_error("model fingerprint " + model.target_fingerprint +
                                 " does not match params fingerprint " + pv.fingerprint);
      auto clouds = tf::clouds_from_ndjson(tf::read_file(inf_clouds));
      std::vector<std::vector<double>> rows(clouds.size());
      tf::parallel_for(static_cast<int>(clouds.size()), threads,
                       [&](int i) { rows[i] = tf::forward(model, clouds[i].cloud); });
      tf::write_file(inf_out, tf::vectors_to_csv(rows));
    } else if (*cls) {
      auto train_vec = tf::vectors_from_csv(tf::read_file(cls_train_vec));
      auto test_vec = tf::vectors_from_csv(tf::read_file(cls_test_vec));
      auto train_lab = labels_from_file(cls_train_lab);
      auto test_lab = labels_from_file(cls_test_lab);
      tf::ClassifierSpec spec;
      spec.kind = cls_kind == "mlp" ? tf::ClassifierSpec::Kind::mlp
                                    : tf::ClassifierSpec::Kind::knn;
      spec.epochs = cls_epochs;
      spec.batch_size = cls_batch;
      spec.learning_rate = cls_lr;
      spec.knn_k = cls_k;
      spec.seed = cls_seed;
      tf::ClassifierModel model = tf::train_classifier(train_vec, train_lab, spec);
      nlohmann::json out = {
          {"train_accuracy", tf::classifier_accuracy(model, train_vec, train_lab)},
          {"test_accuracy", tf::classifier_accuracy(model, test_vec, test_lab)},
          {"classes", model.n_classes}};
      std::string text = out.dump(2) + "\n";
      if (cls_out.empty())
        std::cout << text;
      else
        tf::write_file(cls_out, text);
    } else if (*exp) {
      tf::ExperimentConfig config = tf::experiment_config_from_json(tf::read_file(exp_config));
      if (!exp_outdir.empty()) config.output_dir = exp_outdir;
      if (app.count("--threads")) config.threads = threads;
      tf::ExperimentReport report = tf::run_experiment(config);
      log_info("rn risk " + tf::format_double(report.rn_risk));
    } else if (*stab) {
      tf::RipsNetModel model = tf::load_model(stab_model);
      tf::PvPipeline pipeline;
      pipeline.pv = tf::pv_params_from_json(tf::read_file(stab_params));
      pipeline.filt.max_radius = stab_max_radius;
      if (model.target_fingerprint != pipeline.pv.fingerprint)
        throw std::runtime_error("model/params fingerprint mismatch");
      tf::Law p_law;
      p_law.kind = tf::Law::Kind::uniform_circle;
      p_law.center = stab_center;
      p_law.scale = stab_radius;
      tf::Law q_law = law_from_flags(stab_q_kind, stab_q_center, stab_q_scale, stab_q_lo,
                                     stab_q_hi);
      tf::StabilityReport report = tf::stability_report(
          model, pipeline, p_law, q_law, stab_n, stab_lambdas, stab_trials, stab_seed, threads);
      std::filesystem::create_directories(stab_outdir);
      std::filesystem::path dir(stab_outdir);
      tf::write_file((dir / "stability.csv").string(), report.csv);
      nlohmann::json j = {{"r_hat", report.r_hat},
                          {"c1", report.c1},
                          {"c2", report.c2},
                          {"cpq", report.cpq},
                          {"instability_pv_gap", report.instability_pv_gap},
                          {"instability_rn_gap", report.instability_rn_gap},
                          {"instability_death_ratio", report.instability_death_ratio}};
      tf::write_file((dir / "stability.json").string(), j.dump(2) + "\n");
    } else if (*ben) {
      auto labeled = tf::clouds_from_ndjson(tf::read_file(ben_clouds));
      std::vector<tf::PointCloud> clouds;
      for (auto& lc : labeled) clouds.push_back(std::move(lc.cloud));
      tf::PvPipeline exact;
      exact.pv = tf::pv_params_from_json(tf::read_file(ben_params));
      exact.filt.max_radius = ben_max_radius;
      tf::PvPipeline dtm_pipe = exact;
      dtm_pipe.filt.kind = tf::FiltrationSpec::Kind::dtm;
      tf::RipsNetModel model;
      if (!ben_model.empty()) model = tf::load_model(ben_model);
      auto rows = tf::timing_bench(clouds, &exact, ben_with_dtm ? &dtm_pipe : nullptr,
                                   ben_model.empty() ? nullptr : &model, ben_reps);
      tf::write_file(ben_out, tf::timing_rows_to_csv(rows));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
