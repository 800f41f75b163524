#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoforge/deepsets.hpp"
#include "topoforge/io.hpp"
#include "topoforge/persistence.hpp"
#include "topoforge/vectorization.hpp"

namespace topoforge {

// ---- classifiers -----------------------------------------------------------

struct ClassifierSpec {
  enum class Kind { mlp, knn };
  Kind kind = Kind::mlp;
  std::vector<int> hidden = {100, 50};
  int epochs = 200;
  double learning_rate = 1e-2;
  int batch_size = 32;
  int knn_k = 5;
  uint64_t seed = 0;
};

struct ClassifierModel {
  ClassifierSpec spec;
  int n_classes = 0;
  std::vector<DenseLayer> layers;                // mlp path
  std::vector<std::vector<double>> train_features;  // knn path
  std::vector<int> train_labels;

  int predict(const std::vector<double>& x) const;
};

ClassifierModel train_classifier(const std::vector<std::vector<double>>& features,
                                 const std::vector<int>& labels, const ClassifierSpec& spec);

double classifier_accuracy(const ClassifierModel& model,
                           const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels);

// ---- vectorization pipeline ------------------------------------------------

struct FiltrationSpec {
  enum class Kind { rips, dtm };
  Kind kind = Kind::rips;
  double m = 0.05;          // dtm mass fraction
  double p = 2.0;           // dtm interpolation exponent
  int max_dim = 2;
  double max_radius = 0.0;  // <= 0: per-cloud default (half box diameter)
};

// Cloud -> diagram -> finitized sub-diagram -> (normalized) vector.
struct PvPipeline {
  FiltrationSpec filt;
  std::vector<int> hom_dims = {1};  // diagram dimensions fed to the PV
  PvParamsFile pv;
  bool drop_infinite = false;  // otherwise cap at the filtration max radius

  PersistenceDiagram diagram(const PointCloud& cloud) const;
  std::vector<double> vectorize(const PointCloud& cloud) const;
};

// ---- experiment driver -----------------------------------------------------

struct DataSource {
  enum class Kind { synthetic, cloud_files, series_files };
  Kind kind = Kind::synthetic;
  // synthetic circles
  std::vector<int> classes = {1, 2};  // circle counts; label = count - 1
  int n_points = 100;
  std::vector<double> center_lo = {-2.0, -2.0}, center_hi = {2.0, 2.0};
  double radius_lo = 0.5, radius_hi = 1.5;
  // file sources
  std::vector<std::string> paths;
  int embed_dim = 3, delay = 1, skip = 1;
};

struct ExperimentConfig {
  DataSource data;
  int tr1 = 100, tr2 = 100, te = 50;  // split sizes (disjoint)
  // pv.fingerprint empty + estimate=true -> params from the Tr1 diagrams
  PvParamsFile pv;
  bool estimate_pv = true;
  double pi_quantile = 0.2;
  FiltrationSpec filtration;       // the "exact" pipeline
  FiltrationSpec dtm;              // the robust comparison pipeline
  std::vector<int> hom_dims = {1};
  std::string rn_preset = "synth-mean";
  TrainConfig rn_train;
  ClassifierSpec classifier;
  std::vector<double> lambdas;     // noise sweep; may be empty
  Law noise_law;
  int repetitions = 10;
  uint64_t seed = 0;
  bool timing = false;             // adds wall-clock rows (breaks byte determinism)
  int threads = 1;
  std::string output_dir;
};

ExperimentConfig experiment_config_from_json(const std::string& text);

struct AccuracyRow {
  std::string feature;  // "exact", "dtm", "rn"
  double lambda;        // 0 = clean
  double mean;
  double stddev;
};

struct TimingRow {
  std::string pipeline;
  double seconds;  // median wall-clock of full-set vectorization
};

struct ExperimentReport {
  std::vector<AccuracyRow> accuracy;
  std::vector<TimingRow> timing;
  TrainHistory rn_history;
  double rn_risk = 0.0;  // empirical mean of ||RN(X) - PV(X)|| on clean test clouds
  std::string report_json;
  std::string accuracy_csv;
  std::string timing_csv;
};

// The full pipeline: exact PVs on Tr1, RN trained on them, three feature
// sources for Tr2/Te/noisy-Te, one classifier per source, noise sweep,
// repetitions with derived seeds. Writes report.json / accuracy.csv (and
// timing.csv when enabled) into output_dir if set.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Median-of-`reps` wall-clock of whole-set vectorization per pipeline,
// single-threaded. Pass nullptr to skip a pipeline.
std::vector<TimingRow> timing_bench(const std::vector<PointCloud>& clouds,
                                    const PvPipeline* exact, const PvPipeline* dtm,
                                    const RipsNetModel* rn, int reps = 5);

// ---- stability -------------------------------------------------------------

struct StabilityRow {
  double lambda;
  double rn_gap_mean;    // E ||RN(F(X,Y)) - PV(X)||
  double rn_gap_stderr;
  double bound;          // lambda * C1C2 * C(P,Q) + R_hat
  double pv_gap_mean;    // E ||PV(F(X,Y)) - PV(X)||
  double pv_gap_stderr;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  double r_hat = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double cpq = 0.0;
  // Circle-plus-center instability pair: one point appended to a regular
  // 60-gon moves the exact vectorization much more than the RN output.
  double instability_pv_gap = 0.0;  // L1
  double instability_rn_gap = 0.0;  // L1
  double instability_death_ratio = 0.0;  // dominant H1 death after/before
  std::string csv;
};

// Requires a mean-aggregator model (Lipschitz certification).
StabilityReport stability_report(const RipsNetModel& model, const PvPipeline& pipeline,
                                 const Law& p_law, const Law& q_law, int n,
                                 const std::vector<double>& lambdas, int trials,
                                 uint64_t seed, int threads = 1);

std::string accuracy_rows_to_csv(const std::vector<AccuracyRow>& rows);
std::string timing_rows_to_csv(const std::vector<TimingRow>& rows);

}  // namespace topoforge
