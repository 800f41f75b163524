#pragma once

#include <string>
#include <vector>

#include "topoforge/persistence.hpp"

namespace topoforge {

enum class PiWeight { ten_tanh_persistence, persistence_squared, constant_one };

struct PIParams {
  int nx = 20, ny = 20;
  double x0 = 0.0, x1 = 1.0;  // birth axis
  double y0 = 0.0, y1 = 1.0;  // persistence axis
  double sigma = 0.1;
  PiWeight weight = PiWeight::ten_tanh_persistence;
  double global_scale = 1.0;

  void validate() const;
};

struct PLParams {
  int k_max = 5;
  int resolution = 50;
  double t0 = 0.0, t1 = 1.0;

  void validate() const;
};

enum class PvKind { pi, pl };

struct PersistenceVector {
  std::vector<double> values;
  PvKind kind = PvKind::pi;
  std::string fingerprint;
};

// Stable hash of the vectorization parameters (grid layout, weight,
// normalization mode); guards against training/inference mismatch.
std::string pi_fingerprint(const PIParams& p, bool normalized);
std::string pl_fingerprint(const PLParams& p, bool normalized);

// Exact per-pixel Gaussian integration (separable CDF products); pixels
// row-major with the birth axis outer and persistence axis fastest.
PersistenceVector persistence_image(const PersistenceDiagram& diagram, const PIParams& params);

// lambda_k sampled on `resolution` equally spaced points of [t0,t1],
// concatenated k-major.
PersistenceVector persistence_landscape(const PersistenceDiagram& diagram, const PLParams& params);

// Range from the pooled birth-persistence transforms; bandwidth as the
// q-quantile of their pairwise distances.
PIParams estimate_pi_params(const std::vector<PersistenceDiagram>& diagrams,
                            int nx, int ny, PiWeight weight, double quantile = 0.2);

// Range [min birth, max death] over the pool.
PLParams estimate_pl_params(const std::vector<PersistenceDiagram>& diagrams,
                            int k_max, int resolution);

// Per-vector max scaling into [0,1]; the zero vector passes unchanged.
PersistenceVector normalize(const PersistenceVector& v);

}  // namespace topoforge
