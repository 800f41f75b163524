#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoforge/rng.hpp"

namespace topoforge {

// Finite set of d-dimensional points, flat row-major storage.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::vector<double> coords, int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(coords_.size()) / dim_; }
  const double* point(int i) const { return coords_.data() + static_cast<size_t>(i) * dim_; }
  double* point(int i) { return coords_.data() + static_cast<size_t>(i) * dim_; }
  const std::vector<double>& coords() const { return coords_; }

  std::vector<double> point_vec(int i) const;
  void push_back(const std::vector<double>& p);

 private:
  std::vector<double> coords_;
  int dim_ = 0;
};

struct LabeledCloud {
  PointCloud cloud;
  int label = 0;
};

struct DiscreteMeasure {
  PointCloud support;
  std::vector<double> weights;  // nonnegative, sum to 1 within 1e-9
};

// Sampling law for noise corruption and for the stability experiments.
struct Law {
  enum class Kind { point_mass, uniform_box, gaussian, uniform_circle };
  Kind kind = Kind::point_mass;
  std::vector<double> center;        // point_mass location / gaussian mean / circle center
  double scale = 1.0;                // gaussian stddev / circle radius
  std::vector<double> lo, hi;        // uniform_box bounds per axis
  int dim() const;
  std::vector<double> sample(Rng& rng) const;
};

struct NoiseSpec {
  double lambda = 0.0;  // fraction replaced, in (0,1)
  Law law;
  uint64_t seed = 0;
};

double euclidean(const double* a, const double* b, int dim);

// Points uniform on a union of n_circles circles with fresh random centers
// and radii; label is n_circles - 1.
LabeledCloud generate_circles(int n_circles, int n_points,
                              const std::vector<double>& center_lo,
                              const std::vector<double>& center_hi,
                              double radius_lo, double radius_hi, uint64_t seed);

// Replaces round(lambda*N) points, chosen uniformly without replacement, by
// i.i.d. samples from the noise law.
PointCloud corrupt(const PointCloud& cloud, const NoiseSpec& spec);

// Same as corrupt but also reports (original, replacement) pairs in the
// order they were coupled, for per-realization transport bounds.
PointCloud corrupt_with_pairs(const PointCloud& cloud, const NoiseSpec& spec,
                              std::vector<std::pair<std::vector<double>, std::vector<double>>>* pairs);

PointCloud time_delay_embed(const std::vector<double>& series, int embed_dim,
                            int delay, int skip);

DiscreteMeasure empirical_measure(const PointCloud& cloud);

// Distance to the empirical measure, exact piecewise-constant integral.
double dtm(const PointCloud& cloud, const double* query, double m);
double dtm(const PointCloud& cloud, const std::vector<double>& query, double m);

}  // namespace topoforge
