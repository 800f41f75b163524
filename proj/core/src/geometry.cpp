#include "topoforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace topoforge {

PointCloud::PointCloud(std::vector<double> coords, int dim)
    : coords_(std::move(coords)), dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("PointCloud: dimension must be >= 1");
  if (coords_.empty() || coords_.size() % dim != 0)
    throw std::invalid_argument("PointCloud: coordinate count not a multiple of dim");
  for (double c : coords_)
    if (!std::isfinite(c)) throw std::invalid_argument("PointCloud: non-finite coordinate");
}

std::vector<double> PointCloud::point_vec(int i) const {
  return std::vector<double>(point(i), point(i) + dim_);
}

void PointCloud::push_back(const std::vector<double>& p) {
  if (dim_ == 0) {
    dim_ = static_cast<int>(p.size());
    if (dim_ == 0) throw std::invalid_argument("PointCloud: empty point");
  }
  if (static_cast<int>(p.size()) != dim_)
    throw std::invalid_argument("PointCloud: mixed dimensions");
  for (double c : p)
    if (!std::isfinite(c)) throw std::invalid_argument("PointCloud: non-finite coordinate");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

int Law::dim() const {
  switch (kind) {
    case Kind::point_mass:
    case Kind::gaussian:
    case Kind::uniform_circle:
      return static_cast<int>(center.size());
    case Kind::uniform_box:
      return static_cast<int>(lo.size());
  }
  return 0;
}

std::vector<double> Law::sample(Rng& rng) const {
  switch (kind) {
    case Kind::point_mass:
      return center;
    case Kind::uniform_box: {
      if (lo.size() != hi.size() || lo.empty())
        throw std::invalid_argument("Law: uniform_box bounds malformed");
      std::vector<double> p(lo.size());
      for (size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
      return p;
    }
    case Kind::gaussian: {
      std::vector<double> p(center.size());
      for (size_t i = 0; i < p.size(); ++i) p[i] = rng.normal(center[i], scale);
      return p;
    }
    case Kind::uniform_circle: {
      if (center.size() != 2) throw std::invalid_argument("Law: uniform_circle is planar");
      double theta = rng.uniform(0.0, 2.0 * M_PI);
      return {center[0] + scale * std::cos(theta), center[1] + scale * std::sin(theta)};
    }
  }
  throw std::invalid_argument("Law: unknown kind");
}

double euclidean(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

LabeledCloud generate_circles(int n_circles, int n_points,
                              const std::vector<double>& center_lo,
                              const std::vector<double>& center_hi,
                              double radius_lo, double radius_hi, uint64_t seed) {
  if (n_circles < 1 || n_circles > 3)
    throw std::invalid_argument("generate_circles: n_circles must be in 1..3");
  if (n_points < n_circles)
    throw std::invalid_argument("generate_circles: n_points < n_circles");
  if (radius_lo <= 0.0 || radius_hi < radius_lo)
    throw std::invalid_argument("generate_circles: invalid radius range");
  if (center_lo.size() != 2 || center_hi.size() != 2 || center_lo[0] > center_hi[0] ||
      center_lo[1] > center_hi[1])
    throw std::invalid_argument("generate_circles: invalid center box");

  Rng rng(seed);
  int base = n_points / n_circles;
  int rem = n_points % n_circles;

  PointCloud cloud;
  for (int c = 0; c < n_circles; ++c) {
    double cx = rng.uniform(center_lo[0], center_hi[0]);
    double cy = rng.uniform(center_lo[1], center_hi[1]);
    double r = rng.uniform(radius_lo, radius_hi);
    int count = base + (c < rem ? 1 : 0);
    for (int i = 0; i < count; ++i) {
      double theta = rng.uniform(0.0, 2.0 * M_PI);
      cloud.push_back({cx + r * std::cos(theta), cy + r * std::sin(theta)});
    }
  }
  return {std::move(cloud), n_circles - 1};
}

PointCloud corrupt_with_pairs(
    const PointCloud& cloud, const NoiseSpec& spec,
    std::vector<std::pair<std::vector<double>, std::vector<double>>>* pairs) {
  int n = cloud.size();
  long long k = std::llround(spec.lambda * n);
  if (spec.lambda <= 0.0 || spec.lambda >= 1.0 || k < 1 || k > n - 1)
    throw std::invalid_argument("corrupt: round(lambda*N) must lie in [1, N-1]");
  if (spec.law.dim() != cloud.dim())
    throw std::invalid_argument("corrupt: noise law dimension mismatch");

  Rng rng(spec.seed);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  idx.resize(static_cast<size_t>(k));
  std::sort(idx.begin(), idx.end());

  PointCloud out = cloud;
  if (pairs) pairs->clear();
  for (int i : idx) {
    std::vector<double> y = spec.law.sample(rng);
    if (pairs) pairs->emplace_back(cloud.point_vec(i), y);
    std::copy(y.begin(), y.end(), out.point(i));
  }
  return out;
}

PointCloud corrupt(const PointCloud& cloud, const NoiseSpec& spec) {
  return corrupt_with_pairs(cloud, spec, nullptr);
}

PointCloud time_delay_embed(const std::vector<double>& series, int embed_dim,
                            int delay, int skip) {
  if (embed_dim < 1 || delay < 1 || skip < 1)
    throw std::invalid_argument("time_delay_embed: parameters must be >= 1");
  long long span = static_cast<long long>(embed_dim - 1) * delay;
  if (static_cast<long long>(series.size()) < span + 1)
    throw std::invalid_argument("time_delay_embed: series too short");

  PointCloud cloud;
  std::vector<double> p(embed_dim);
  for (size_t i = 0; i + span < series.size(); i += skip) {
    for (int j = 0; j < embed_dim; ++j) p[j] = series[i + static_cast<size_t>(j) * delay];
    cloud.push_back(p);
  }
  return cloud;
}

DiscreteMeasure empirical_measure(const PointCloud& cloud) {
  DiscreteMeasure m;
  m.support = cloud;
  m.weights.assign(cloud.size(), 1.0 / cloud.size());
  return m;
}

double dtm(const PointCloud& cloud, const double* query, double m) {
  if (m <= 0.0 || m > 1.0) throw std::invalid_argument("dtm: m must be in (0,1]");
  int n = cloud.size();
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) {
    double d = euclidean(cloud.point(i), query, cloud.dim());
    d2[i] = d * d;
  }
  double mn = m * n;
  int k = static_cast<int>(std::ceil(mn - 1e-12));
  if (k < 1) k = 1;
  std::partial_sort(d2.begin(), d2.begin() + k, d2.end());
  double acc = 0.0;
  for (int j = 0; j < k - 1; ++j) acc += d2[j];
  acc += (mn - (k - 1)) * d2[k - 1];
  return std::sqrt(acc / mn);
}

double dtm(const PointCloud& cloud, const std::vector<double>& query, double m) {
  if (static_cast<int>(query.size()) != cloud.dim())
    throw std::invalid_argument("dtm: query dimension mismatch");
  return dtm(cloud, query.data(), m);
}

}  // namespace topoforge
