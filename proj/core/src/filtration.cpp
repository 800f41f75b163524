#include "topoforge/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace topoforge {

bool simplex_order(const SimplexEntry& a, const SimplexEntry& b) {
  if (a.value != b.value) return a.value < b.value;
  int da = a.dim(), db = b.dim();
  if (da != db) return da < db;
  return a.v < b.v;
}

void FilteredComplex::sort_entries() {
  std::sort(entries.begin(), entries.end(), simplex_order);
}

std::string FilteredComplex::dump() const {
  std::string out;
  char buf[128];
  for (const auto& e : entries) {
    std::string line;
    for (int i = 0; i <= e.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), "%d ", e.v[i]);
      line += buf;
    }
    std::snprintf(buf, sizeof(buf), ": %.17g\n", e.value);
    line += buf;
    out += line;
  }
  return out;
}

double default_max_radius(const PointCloud& cloud) {
  int d = cloud.dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < cloud.size(); ++i)
    for (int j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], cloud.point(i)[j]);
      hi[j] = std::max(hi[j], cloud.point(i)[j]);
    }
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += (hi[j] - lo[j]) * (hi[j] - lo[j]);
  return std::sqrt(s) / 2.0;
}

namespace {

// Shared expansion: vertex/edge values supplied by caller, higher simplices
// take the max over their edges (>= vertex values by construction).
FilteredComplex expand(const PointCloud& cloud, const std::vector<double>& vertex_values,
                       const std::vector<double>& edge_values, int max_dim,
                       double max_radius) {
  int n = cloud.size();
  FilteredComplex fc;
  fc.vertex_count = n;
  fc.max_dim = max_dim;

  auto edge_at = [&](int i, int j) -> double {
    return edge_values[static_cast<size_t>(i) * n + j];
  };

  for (int i = 0; i < n; ++i)
    if (vertex_values[i] <= max_radius)
      fc.entries.push_back({vertex_values[i], {i, -1, -1}});

  if (max_dim >= 1) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double t = edge_at(i, j);
        if (t <= max_radius) fc.entries.push_back({t, {i, j, -1}});
      }
  }

  if (max_dim >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double tij = edge_at(i, j);
        if (tij > max_radius) continue;
        for (int k = j + 1; k < n; ++k) {
          double t = std::max(tij, std::max(edge_at(i, k), edge_at(j, k)));
          if (t <= max_radius) fc.entries.push_back({t, {i, j, k}});
        }
      }
  }

  fc.sort_entries();
  return fc;
}

}  // namespace

FilteredComplex rips_filtration(const PointCloud& cloud, int max_dim, double max_radius) {
  if (max_dim < 0 || max_dim > 2)
    throw std::invalid_argument("rips_filtration: only max_dim <= 2 supported");
  if (!(max_radius >= 0.0))
    throw std::invalid_argument("rips_filtration: max_radius must be >= 0");

  int n = cloud.size();
  std::vector<double> vertex_values(n, 0.0);
  std::vector<double> edge_values(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double t = euclidean(cloud.point(i), cloud.point(j), cloud.dim()) / 2.0;
      edge_values[static_cast<size_t>(i) * n + j] = t;
      edge_values[static_cast<size_t>(j) * n + i] = t;
    }
  return expand(cloud, vertex_values, edge_values, max_dim, max_radius);
}

double weighted_edge_value(double fi, double fj, double dist, double p) {
  double t0 = std::max(fi, fj);
  if (std::isinf(p)) return std::max(t0, dist / 2.0);

  auto radius_sum = [&](double t) {
    double ri = t <= fi ? 0.0 : std::pow(std::pow(t, p) - std::pow(fi, p), 1.0 / p);
    double rj = t <= fj ? 0.0 : std::pow(std::pow(t, p) - std::pow(fj, p), 1.0 / p);
    return ri + rj;
  };

  if (radius_sum(t0) >= dist) return t0;
  double lo = t0, hi = t0 + dist;
  for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
    double mid = 0.5 * (lo + hi);
    if (radius_sum(mid) >= dist)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

FilteredComplex weighted_rips_filtration(const PointCloud& cloud,
                                         const std::vector<double>& f, double p,
                                         int max_dim, double max_radius) {
  if (max_dim < 0 || max_dim > 2)
    throw std::invalid_argument("weighted_rips_filtration: only max_dim <= 2 supported");
  int n = cloud.size();
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("weighted_rips_filtration: weight count != N");
  for (double w : f)
    if (!(w >= 0.0)) throw std::invalid_argument("weighted_rips_filtration: negative weight");
  if (p < 1.0) throw std::invalid_argument("weighted_rips_filtration: p must be in [1,inf]");

  std::vector<double> edge_values(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = euclidean(cloud.point(i), cloud.point(j), cloud.dim());
      double t = weighted_edge_value(f[i], f[j], d, p);
      edge_values[static_cast<size_t>(i) * n + j] = t;
      edge_values[static_cast<size_t>(j) * n + i] = t;
    }
  return expand(cloud, f, edge_values, max_dim, max_radius);
}

FilteredComplex dtm_filtration(const PointCloud& cloud, double m, double p,
                               int max_dim, double max_radius) {
  int n = cloud.size();
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = dtm(cloud, cloud.point(i), m);
  return weighted_rips_filtration(cloud, f, p, max_dim, max_radius);
}

}  // namespace topoforge
