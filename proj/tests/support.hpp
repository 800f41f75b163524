#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "topoforge/filtration.hpp"
#include "topoforge/persistence.hpp"
#include "topoforge/rng.hpp"

namespace tfs {

// Naive O(m^3) boundary-matrix reduction kept independent of the library
// implementation; reference oracle for compute_persistence.
inline topoforge::PersistenceDiagram naive_persistence(const topoforge::FilteredComplex& complex,
                                                       int max_hom_dim) {
  using topoforge::SimplexEntry;
  const auto& entries = complex.entries;
  int m = static_cast<int>(entries.size());

  // Index lookup by vertex set.
  std::map<std::array<int32_t, 3>, int> index_of;
  for (int i = 0; i < m; ++i) index_of[entries[i].v] = i;

  auto facets = [&](const SimplexEntry& s) {
    std::vector<int> out;
    int d = s.dim();
    if (d == 0) return out;
    for (int drop = 0; drop <= d; ++drop) {
      std::array<int32_t, 3> f = {-1, -1, -1};
      int w = 0;
      for (int k = 0; k <= d; ++k)
        if (k != drop) f[w++] = s.v[k];
      out.push_back(index_of.at(f));
    }
    return out;
  };

  std::vector<std::set<int>> columns(m);
  for (int j = 0; j < m; ++j)
    for (int f : facets(entries[j])) columns[j].insert(f);

  std::vector<int> low_owner(m, -1);
  std::vector<int> paired_with(m, -1);
  for (int j = 0; j < m; ++j) {
    while (!columns[j].empty()) {
      int low = *columns[j].rbegin();
      int other = low_owner[low];
      if (other < 0) break;
      for (int e : columns[other]) {
        auto it = columns[j].find(e);
        if (it != columns[j].end())
          columns[j].erase(it);
        else
          columns[j].insert(e);
      }
    }
    if (!columns[j].empty()) {
      int low = *columns[j].rbegin();
      low_owner[low] = j;
      paired_with[low] = j;
      paired_with[j] = -2;  // negative simplex, kills a class
    }
  }

  topoforge::PersistenceDiagram diagram;
  for (int i = 0; i < m; ++i) {
    if (paired_with[i] == -2) continue;  // killer column
    int d = entries[i].dim();
    if (d > max_hom_dim) continue;
    double birth = entries[i].value;
    double death = paired_with[i] >= 0 ? entries[paired_with[i]].value
                                       : topoforge::kInfiniteDeath;
    if (death > birth) diagram.points.push_back({birth, death, d});
  }
  std::sort(diagram.points.begin(), diagram.points.end(),
            [](const topoforge::DiagramPoint& a, const topoforge::DiagramPoint& b) {
              return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
            });
  return diagram;
}

inline topoforge::PointCloud random_cloud(topoforge::Rng& rng, int n, int dim,
                                          double lo = 0.0, double hi = 1.0) {
  topoforge::PointCloud cloud;
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (double& x : p) x = rng.uniform(lo, hi);
    cloud.push_back(p);
  }
  return cloud;
}

inline topoforge::PointCloud random_cloud(int n, int dim, double lo, double hi,
                                          uint64_t seed) {
  topoforge::Rng rng(seed);
  return random_cloud(rng, n, dim, lo, hi);
}

inline topoforge::PointCloud regular_ngon(int n, double radius = 1.0,
                                          double cx = 0.0, double cy = 0.0) {
  topoforge::PointCloud cloud;
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * M_PI * k / n;
    cloud.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
  }
  return cloud;
}

inline bool diagrams_equal(const topoforge::PersistenceDiagram& a,
                           const topoforge::PersistenceDiagram& b) {
  return a.points == b.points;
}

}  // namespace tfs
