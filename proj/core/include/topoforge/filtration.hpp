#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "topoforge/geometry.hpp"

namespace topoforge {

// Simplex of dimension <= 2; unused vertex slots hold -1.
struct SimplexEntry {
  double value;
  std::array<int32_t, 3> v;  // strictly increasing vertex indices

  int dim() const { return v[2] >= 0 ? 2 : (v[1] >= 0 ? 1 : 0); }
};

// Sorted by (value, dim, lex); closed under faces by construction.
struct FilteredComplex {
  int32_t vertex_count = 0;
  int max_dim = 0;
  std::vector<SimplexEntry> entries;

  void sort_entries();
  // Debug dump, one simplex per line: "v1 v2 ... : value".
  std::string dump() const;
};

bool simplex_order(const SimplexEntry& a, const SimplexEntry& b);

// Radius convention: edge {i,j} enters at ||xi-xj|| / 2.
FilteredComplex rips_filtration(const PointCloud& cloud, int max_dim, double max_radius);

// Weighted Rips with per-point weights f and interpolation exponent p.
// Edge {i,j} enters at the first t with r_f(xi,t) + r_f(xj,t) >= ||xi-xj||.
FilteredComplex weighted_rips_filtration(const PointCloud& cloud,
                                         const std::vector<double>& f, double p,
                                         int max_dim, double max_radius);

// Weighted Rips with f(i) = dtm(cloud, x_i, m).
FilteredComplex dtm_filtration(const PointCloud& cloud, double m, double p,
                               int max_dim, double max_radius);

// Half the diameter of the enclosing axis-aligned box; default truncation.
double default_max_radius(const PointCloud& cloud);

// Smallest t at which the two weighted balls of the edge touch.
double weighted_edge_value(double fi, double fj, double dist, double p);

}  // namespace topoforge
