#include "topoforge/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace topoforge {

std::vector<DiagramPoint> PersistenceDiagram::in_dim(int dim) const {
  std::vector<DiagramPoint> out;
  for (const auto& p : points)
    if (p.dim == dim) out.push_back(p);
  return out;
}

namespace {

// Z/2 column addition on sorted index vectors.
void symmetric_difference(std::vector<int32_t>& a, const std::vector<int32_t>& b,
                          std::vector<int32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(scratch));
  a.swap(scratch);
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_hom_dim) {
  if (max_hom_dim < 0 || max_hom_dim > fc.max_dim - 1)
    throw std::invalid_argument("compute_persistence: max_hom_dim must be <= max_dim - 1");
  if (!std::is_sorted(fc.entries.begin(), fc.entries.end(), simplex_order))
    throw std::runtime_error("compute_persistence: complex entries not sorted");

  const auto& entries = fc.entries;
  const size_t m = entries.size();
  const int n = fc.vertex_count;

  // Global index of every vertex and edge for boundary lookup.
  std::vector<int32_t> vertex_pos(n, -1);
  std::vector<int32_t> edge_pos(static_cast<size_t>(n) * n, -1);
  for (size_t gi = 0; gi < m; ++gi) {
    const auto& e = entries[gi];
    if (e.dim() == 0) {
      vertex_pos[e.v[0]] = static_cast<int32_t>(gi);
    } else if (e.dim() == 1) {
      edge_pos[static_cast<size_t>(e.v[0]) * n + e.v[1]] = static_cast<int32_t>(gi);
    }
  }
  auto vertex_at = [&](int v) {
    int32_t p = vertex_pos[v];
    if (p < 0) throw std::runtime_error("compute_persistence: missing vertex face");
    return p;
  };
  auto edge_at = [&](int a, int b) {
    int32_t p = edge_pos[static_cast<size_t>(a) * n + b];
    if (p < 0) throw std::runtime_error("compute_persistence: missing edge face");
    return p;
  };

  // paired_death[gi] = global index of the killing simplex, or -1.
  std::vector<int32_t> paired_death(m, -1);

  // Dimension 2 first (clearing): reduce triangle columns over edge indices.
  // Only columns that end nonzero are retained; their low slot is unique.
  if (max_hom_dim >= 1) {
    std::vector<int32_t> low_owner(m, -1);  // edge gi -> stored column id
    std::vector<std::vector<int32_t>> stored;
    std::vector<int32_t> cur, scratch;
    for (size_t gi = 0; gi < m; ++gi) {
      const auto& e = entries[gi];
      if (e.dim() != 2) continue;
      int32_t b0 = edge_at(e.v[0], e.v[1]);
      int32_t b1 = edge_at(e.v[0], e.v[2]);
      int32_t b2 = edge_at(e.v[1], e.v[2]);
      cur.assign({b0, b1, b2});
      std::sort(cur.begin(), cur.end());
      for (int32_t bx : cur)
        if (entries[bx].value > e.value)
          throw std::runtime_error("compute_persistence: face value exceeds coface");
      while (!cur.empty()) {
        int32_t owner = low_owner[cur.back()];
        if (owner < 0) break;
        symmetric_difference(cur, stored[owner], scratch);
      }
      if (!cur.empty()) {
        int32_t low = cur.back();
        low_owner[low] = static_cast<int32_t>(stored.size());
        stored.push_back(cur);
        paired_death[low] = static_cast<int32_t>(gi);
      }
    }
  }

  // Dimension 1: edges paired by a triangle are positive (cleared); the rest
  // reduce over vertices, where Z/2 columns never exceed two entries.
  std::vector<int32_t> edge_killer_of_vertex(m, -1);
  {
    std::vector<int32_t> low_owner(m, -1);
    std::vector<std::array<int32_t, 2>> stored;  // second slot -1 when size 1
    for (size_t gi = 0; gi < m; ++gi) {
      const auto& e = entries[gi];
      if (e.dim() != 1) continue;
      if (paired_death[gi] >= 0) continue;  // cleared: positive edge
      int32_t a = vertex_at(e.v[0]);
      int32_t b = vertex_at(e.v[1]);
      std::array<int32_t, 2> cur = {std::min(a, b), std::max(a, b)};
      while (cur[1] >= 0) {
        int32_t owner = low_owner[cur[1]];
        if (owner < 0) break;
        const auto& other = stored[owner];  // shares the low entry cur[1]
        int32_t rest = other[0] == cur[1] ? other[1] : other[0];
        if (rest == cur[0]) {
          cur = {-1, -1};
        } else {
          cur = {std::min(cur[0], rest), std::max(cur[0], rest)};
        }
      }
      if (cur[1] >= 0) {
        low_owner[cur[1]] = static_cast<int32_t>(stored.size());
        stored.push_back(cur);
        edge_killer_of_vertex[cur[1]] = static_cast<int32_t>(gi);
      }
      // A zero column here is a positive edge with no triangle pair:
      // infinite H1 bar, handled below via paired_death[gi] == -1.
    }
  }

  std::vector<char> is_h0_killer(m, 0);
  for (size_t gi = 0; gi < m; ++gi)
    if (edge_killer_of_vertex[gi] >= 0) is_h0_killer[edge_killer_of_vertex[gi]] = 1;

  PersistenceDiagram diagram;
  for (size_t gi = 0; gi < m; ++gi) {
    const auto& e = entries[gi];
    int d = e.dim();
    if (d == 0) {
      int32_t killer = edge_killer_of_vertex[gi];
      double death = killer >= 0 ? entries[killer].value : kInfiniteDeath;
      if (death > e.value) diagram.points.push_back({e.value, death, 0});
    } else if (d == 1 && max_hom_dim >= 1) {
      if (is_h0_killer[gi]) continue;  // negative edge, pairs in H0
      if (paired_death[gi] >= 0) {
        double death = entries[paired_death[gi]].value;
        if (death > e.value) diagram.points.push_back({e.value, death, 1});
      } else {
        diagram.points.push_back({e.value, kInfiniteDeath, 1});
      }
    }
  }

  std::sort(diagram.points.begin(), diagram.points.end(),
            [](const DiagramPoint& a, const DiagramPoint& b) {
              if (a.dim != b.dim) return a.dim < b.dim;
              if (a.birth != b.birth) return a.birth < b.birth;
              return a.death < b.death;
            });
  return diagram;
}

PersistenceDiagram finitize(const PersistenceDiagram& diagram, double cap,
                            bool drop_infinite) {
  PersistenceDiagram out;
  for (const auto& p : diagram.points) {
    if (std::isinf(p.death)) {
      if (drop_infinite) continue;
      if (cap < p.birth) throw std::invalid_argument("finitize: cap below a birth");
      if (cap > p.birth) out.points.push_back({p.birth, cap, p.dim});
    } else {
      if (!drop_infinite && cap < p.death)
        throw std::invalid_argument("finitize: cap below a finite death");
      out.points.push_back(p);
    }
  }
  return out;
}

PersistenceDiagram regular_ngon_diagram_oracle(int n, double radius) {
  if (n < 3) throw std::invalid_argument("regular_ngon_diagram_oracle: n must be >= 3");
  PersistenceDiagram d;
  double side_half = radius * std::sin(M_PI / n);
  for (int i = 0; i < n - 1; ++i) d.points.push_back({0.0, side_half, 0});
  d.points.push_back({0.0, kInfiniteDeath, 0});
  // H1 class dies when chords spanning ceil(n/3) steps appear.
  int steps = (n + 2) / 3;
  double death = radius * std::sin(M_PI * steps / n);
  if (death > side_half) d.points.push_back({side_half, death, 1});
  return d;
}

std::string diagram_to_csv(const PersistenceDiagram& diagram) {
  std::string out = "birth,death,dim\n";
  char buf[128];
  for (const auto& p : diagram.points) {
    if (std::isinf(p.death))
      std::snprintf(buf, sizeof(buf), "%.17g,inf,%d\n", p.birth, p.dim);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", p.birth, p.death, p.dim);
    out += buf;
  }
  return out;
}

PersistenceDiagram diagram_from_csv(const std::string& csv) {
  PersistenceDiagram d;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("birth", 0) == 0) continue;
    }
    double birth, death;
    int dim;
    char death_buf[64];
    if (std::sscanf(line.c_str(), "%lf,%63[^,],%d", &birth, death_buf, &dim) != 3)
      throw std::runtime_error("diagram_from_csv: malformed line: " + line);
    death = std::strcmp(death_buf, "inf") == 0 ? kInfiniteDeath : std::atof(death_buf);
    d.points.push_back({birth, death, dim});
  }
  return d;
}

}  // namespace topoforge
