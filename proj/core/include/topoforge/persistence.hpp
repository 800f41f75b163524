#pragma once

#include <limits>
#include <string>
#include <vector>

#include "topoforge/filtration.hpp"

namespace topoforge {

constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

struct DiagramPoint {
  double birth;
  double death;  // may be +inf
  int dim;

  bool operator==(const DiagramPoint&) const = default;
};

struct PersistenceDiagram {
  std::vector<DiagramPoint> points;  // sorted by (dim, birth, death)

  std::vector<DiagramPoint> in_dim(int dim) const;
};

// Standard Z/2 boundary-matrix reduction with clearing; ties broken by
// (value, dim, lex) order of the input complex. Zero-persistence pairs are
// dropped.
PersistenceDiagram compute_persistence(const FilteredComplex& complex, int max_hom_dim);

// Replaces infinite deaths by cap (or drops those bars when drop_infinite).
PersistenceDiagram finitize(const PersistenceDiagram& diagram, double cap,
                            bool drop_infinite = false);

// Analytic Rips diagram of the regular n-gon, radius convention. Test oracle:
// validated against compute_persistence before use.
PersistenceDiagram regular_ngon_diagram_oracle(int n, double radius);

// CSV with header "birth,death,dim"; infinity serialized as "inf".
std::string diagram_to_csv(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_csv(const std::string& csv);

}  // namespace topoforge
