#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "topoforge/persistence.hpp"

using namespace topoforge;

TEST_CASE("two points at distance 1") {
  PointCloud cloud;
  cloud.push_back({0.0, 0.0});
  cloud.push_back({1.0, 0.0});
  PersistenceDiagram d = compute_persistence(rips_filtration(cloud, 1, 10.0), 0);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0] == DiagramPoint{0.0, 0.5, 0});
  CHECK(d.points[1].birth == 0.0);
  CHECK(std::isinf(d.points[1].death));
}

TEST_CASE("single point") {
  PointCloud cloud;
  cloud.push_back({3.0, 7.0});
  PersistenceDiagram d = compute_persistence(rips_filtration(cloud, 1, 1.0), 0);
  REQUIRE(d.points.size() == 1);
  CHECK(d.points[0].birth == 0.0);
  CHECK(std::isinf(d.points[0].death));
}

TEST_CASE("unit square H1") {
  PointCloud cloud;
  cloud.push_back({0.0, 0.0});
  cloud.push_back({1.0, 0.0});
  cloud.push_back({1.0, 1.0});
  cloud.push_back({0.0, 1.0});
  FilteredComplex fc = rips_filtration(cloud, 2, 10.0);
  PersistenceDiagram d = compute_persistence(fc, 1);
  auto h1 = d.in_dim(1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h1[0].death == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  // Same answer from the independent naive reduction.
  CHECK(tfs::diagrams_equal(d, tfs::naive_persistence(fc, 1)));
}

TEST_CASE("matches the naive reduction oracle on random clouds") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng.below(6));  // up to 8
    PointCloud cloud = tfs::random_cloud(rng, n, 2);
    double radius = trial % 3 == 0 ? 0.4 : 1e9;  // exercise truncation too
    FilteredComplex fc = rips_filtration(cloud, 2, radius);
    CHECK(tfs::diagrams_equal(compute_persistence(fc, 1), tfs::naive_persistence(fc, 1)));
  }
}

TEST_CASE("matches the oracle on weighted complexes") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.below(5));
    PointCloud cloud = tfs::random_cloud(rng, n, 2);
    FilteredComplex fc = dtm_filtration(cloud, 0.3, 2.0, 2, 1e9);
    CHECK(tfs::diagrams_equal(compute_persistence(fc, 1), tfs::naive_persistence(fc, 1)));
  }
}

TEST_CASE("regular n-gon oracle cross-validation") {
  for (int n : {6, 9, 12}) {
    PointCloud cloud = tfs::regular_ngon(n, 1.0);
    PersistenceDiagram computed = compute_persistence(rips_filtration(cloud, 2, 10.0), 1);
    PersistenceDiagram oracle = regular_ngon_diagram_oracle(n, 1.0);
    REQUIRE(computed.points.size() == oracle.points.size());
    for (size_t i = 0; i < computed.points.size(); ++i) {
      CHECK(computed.points[i].dim == oracle.points[i].dim);
      CHECK(computed.points[i].birth ==
            doctest::Approx(oracle.points[i].birth).epsilon(1e-9));
      if (std::isinf(oracle.points[i].death))
        CHECK(std::isinf(computed.points[i].death));
      else
        CHECK(computed.points[i].death ==
              doctest::Approx(oracle.points[i].death).epsilon(1e-9));
    }
  }
  // 12-gon H1 death is sqrt(3)/2 in the radius convention.
  auto h1 = regular_ngon_diagram_oracle(12, 1.0).in_dim(1);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].death == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  // n=4 at r = sqrt(2)/2 reproduces the unit square.
  auto sq = regular_ngon_diagram_oracle(4, std::sqrt(2.0) / 2.0).in_dim(1);
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].birth == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq[0].death == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  // Triangles fill at birth.
  CHECK(regular_ngon_diagram_oracle(3, 1.0).in_dim(1).empty());
  CHECK_THROWS_AS(regular_ngon_diagram_oracle(2, 1.0), std::invalid_argument);
}

TEST_CASE("diagram invariant under point relabeling") {
  Rng rng(23);
  PointCloud cloud = tfs::random_cloud(rng, 9, 2);
  PersistenceDiagram base = compute_persistence(rips_filtration(cloud, 2, 1e9), 1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm(cloud.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    rng.shuffle(perm);
    PointCloud shuffled;
    for (int i : perm) shuffled.push_back(cloud.point_vec(i));
    PersistenceDiagram d = compute_persistence(rips_filtration(shuffled, 2, 1e9), 1);
    CHECK(tfs::diagrams_equal(base, d));
  }
}

TEST_CASE("scaling coordinates scales the diagram") {
  Rng rng(24);
  PointCloud cloud = tfs::random_cloud(rng, 8, 2);
  double s = 3.5;
  PointCloud scaled;
  for (int i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point_vec(i);
    for (double& x : p) x *= s;
    scaled.push_back(p);
  }
  PersistenceDiagram a = compute_persistence(rips_filtration(cloud, 2, 1e9), 1);
  PersistenceDiagram b = compute_persistence(rips_filtration(scaled, 2, 1e9), 1);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    if (std::isinf(a.points[i].death))
      CHECK(std::isinf(b.points[i].death));
    else
      CHECK(b.points[i].death == doctest::Approx(s * a.points[i].death).epsilon(1e-12));
    CHECK(b.points[i].birth == doctest::Approx(s * a.points[i].birth).epsilon(1e-12));
  }
}

TEST_CASE("H0 bar counts track connected components") {
  // Two far-apart pairs at the truncation radius: 2 components.
  PointCloud cloud;
  cloud.push_back({0.0, 0.0});
  cloud.push_back({0.1, 0.0});
  cloud.push_back({100.0, 0.0});
  cloud.push_back({100.1, 0.0});
  PersistenceDiagram d = compute_persistence(rips_filtration(cloud, 1, 1.0), 0);
  int infinite = 0, finite = 0;
  for (const auto& p : d.points) (std::isinf(p.death) ? infinite : finite)++;
  CHECK(infinite == 2);
  CHECK(finite == 2);  // N - components

  // Connected graph: exactly one infinite bar.
  Rng rng(25);
  PointCloud rc = tfs::random_cloud(rng, 12, 2);
  PersistenceDiagram dr = compute_persistence(rips_filtration(rc, 1, 1e9), 0);
  infinite = 0;
  for (const auto& p : dr.points) infinite += std::isinf(p.death);
  CHECK(infinite == 1);
  CHECK(static_cast<int>(dr.points.size()) == 12);
}

TEST_CASE("instability pair: appended center shrinks the dominant H1 death") {
  PointCloud circle = tfs::regular_ngon(60, 1.0);
  PointCloud with_center = circle;
  with_center.push_back({0.0, 0.0});
  auto dominant = [](const PersistenceDiagram& d) {
    double best = -1.0, death = 0.0;
    for (const auto& p : d.in_dim(1))
      if (p.death - p.birth > best) {
        best = p.death - p.birth;
        death = p.death;
      }
    return death;
  };
  double death_a = dominant(compute_persistence(rips_filtration(circle, 2, 10.0), 1));
  double death_b = dominant(compute_persistence(rips_filtration(with_center, 2, 10.0), 1));
  CHECK(death_a == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
  CHECK(death_b / death_a == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(0.05));
}

TEST_CASE("finitize") {
  PersistenceDiagram d;
  d.points = {{0.0, kInfiniteDeath, 0}, {0.1, 0.4, 1}};
  PersistenceDiagram capped = finitize(d, 2.0);
  REQUIRE(capped.points.size() == 2);
  CHECK(capped.points[0].death == 2.0);
  CHECK(capped.points[1].death == 0.4);

  PersistenceDiagram no_inf;
  no_inf.points = {{0.1, 0.4, 1}};
  CHECK(tfs::diagrams_equal(finitize(no_inf, 2.0), no_inf));

  PersistenceDiagram dropped = finitize(d, 0.0, true);
  REQUIRE(dropped.points.size() == 1);
  CHECK(dropped.points[0] == DiagramPoint{0.1, 0.4, 1});

  CHECK_THROWS_AS(finitize(d, 0.05), std::invalid_argument);  // cap below a birth
  CHECK_THROWS_AS(finitize(d, 0.2), std::invalid_argument);   // cap below a finite death
}

TEST_CASE("diagram CSV round trip") {
  PersistenceDiagram d;
  d.points = {{0.0, 0.5, 0}, {0.0, kInfiniteDeath, 0}, {0.25, 1.0 / 3.0, 1}};
  std::string csv = diagram_to_csv(d);
  CHECK(csv.rfind("birth,death,dim\n", 0) == 0);
  CHECK(csv.find("0,inf,0") != std::string::npos);
  PersistenceDiagram back = diagram_from_csv(csv);
  CHECK(tfs::diagrams_equal(d, back));
  CHECK_THROWS_AS(diagram_from_csv("birth,death,dim\nnot,a,row,"), std::runtime_error);
}

TEST_CASE("compute_persistence validates inputs") {
  PointCloud cloud;
  cloud.push_back({0.0, 0.0});
  cloud.push_back({1.0, 0.0});
  FilteredComplex fc = rips_filtration(cloud, 1, 10.0);
  CHECK_THROWS_AS(compute_persistence(fc, 1), std::invalid_argument);  // needs max_dim 2
  std::swap(fc.entries.front(), fc.entries.back());
  CHECK_THROWS_AS(compute_persistence(fc, 0), std::runtime_error);  // unsorted
}
