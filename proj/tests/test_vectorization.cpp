#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "topoforge/vectorization.hpp"

using namespace topoforge;

namespace {

PIParams wide_pi() {
  PIParams p;
  p.nx = 1;
  p.ny = 1;
  p.x0 = -10.0;
  p.x1 = 10.0;
  p.y0 = -10.0;
  p.y1 = 10.0;
  p.sigma = 1.0;
  p.weight = PiWeight::constant_one;
  return p;
}

// Dense midpoint quadrature of the weighted Gaussian mixture over one pixel.
double quadrature_pixel(const PersistenceDiagram& d, const PIParams& p, int ix, int iy,
                        int steps = 400) {
  double dx = (p.x1 - p.x0) / p.nx, dy = (p.y1 - p.y0) / p.ny;
  double x0 = p.x0 + ix * dx, y0 = p.y0 + iy * dy;
  double hx = dx / steps, hy = dy / steps;
  double total = 0.0;
  for (const auto& pt : d.points) {
    double b = pt.birth, pers = pt.death - pt.birth;
    double w = pers == 0.0 ? 0.0 : 10.0 * std::tanh(pers);
    if (p.weight == PiWeight::constant_one) w = 1.0;
    if (p.weight == PiWeight::persistence_squared) w = pers * pers;
    double s = 0.0;
    for (int i = 0; i < steps; ++i)
      for (int j = 0; j < steps; ++j) {
        double x = x0 + (i + 0.5) * hx, y = y0 + (j + 0.5) * hy;
        double g = std::exp(-((x - b) * (x - b) + (y - pers) * (y - pers)) /
                            (2 * p.sigma * p.sigma)) /
                   (2 * M_PI * p.sigma * p.sigma);
        s += g;
      }
    total += w * s * hx * hy;
  }
  return total;
}

}  // namespace

TEST_CASE("persistence image basics") {
  PersistenceDiagram empty;
  PersistenceVector v0 = persistence_image(empty, wide_pi());
  CHECK(v0.values == std::vector<double>{0.0});

  // Diagonal point contributes nothing under a w(x,0)=0 weight.
  PersistenceDiagram diag;
  diag.points = {{0.0, 0.0, 1}};
  PIParams p = wide_pi();
  p.weight = PiWeight::ten_tanh_persistence;
  CHECK(persistence_image(diag, p).values == std::vector<double>{0.0});

  // Full mass of a single unit-persistence point over [-10,10]^2.
  PersistenceDiagram one;
  one.points = {{0.0, 1.0, 1}};
  PersistenceVector v1 = persistence_image(one, wide_pi());
  CHECK(v1.values[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pi params validation") {
  PIParams p = wide_pi();
  p.x1 = p.x0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = wide_pi();
  p.nx = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = wide_pi();
  p.global_scale = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("persistence image matches dense quadrature") {
  PersistenceDiagram d;
  d.points = {{0.1, 0.9, 1}, {0.2, 0.5, 1}};
  PIParams p;
  p.nx = 3;
  p.ny = 2;
  p.x0 = 0.0;
  p.x1 = 0.6;
  p.y0 = 0.0;
  p.y1 = 1.0;
  p.sigma = 0.25;
  p.weight = PiWeight::ten_tanh_persistence;
  PersistenceVector v = persistence_image(d, p);
  for (int ix = 0; ix < p.nx; ++ix)
    for (int iy = 0; iy < p.ny; ++iy)
      CHECK(v.values[ix * p.ny + iy] ==
            doctest::Approx(quadrature_pixel(d, p, ix, iy)).epsilon(1e-6));
}

TEST_CASE("persistence image refuses infinite deaths") {
  PersistenceDiagram d;
  d.points = {{0.0, kInfiniteDeath, 0}};
  CHECK_THROWS_AS(persistence_image(d, wide_pi()), std::invalid_argument);
}

TEST_CASE("persistence image linearity and mass") {
  Rng rng(31);
  PersistenceDiagram d1, d2, both;
  for (int i = 0; i < 5; ++i) {
    double b = rng.uniform(0.0, 0.5);
    DiagramPoint p = {b, b + rng.uniform(0.1, 0.5), 1};
    ((i % 2 == 0) ? d1 : d2).points.push_back(p);
    both.points.push_back(p);
  }
  PIParams p;
  p.nx = 8;
  p.ny = 8;
  p.x0 = -2.0;
  p.x1 = 3.0;
  p.y0 = 0.0;
  p.y1 = 4.0;
  p.sigma = 0.3;
  PersistenceVector va = persistence_image(d1, p);
  PersistenceVector vb = persistence_image(d2, p);
  PersistenceVector vc = persistence_image(both, p);
  for (size_t i = 0; i < vc.values.size(); ++i)
    CHECK(vc.values[i] == doctest::Approx(va.values[i] + vb.values[i]).epsilon(1e-12));

  // Pixel sum with constant-one weight over a wide range = point count * scale.
  PIParams mass = p;
  mass.weight = PiWeight::constant_one;
  mass.global_scale = 2.5;
  mass.x0 = -30.0;
  mass.x1 = 30.0;
  mass.y0 = -30.0;
  mass.y1 = 30.0;
  double total = 0.0;
  for (double x : persistence_image(both, mass).values) total += x;
  CHECK(total == doctest::Approx(5.0 * 2.5).epsilon(1e-6));
}

TEST_CASE("persistence landscape basics") {
  PersistenceDiagram d;
  d.points = {{0.0, 2.0, 1}};
  PLParams p;
  p.k_max = 2;
  p.resolution = 5;
  p.t0 = 0.0;
  p.t1 = 2.0;
  PersistenceVector v = persistence_landscape(d, p);
  REQUIRE(v.values.size() == 10);
  // k = 1 tent over [0,2]: values at t = 0, .5, 1, 1.5, 2.
  CHECK(v.values[0] == 0.0);
  CHECK(v.values[1] == doctest::Approx(0.5));
  CHECK(v.values[2] == doctest::Approx(1.0));
  CHECK(v.values[3] == doctest::Approx(0.5));
  CHECK(v.values[4] == 0.0);
  // k = 2 empty.
  for (int j = 5; j < 10; ++j) CHECK(v.values[j] == 0.0);

  // Duplicated point fills k = 2.
  d.points.push_back({0.0, 2.0, 1});
  PersistenceVector v2 = persistence_landscape(d, p);
  CHECK(v2.values[7] == doctest::Approx(1.0));
}

TEST_CASE("landscape properties") {
  Rng rng(32);
  PersistenceDiagram d;
  for (int i = 0; i < 7; ++i) {
    double b = rng.uniform(0.0, 1.0);
    d.points.push_back({b, b + rng.uniform(0.0, 1.0), 1});
  }
  PLParams p;
  p.k_max = 4;
  p.resolution = 101;
  p.t0 = -0.5;
  p.t1 = 2.5;
  PersistenceVector v = persistence_landscape(d, p);
  double step = (p.t1 - p.t0) / (p.resolution - 1);
  for (int k = 0; k < p.k_max; ++k)
    for (int j = 0; j + 1 < p.resolution; ++j) {
      double a = v.values[k * p.resolution + j];
      double b = v.values[k * p.resolution + j + 1];
      CHECK(std::abs(a - b) <= step + 1e-12);  // 1-Lipschitz in t
      if (k + 1 < p.k_max)                      // k-majorization
        CHECK(v.values[(k + 1) * p.resolution + j] <= a + 1e-12);
    }

  // Invariance under permutation of diagram points.
  PersistenceDiagram shuffled = d;
  std::reverse(shuffled.points.begin(), shuffled.points.end());
  CHECK(persistence_landscape(shuffled, p).values == v.values);
  PIParams pip;
  pip.x0 = 0.0;
  pip.x1 = 2.0;
  pip.y0 = 0.0;
  pip.y1 = 2.0;
  pip.sigma = 0.2;
  CHECK(persistence_image(shuffled, pip).values == persistence_image(d, pip).values);
}

TEST_CASE("estimate_pi_params") {
  PersistenceDiagram d;
  d.points = {{0.0, 1.0, 1}, {0.5, 3.5, 1}};  // transformed: (0,1), (0.5,3)
  PIParams p = estimate_pi_params({d}, 10, 10, PiWeight::ten_tanh_persistence, 0.5);
  CHECK(p.x0 == 0.0);
  CHECK(p.x1 == 0.5);
  CHECK(p.y0 == 1.0);
  CHECK(p.y1 == 3.0);
  CHECK(p.sigma == doctest::Approx(std::hypot(0.5, 2.0)));

  // Quantile endpoints: q = 0 is the min pairwise distance.
  PersistenceDiagram d3 = d;
  d3.points.push_back({0.0, 2.0, 1});
  PIParams q0 = estimate_pi_params({d3}, 4, 4, PiWeight::constant_one, 0.0);
  CHECK(q0.sigma == doctest::Approx(1.0));  // (0,1) to (0,2)

  // Degenerate pooled range rejected.
  PersistenceDiagram twice;
  twice.points = {{1.0, 2.0, 1}, {1.0, 2.0, 1}};
  CHECK_THROWS_AS(estimate_pi_params({twice}, 4, 4, PiWeight::constant_one, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_pi_params({PersistenceDiagram{}}, 4, 4, PiWeight::constant_one, 0.2),
                  std::invalid_argument);
}

TEST_CASE("estimate_pl_params") {
  PersistenceDiagram d;
  d.points = {{0.0, 1.0, 1}, {0.5, 2.0, 1}};
  PLParams p = estimate_pl_params({d}, 3, 10);
  CHECK(p.t0 == 0.0);
  CHECK(p.t1 == 2.0);

  PersistenceDiagram single;
  single.points = {{0.25, 0.75, 1}};
  PLParams ps = estimate_pl_params({single}, 3, 10);
  CHECK(ps.t0 == 0.25);
  CHECK(ps.t1 == 0.75);

  // Identical diagrams pool to the same params.
  PLParams pd = estimate_pl_params({d, d, d}, 3, 10);
  CHECK(pd.t0 == p.t0);
  CHECK(pd.t1 == p.t1);

  CHECK_THROWS_AS(estimate_pl_params({}, 3, 10), std::invalid_argument);
}

TEST_CASE("normalize") {
  PersistenceVector v;
  v.values = {0.0, 2.0, 4.0};
  v.fingerprint = "abc";
  PersistenceVector n = normalize(v);
  CHECK(n.values == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(n.fingerprint == "abc:n");
  CHECK(normalize(n).values == n.values);
  CHECK(normalize(n).fingerprint == "abc:n");  // idempotent

  PersistenceVector zero;
  zero.values = {0.0, 0.0};
  CHECK(normalize(zero).values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("fingerprints guard parameters and normalization") {
  PIParams a;
  a.x1 = 1.0;
  a.y1 = 1.0;
  a.sigma = 0.1;
  PIParams b = a;
  b.sigma = 0.2;
  CHECK(pi_fingerprint(a, false) != pi_fingerprint(b, false));
  CHECK(pi_fingerprint(a, true) == pi_fingerprint(a, false) + ":n");

  PLParams pl;
  CHECK(pl_fingerprint(pl, false) != pi_fingerprint(a, false));

  // The normalized fingerprint is what normalize() produces.
  PersistenceDiagram d;
  d.points = {{0.1, 0.9, 1}};
  PersistenceVector v = normalize(persistence_image(d, a));
  CHECK(v.fingerprint == pi_fingerprint(a, true));
}
