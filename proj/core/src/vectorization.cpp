#include "topoforge/vectorization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace topoforge {

void PIParams::validate() const {
  if (nx < 1 || ny < 1) throw std::invalid_argument("PIParams: resolution must be >= 1");
  if (!(x0 < x1) || !(y0 < y1)) throw std::invalid_argument("PIParams: degenerate range");
  if (!(sigma > 0.0)) throw std::invalid_argument("PIParams: sigma must be positive");
  if (!(global_scale > 0.0)) throw std::invalid_argument("PIParams: global_scale must be positive");
}

void PLParams::validate() const {
  if (k_max < 1) throw std::invalid_argument("PLParams: k_max must be >= 1");
  if (resolution < 2) throw std::invalid_argument("PLParams: resolution must be >= 2");
  if (!(t0 < t1)) throw std::invalid_argument("PLParams: degenerate range");
}

namespace {

const char* weight_name(PiWeight w) {
  switch (w) {
    case PiWeight::ten_tanh_persistence: return "ten_tanh_persistence";
    case PiWeight::persistence_squared: return "persistence_squared";
    case PiWeight::constant_one: return "constant_one";
  }
  return "?";
}

double weight_at(PiWeight w, double persistence) {
  switch (w) {
    case PiWeight::ten_tanh_persistence: return 10.0 * std::tanh(persistence);
    case PiWeight::persistence_squared: return persistence * persistence;
    case PiWeight::constant_one: return 1.0;
  }
  return 0.0;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

double gauss_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

void require_finite(const PersistenceDiagram& d) {
  for (const auto& p : d.points)
    if (std::isinf(p.death))
      throw std::invalid_argument("vectorization: diagram has infinite deaths, finitize first");
}

}  // namespace

std::string pi_fingerprint(const PIParams& p, bool normalized) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "pi|%d|%d|%.17g|%.17g|%.17g|%.17g|%.17g|%s|%.17g",
                p.nx, p.ny, p.x0, p.x1, p.y0, p.y1, p.sigma, weight_name(p.weight),
                p.global_scale);
  return hex64(fnv1a(buf)) + (normalized ? ":n" : "");
}

std::string pl_fingerprint(const PLParams& p, bool normalized) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "pl|%d|%d|%.17g|%.17g", p.k_max, p.resolution,
                p.t0, p.t1);
  return hex64(fnv1a(buf)) + (normalized ? ":n" : "");
}

PersistenceVector persistence_image(const PersistenceDiagram& diagram, const PIParams& params) {
  params.validate();
  require_finite(diagram);

  PersistenceVector out;
  out.kind = PvKind::pi;
  out.fingerprint = pi_fingerprint(params, false);
  out.values.assign(static_cast<size_t>(params.nx) * params.ny, 0.0);

  double dx = (params.x1 - params.x0) / params.nx;
  double dy = (params.y1 - params.y0) / params.ny;
  double inv_sigma = 1.0 / params.sigma;

  // Accumulate in canonical point order so the image is bit-exact under
  // reordering of the input diagram.
  std::vector<DiagramPoint> points = diagram.points;
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
  });

  // Per-point CDF differences are separable, so precompute each axis.
  std::vector<double> col(params.nx), row(params.ny);
  for (const auto& p : points) {
    double b = p.birth;
    double pers = p.death - p.birth;
    double w = weight_at(params.weight, pers) * params.global_scale;
    if (w == 0.0) continue;
    for (int ix = 0; ix < params.nx; ++ix) {
      double lo = params.x0 + ix * dx;
      col[ix] = gauss_cdf((lo + dx - b) * inv_sigma) - gauss_cdf((lo - b) * inv_sigma);
    }
    for (int iy = 0; iy < params.ny; ++iy) {
      double lo = params.y0 + iy * dy;
      row[iy] = gauss_cdf((lo + dy - pers) * inv_sigma) - gauss_cdf((lo - pers) * inv_sigma);
    }
    for (int ix = 0; ix < params.nx; ++ix) {
      double wx = w * col[ix];
      double* slab = out.values.data() + static_cast<size_t>(ix) * params.ny;
      for (int iy = 0; iy < params.ny; ++iy) slab[iy] += wx * row[iy];
    }
  }
  return out;
}

PersistenceVector persistence_landscape(const PersistenceDiagram& diagram, const PLParams& params) {
  params.validate();
  require_finite(diagram);

  PersistenceVector out;
  out.kind = PvKind::pl;
  out.fingerprint = pl_fingerprint(params, false);
  out.values.assign(static_cast<size_t>(params.k_max) * params.resolution, 0.0);

  double step = (params.t1 - params.t0) / (params.resolution - 1);
  std::vector<double> tent;
  tent.reserve(diagram.points.size());
  for (int j = 0; j < params.resolution; ++j) {
    double t = params.t0 + j * step;
    tent.clear();
    for (const auto& p : diagram.points) {
      double v = std::min(t - p.birth, p.death - t);
      if (v > 0.0) tent.push_back(v);
    }
    int k_avail = std::min<int>(params.k_max, static_cast<int>(tent.size()));
    std::partial_sort(tent.begin(), tent.begin() + k_avail, tent.end(), std::greater<>());
    for (int k = 0; k < k_avail; ++k)
      out.values[static_cast<size_t>(k) * params.resolution + j] = tent[k];
  }
  return out;
}

PIParams estimate_pi_params(const std::vector<PersistenceDiagram>& diagrams,
                            int nx, int ny, PiWeight weight, double quantile) {
  if (quantile < 0.0 || quantile > 1.0)
    throw std::invalid_argument("estimate_pi_params: quantile out of [0,1]");
  std::vector<std::pair<double, double>> pts;  // (birth, persistence)
  for (const auto& d : diagrams) {
    require_finite(d);
    for (const auto& p : d.points) pts.emplace_back(p.birth, p.death - p.birth);
  }
  if (pts.size() < 2)
    throw std::invalid_argument("estimate_pi_params: fewer than 2 pooled points");

  PIParams out;
  out.nx = nx;
  out.ny = ny;
  out.weight = weight;
  out.x0 = out.x1 = pts[0].first;
  out.y0 = out.y1 = pts[0].second;
  for (const auto& [b, p] : pts) {
    out.x0 = std::min(out.x0, b);
    out.x1 = std::max(out.x1, b);
    out.y0 = std::min(out.y0, p);
    out.y1 = std::max(out.y1, p);
  }
  if (!(out.x0 < out.x1) || !(out.y0 < out.y1))
    throw std::invalid_argument("estimate_pi_params: degenerate range, supply explicit limits");

  std::vector<double> dists;
  dists.reserve(pts.size() * (pts.size() - 1) / 2);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      dists.push_back(std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second));
  std::sort(dists.begin(), dists.end());
  double pos = quantile * (dists.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, dists.size() - 1);
  double sigma = dists[lo] + (pos - lo) * (dists[hi] - dists[lo]);
  if (!(sigma > 0.0))
    throw std::invalid_argument("estimate_pi_params: estimated bandwidth is zero");
  out.sigma = sigma;
  return out;
}

PLParams estimate_pl_params(const std::vector<PersistenceDiagram>& diagrams,
                            int k_max, int resolution) {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& d : diagrams) {
    require_finite(d);
    for (const auto& p : d.points) {
      if (!any) {
        lo = p.birth;
        hi = p.death;
        any = true;
      } else {
        lo = std::min(lo, p.birth);
        hi = std::max(hi, p.death);
      }
    }
  }
  if (!any) throw std::invalid_argument("estimate_pl_params: empty pool");
  PLParams out;
  out.k_max = k_max;
  out.resolution = resolution;
  out.t0 = lo;
  out.t1 = hi;
  out.validate();
  return out;
}

PersistenceVector normalize(const PersistenceVector& v) {
  PersistenceVector out = v;
  double mx = 0.0;
  for (double x : out.values) mx = std::max(mx, x);
  if (mx > 0.0)
    for (double& x : out.values) x /= mx;
  // Fingerprints distinguish normalized vectors from raw ones.
  if (!out.fingerprint.empty() && !out.fingerprint.ends_with(":n"))
    out.fingerprint += ":n";
  return out;
}

}  // namespace topoforge
