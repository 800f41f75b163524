#include "topoforge/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace topoforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_measure(const DiscreteMeasure& m, const char* name) {
  if (m.support.size() != static_cast<int>(m.weights.size()))
    throw std::invalid_argument(std::string("wasserstein1: ") + name +
                                " support/weight length mismatch");
  double total = 0.0;
  for (double w : m.weights) {
    if (w < 0.0) throw std::invalid_argument("wasserstein1: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument(std::string("wasserstein1: ") + name + " not normalized");
}

bool is_uniform(const DiscreteMeasure& m) {
  double w = 1.0 / m.weights.size();
  for (double x : m.weights)
    if (std::abs(x - w) > 1e-12) return false;
  return true;
}

std::vector<double> cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  int n = mu.support.size(), m = nu.support.size();
  std::vector<double> cost(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      cost[static_cast<size_t>(i) * m + j] =
          euclidean(mu.support.point(i), nu.support.point(j), mu.support.dim());
  return cost;
}

// Square assignment, shortest augmenting paths with potentials, O(n^3).
std::vector<int> hungarian(const std::vector<double>& cost, int n) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[static_cast<size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Successive shortest paths on the complete bipartite transportation graph
// with integer masses. Shortest residual paths are found by label-correcting
// search (SPFA) over integer-scaled costs: exact arithmetic guarantees the
// residual graph never acquires a negative cycle, so the search terminates.
// Rounded double sums do not give that guarantee.
struct FlowSolver {
  int n, m;
  std::vector<int64_t> icost;           // cost * 1e12, exact int arithmetic
  std::vector<int64_t> supply, demand;  // remaining

  FlowSolver(int n_, int m_, const std::vector<double>& cost_, std::vector<int64_t> sup,
             std::vector<int64_t> dem)
      : n(n_), m(m_), icost(cost_.size()), supply(std::move(sup)), demand(std::move(dem)) {
    for (size_t k = 0; k < cost_.size(); ++k)
      icost[k] = std::llround(cost_[k] * 1e12);
  }

  // flow[i*m+j]
  std::vector<int64_t> solve() {
    constexpr int64_t kInf64 = std::numeric_limits<int64_t>::max() / 4;
    std::vector<int64_t> flow(static_cast<size_t>(n) * m, 0);
    int64_t remaining = std::accumulate(supply.begin(), supply.end(), int64_t{0});
    int total = n + m;
    std::vector<int64_t> dist(total);
    std::vector<int> prev(total);
    std::vector<char> in_queue(total);
    while (remaining > 0) {
      // Nodes: left 0..n-1, right n..n+m-1; every left node with remaining
      // supply acts as a source.
      std::fill(dist.begin(), dist.end(), kInf64);
      std::fill(prev.begin(), prev.end(), -1);
      std::fill(in_queue.begin(), in_queue.end(), 0);
      std::deque<int> queue;
      for (int i = 0; i < n; ++i)
        if (supply[i] > 0) {
          dist[i] = 0.0;
          in_queue[i] = 1;
          queue.push_back(i);
        }
      while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        in_queue[node] = 0;
        if (node < n) {
          int i = node;
          for (int j = 0; j < m; ++j) {
            int64_t cand = dist[i] + icost[static_cast<size_t>(i) * m + j];
            if (cand < dist[n + j]) {
              dist[n + j] = cand;
              prev[n + j] = i;
              if (!in_queue[n + j]) {
                in_queue[n + j] = 1;
                queue.push_back(n + j);
              }
            }
          }
        } else {
          int j = node - n;
          for (int i = 0; i < n; ++i) {
            if (flow[static_cast<size_t>(i) * m + j] <= 0) continue;
            int64_t cand = dist[n + j] - icost[static_cast<size_t>(i) * m + j];
            if (cand < dist[i]) {
              dist[i] = cand;
              prev[i] = n + j;
              if (!in_queue[i]) {
                in_queue[i] = 1;
                queue.push_back(i);
              }
            }
          }
        }
      }
      // Closest reachable sink column with remaining demand.
      int best_j = -1;
      for (int j = 0; j < m; ++j)
        if (demand[j] > 0 && dist[n + j] < kInf64 && (best_j < 0 || dist[n + j] < dist[n + best_j]))
          best_j = j;
      if (best_j < 0) throw std::runtime_error("wasserstein1: infeasible flow");

      // Trace path, find bottleneck.
      int64_t bottleneck = demand[best_j];
      for (int node = n + best_j; prev[node] != -1; node = prev[node]) {
        int p = prev[node];
        if (node < n) bottleneck = std::min(bottleneck, flow[static_cast<size_t>(node) * m + (p - n)]);
        if (p < n && prev[p] == -1) bottleneck = std::min(bottleneck, supply[p]);
      }
      for (int node = n + best_j; prev[node] != -1; node = prev[node]) {
        int p = prev[node];
        if (node >= n)
          flow[static_cast<size_t>(p) * m + (node - n)] += bottleneck;
        else
          flow[static_cast<size_t>(node) * m + (p - n)] -= bottleneck;
        if (p < n && prev[p] == -1) supply[p] -= bottleneck;
      }
      demand[best_j] -= bottleneck;
      remaining -= bottleneck;
    }
    return flow;
  }
};

std::vector<int64_t> integerize(const std::vector<double>& w, int64_t scale) {
  std::vector<int64_t> out(w.size());
  int64_t total = 0;
  size_t largest = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    out[i] = std::llround(w[i] * static_cast<double>(scale));
    total += out[i];
    if (w[i] > w[largest]) largest = i;
  }
  out[largest] += scale - total;  // absorb rounding drift
  if (out[largest] < 0) throw std::invalid_argument("wasserstein1: weight rounding failed");
  return out;
}

}  // namespace

W1Result wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  validate_measure(mu, "mu");
  validate_measure(nu, "nu");
  if (mu.support.dim() != nu.support.dim())
    throw std::invalid_argument("wasserstein1: support dimension mismatch");

  int n = mu.support.size(), m = nu.support.size();
  std::vector<double> cost = cost_matrix(mu, nu);
  W1Result res;

  if (n == m && is_uniform(mu) && is_uniform(nu)) {
    std::vector<int> match = hungarian(cost, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += cost[static_cast<size_t>(i) * n + match[i]];
      res.plan.entries.push_back({i, match[i], 1.0 / n});
    }
    res.distance = total / n;
    return res;
  }

  constexpr int64_t kScale = 1000000000000LL;  // 1e12, weights rounded at 1e-12
  std::vector<int64_t> supply = integerize(mu.weights, kScale);
  std::vector<int64_t> demand = integerize(nu.weights, kScale);
  int64_t g = 0;
  for (int64_t x : supply) g = std::gcd(g, x);
  for (int64_t x : demand) g = std::gcd(g, x);
  if (g > 1) {
    for (int64_t& x : supply) x /= g;
    for (int64_t& x : demand) x /= g;
  }
  int64_t units = std::accumulate(supply.begin(), supply.end(), int64_t{0});

  FlowSolver solver(n, m, cost, supply, demand);
  std::vector<int64_t> flow = solver.solve();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      int64_t f = flow[static_cast<size_t>(i) * m + j];
      if (f > 0) {
        double mass = static_cast<double>(f) / static_cast<double>(units);
        total += mass * cost[static_cast<size_t>(i) * m + j];
        res.plan.entries.push_back({i, j, mass});
      }
    }
  res.distance = total;
  return res;
}

double wasserstein1_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  int n = mu.support.size();
  if (nu.support.size() != n || n > 8)
    throw std::invalid_argument("wasserstein1_bruteforce: needs equal sizes, n <= 8");
  if (!is_uniform(mu) || !is_uniform(nu))
    throw std::invalid_argument("wasserstein1_bruteforce: uniform weights only");
  std::vector<double> cost = cost_matrix(mu, nu);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost[static_cast<size_t>(i) * n + perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / n;
}

double expected_pair_distance(const Law& p_law, const Law& q_law, uint64_t seed, int samples) {
  // Circle against its own center: every sample sits at exactly the radius.
  if (p_law.kind == Law::Kind::uniform_circle && q_law.kind == Law::Kind::point_mass &&
      p_law.center == q_law.center)
    return p_law.scale;
  if (p_law.kind == Law::Kind::point_mass && q_law.kind == Law::Kind::point_mass)
    return euclidean(p_law.center.data(), q_law.center.data(),
                     static_cast<int>(p_law.center.size()));
  Rng rng(seed);
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    auto x = p_law.sample(rng);
    auto y = q_law.sample(rng);
    acc += euclidean(x.data(), y.data(), static_cast<int>(x.size()));
  }
  return acc / samples;
}

CorruptionW1Stats expected_corruption_w1(const Law& p_law, const Law& q_law, int n,
                                         double lambda, int trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("expected_corruption_w1: trials must be >= 1");
  std::vector<double> w1s;
  w1s.reserve(trials);
  bool coupling_ok = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    PointCloud x;
    for (int i = 0; i < n; ++i) x.push_back(p_law.sample(rng));
    NoiseSpec spec{lambda, q_law, Rng::derive(seed, 0x10000 + t)};
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    PointCloud corrupted = corrupt_with_pairs(x, spec, &pairs);
    double w1 = wasserstein1(empirical_measure(corrupted), empirical_measure(x)).distance;
    double coupling = 0.0;
    for (const auto& [xi, yi] : pairs)
      coupling += euclidean(xi.data(), yi.data(), static_cast<int>(xi.size()));
    coupling /= n;
    if (w1 > coupling + 1e-9) coupling_ok = false;
    w1s.push_back(w1);
  }
  CorruptionW1Stats stats;
  double mean = std::accumulate(w1s.begin(), w1s.end(), 0.0) / trials;
  double var = 0.0;
  for (double v : w1s) var += (v - mean) * (v - mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;
  stats.mean = mean;
  stats.stderr_ = std::sqrt(var / trials);
  stats.cpq = expected_pair_distance(p_law, q_law, Rng::derive(seed, 0xC0FFEE));
  stats.bound = lambda * stats.cpq;
  stats.coupling_bound_held = coupling_ok;
  return stats;
}

}  // namespace topoforge
