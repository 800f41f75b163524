#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "topoforge/geometry.hpp"

namespace topoforge {

struct TransportPlan {
  struct Entry {
    int32_t src;
    int32_t dst;
    double mass;
  };
  std::vector<Entry> entries;
};

struct W1Result {
  double distance = 0.0;
  TransportPlan plan;
};

// Exact Wasserstein-1 between discrete probability measures. Uniform
// equal-size inputs go through a rectangular assignment solver; general
// weights are scaled to a common integer grid and solved as min-cost flow.
W1Result wasserstein1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Test oracle: min over all n! matchings, uniform equal-size only, n <= 8.
double wasserstein1_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct CorruptionW1Stats {
  double mean = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;   // lambda * C(P,Q)
  double cpq = 0.0;     // E ||x - y||, x ~ P, y ~ Q
  bool coupling_bound_held = true;  // W1 <= (1/N) sum ||x_i - y_i|| every trial
};

// Monte-Carlo estimate of E[W1(F(X,Y), X)] for N-point clouds from P with a
// fraction lambda replaced by samples from Q, with the analytic bound.
CorruptionW1Stats expected_corruption_w1(const Law& p_law, const Law& q_law, int n,
                                         double lambda, int trials, uint64_t seed);

// E ||x-y|| for x ~ P, y ~ Q; closed form for circle-vs-its-center, else
// Monte-Carlo with `samples` pairs.
double expected_pair_distance(const Law& p_law, const Law& q_law, uint64_t seed,
                              int samples = 100000);

}  // namespace topoforge
