#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "nbp/corpus.hpp"
#include "nbp/rng.hpp"

namespace nbp::test {

// total variation between empirical counts (n draws) and an exact PMF; mass
// outside the evaluated range counts fully
inline double tv_vs_pmf(const std::vector<std::int64_t>& counts,
                        std::int64_t n, const std::vector<double>& pmf) {
  double tv = 0.0, pmf_mass = 0.0;
  const std::size_t cap = std::max(counts.size(), pmf.size());
  for (std::size_t k = 0; k < cap; ++k) {
    const double emp =
        k < counts.size() ? static_cast<double>(counts[k]) / n : 0.0;
    const double exact = k < pmf.size() ? pmf[k] : 0.0;
    pmf_mass += exact;
    tv += std::fabs(emp - exact);
  }
  return 0.5 * (tv + (1.0 - pmf_mass));
}

inline void bump(std::vector<std::int64_t>& counts, std::int64_t k) {
  if (k >= static_cast<std::int64_t>(counts.size())) counts.resize(k + 1, 0);
  ++counts[k];
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;      // sd / sqrt(n)
  double se_variance = 0.0;  // sd of (x-mean)^2 / sqrt(n)
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0, s4 = 0.0;
  for (const double x : xs) {
    const double d = (x - m.mean) * (x - m.mean);
    ss += d;
    s4 += d * d;
  }
  m.variance = ss / (n - 1.0);
  m.se_mean = std::sqrt(m.variance / n);
  const double var_of_sq = s4 / n - (ss / n) * (ss / n);
  m.se_variance = std::sqrt(std::max(var_of_sq, 0.0) / n);
  return m;
}

inline double cosine(const std::vector<double>& a,
                     const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// small deterministic corpus for sweep-level tests
inline SparseCountMatrix toy_corpus(std::int32_t V, std::int32_t J,
                                    std::int32_t tokens_per_doc,
                                    std::uint64_t seed) {
  SparseCountMatrix m(V, J);
  RngStream rng(seed, streams::id(streams::kScratch, 99));
  std::vector<std::int32_t> counts(V);
  for (std::int32_t j = 0; j < J; ++j) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::int32_t t = 0; t < tokens_per_doc; ++t)
      ++counts[rng.bounded(V)];
    for (std::int32_t v = 0; v < V; ++v)
      if (counts[v] > 0) m.add(j, v, counts[v]);
  }
  return m;
}

}  // namespace nbp::test
