#pragma once

// Joint-distribution correctness test for the gamma-NB sweep: the
// marginal-conditional simulator (fresh prior + data draws every round) and
// the successive-conditional simulator (sweep + data re-draw) must agree on
// the moments of every monitored statistic if and only if the sweep targets
// the right conditionals.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "nbp/distributions.hpp"
#include "nbp/gibbs.hpp"
#include "nbp/model.hpp"

namespace nbp::test {

struct GewekeConfig {
  std::int32_t V = 5, J = 3, K = 2;
  std::int32_t rounds = 20000;
  std::uint64_t seed = 20240901;
  ModelSpec spec = [] {
    ModelSpec s;
    s.variant = Variant::kGammaNb;
    s.hp.a0 = 2.0;   // p_j ~ Beta(2,2); E[p/(1-p)] = 2
    s.hp.b0 = 2.0;
    s.hp.e0 = 4.0;   // gamma0 ~ Gamma(4,1); E[N_j] = 4 * 2 = 8
    s.hp.f0 = 1.0;
    s.hp.c = 1.0;
    s.hp.eta = 0.5;
    s.hp.K = 2;
    return s;
  }();
};

struct GewekeStat {
  std::string name;
  double z = 0.0;
  double mc_mean = 0.0, sc_mean = 0.0;
};

struct GewekeResult {
  std::vector<GewekeStat> stats;
  double max_abs_z = 0.0;
};

namespace geweke_detail {

inline std::vector<double> monitored(const ModelState& s) {
  const double r_total =
      std::accumulate(s.r_topic.begin(), s.r_topic.end(), 0.0);
  const double p_mean =
      std::accumulate(s.p_doc.begin(), s.p_doc.end(), 0.0) / s.J;
  const double theta_total =
      std::accumulate(s.theta.begin(), s.theta.end(), 0.0);
  return {s.gamma0, r_total, p_mean, static_cast<double>(s.num_tokens()),
          theta_total};
}

inline const std::vector<std::string>& stat_names() {
  static const std::vector<std::string> names = {
      "gamma0", "sum_r_k", "mean_p_j", "total_tokens", "sum_theta"};
  return names;
}

// fresh latent state from the prior (no data yet)
inline ModelState prior_draw(const GewekeConfig& cfg, RngStream& rng) {
  const Hyperparams& hp = cfg.spec.hp;
  ModelState s;
  s.variant = Variant::kGammaNb;
  s.V = cfg.V;
  s.J = cfg.J;
  s.K = cfg.K;
  s.gamma0 = sample_gamma(hp.e0, 1.0 / hp.f0, rng);
  s.r_topic.resize(cfg.K);
  for (auto& r : s.r_topic) r = sample_gamma(s.gamma0 / cfg.K, 1.0 / hp.c, rng);
  s.p_doc.resize(cfg.J);
  for (auto& p : s.p_doc) p = clamp_prob(sample_beta(hp.a0, hp.b0, rng));
  s.theta.resize(static_cast<std::size_t>(cfg.J) * cfg.K);
  for (std::int32_t j = 0; j < cfg.J; ++j)
    for (std::int32_t k = 0; k < cfg.K; ++k)
      s.theta[static_cast<std::size_t>(j) * cfg.K + k] = sample_gamma(
          s.r_topic[k], s.p_doc[j] / (1.0 - s.p_doc[j]), rng);
  s.phi.resize(static_cast<std::size_t>(cfg.V) * cfg.K);
  {
    std::vector<double> alpha(cfg.V, hp.eta), col(cfg.V);
    for (std::int32_t k = 0; k < cfg.K; ++k) {
      sample_dirichlet(alpha, col, rng);
      for (std::int32_t v = 0; v < cfg.V; ++v)
        s.phi[static_cast<std::size_t>(v) * cfg.K + k] = col[v];
    }
  }
  s.aug_l_jk.assign(static_cast<std::size_t>(cfg.J) * cfg.K, 0);
  s.aug_lprime_k.assign(cfg.K, 0);
  s.aug_lprime_j.assign(cfg.J, 0);
  return s;
}

// data re-draw given (theta, phi): n_jk ~ Pois(theta_jk), each token's term
// from Cat(phi_k); tokens keep their generating topic as z
inline void redraw_data(ModelState& s, RngStream& rng) {
  const std::int32_t K = s.K;
  s.token_term.clear();
  s.z.clear();
  s.doc_begin.assign(s.J + 1, 0);
  std::vector<double> col(s.V);
  for (std::int32_t j = 0; j < s.J; ++j) {
    for (std::int32_t k = 0; k < K; ++k) {
      const std::int64_t n = sample_poisson(
          s.theta[static_cast<std::size_t>(j) * K + k], rng);
      for (std::int64_t t = 0; t < n; ++t) {
        for (std::int32_t v = 0; v < s.V; ++v)
          col[v] = s.phi[static_cast<std::size_t>(v) * K + k];
        s.token_term.push_back(
            static_cast<std::int32_t>(sample_categorical(col, rng)));
        s.z.push_back(k);
      }
    }
    s.doc_begin[j + 1] = static_cast<std::int64_t>(s.token_term.size());
  }
  s.n_vk.assign(static_cast<std::size_t>(s.V) * K, 0);
  s.n_jk.assign(static_cast<std::size_t>(s.J) * K, 0);
  s.n_k.assign(K, 0);
  s.recount_from_z();
}

struct Series {
  std::vector<std::vector<double>> values;  // per statistic
  void push(const std::vector<double>& v) {
    values.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) values[i].push_back(v[i]);
  }
};

inline double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

// iid standard error
inline double se_iid(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1.0) / xs.size());
}

// batch-means standard error (handles autocorrelation)
inline double se_batch(const std::vector<double>& xs, std::size_t batches) {
  const std::size_t len = xs.size() / batches;
  std::vector<double> bm;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += xs[i];
    bm.push_back(s / len);
  }
  const double m = mean_of(bm);
  double ss = 0.0;
  for (const double x : bm) ss += (x - m) * (x - m);
  return std::sqrt(ss / (bm.size() - 1.0) / bm.size());
}

}  // namespace geweke_detail

inline GewekeResult run_geweke(const GewekeConfig& cfg = {}) {
  using namespace geweke_detail;
  Series mc, sc;

  {
    RngStream rng(cfg.seed, streams::id(streams::kScratch, 41));
    for (std::int32_t round = 0; round < cfg.rounds; ++round) {
      ModelState s = prior_draw(cfg, rng);
      redraw_data(s, rng);
      mc.push(monitored(s));
    }
  }
  {
    RngStream rng(cfg.seed, streams::id(streams::kScratch, 42));
    ModelState s = prior_draw(cfg, rng);
    redraw_data(s, rng);
    for (std::int32_t round = 0; round < cfg.rounds; ++round) {
      sweep(s, cfg.spec, rng);
      redraw_data(s, rng);
      sc.push(monitored(s));
    }
  }

  GewekeResult result;
  for (std::size_t i = 0; i < stat_names().size(); ++i) {
    GewekeStat stat;
    stat.name = stat_names()[i];
    stat.mc_mean = mean_of(mc.values[i]);
    stat.sc_mean = mean_of(sc.values[i]);
    const double se_mc = se_iid(mc.values[i]);
    const double se_sc = se_batch(sc.values[i], 100);
    stat.z = (stat.mc_mean - stat.sc_mean) /
             std::sqrt(se_mc * se_mc + se_sc * se_sc);
    result.max_abs_z = std::max(result.max_abs_z, std::fabs(stat.z));
    result.stats.push_back(stat);
  }
  return result;
}

}  // namespace nbp::test
