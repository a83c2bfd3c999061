#include "nbp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace nbp {

namespace {

using json = nlohmann::ordered_json;

std::string state_snapshot(const ModelState& s, const char* step,
                           const std::string& detail) {
  json snap;
  snap["step"] = step;
  snap["detail"] = detail;
  snap["variant"] = std::string(variant_name(s.variant));
  snap["V"] = s.V;
  snap["J"] = s.J;
  snap["K"] = s.K;
  snap["tokens"] = s.num_tokens();
  snap["gamma0"] = s.gamma0;
  snap["active_topics"] = s.active_topics();
  auto minmax = [](const std::vector<double>& v) {
    json mm;
    if (!v.empty()) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      mm = {{"min", *lo}, {"max", *hi}};
    }
    return mm;
  };
  snap["r_topic"] = minmax(s.r_topic);
  snap["r_doc"] = minmax(s.r_doc);
  snap["p_topic"] = minmax(s.p_topic);
  snap["p_doc"] = minmax(s.p_doc);
  return snap.dump();
}

[[noreturn]] void fail_numeric(const ModelState& s, const char* step,
                               const std::string& detail) {
  throw NumericalError(std::string("sweep aborted at step '") + step +
                           "': " + detail,
                       state_snapshot(s, step, detail));
}

double require_unit_interval(const ModelState& s, const char* step, double p) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0))
    fail_numeric(s, step, "probability " + std::to_string(p) +
                              " outside (0,1)");
  return p;
}

// token assignment pass: Pr(z_ji = k | -) proportional to phi_{v,k} theta_jk,
// documents in index order, tokens in stored order
void resample_z(ModelState& s, RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<double> w(K);
  for (std::int32_t j = 0; j < s.J; ++j) {
    const double* th = &s.theta[static_cast<std::size_t>(j) * K];
    for (std::int64_t t = s.doc_begin[j]; t < s.doc_begin[j + 1]; ++t) {
      const double* ph = &s.phi[static_cast<std::size_t>(s.token_term[t]) * K];
      double total = 0.0;
      for (std::int32_t k = 0; k < K; ++k) {
        w[k] = ph[k] * th[k];
        total += w[k];
      }
      if (!(total > 0.0) || !std::isfinite(total))
        fail_numeric(s, "z", "assignment weights for doc " + std::to_string(j) +
                                 " sum to " + std::to_string(total));
      const double target = rng.uniform() * total;
      double cum = 0.0;
      std::int32_t pick = -1, last_positive = 0;
      for (std::int32_t k = 0; k < K; ++k) {
        if (w[k] > 0.0) last_positive = k;
        cum += w[k];
        if (target < cum) {
          pick = k;
          break;
        }
      }
      s.z[t] = pick >= 0 ? pick : last_positive;
    }
  }
  s.recount_from_z();
}

void resample_phi(ModelState& s, double eta, RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<double> alpha(s.V), col(s.V);
  for (std::int32_t k = 0; k < K; ++k) {
    for (std::int32_t v = 0; v < s.V; ++v)
      alpha[v] = eta + s.n_vk[static_cast<std::size_t>(v) * K + k];
    sample_dirichlet(alpha, col, rng);
    for (std::int32_t v = 0; v < s.V; ++v)
      s.phi[static_cast<std::size_t>(v) * K + k] = col[v];
  }
}

// l_jk ~ CRT(n_jk, shape_jk); returns per-topic and per-doc totals
void crt_layer(ModelState& s, bool shape_is_topic, RngStream& rng,
               std::vector<std::int64_t>& l_dot_k,
               std::vector<std::int64_t>& l_dot_j) {
  const std::int32_t K = s.K;
  l_dot_k.assign(K, 0);
  l_dot_j.assign(s.J, 0);
  for (std::int32_t j = 0; j < s.J; ++j) {
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      const double shape = shape_is_topic ? s.r_topic[k] : s.r_doc[j];
      const auto l = static_cast<std::int32_t>(
          sample_crt(s.n_jk[idx], shape, rng));
      s.aug_l_jk[idx] = l;
      l_dot_k[k] += l;
      l_dot_j[j] += l;
    }
  }
}

// ---------------------------------------------------------------------------
// per-variant parameter blocks (the post-z portion of a sweep)
// ---------------------------------------------------------------------------

// canonical gamma-NB block, Appendix-order: l_jk, l'_k, p_j, gamma0, r_k,
// theta_jk, phi_k. NB-HDP runs the same block with p_j left at 0.5.
void params_gamma_nb(ModelState& s, const Hyperparams& hp, bool update_p,
                     RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<std::int64_t> l_dot_k, l_dot_j;
  crt_layer(s, /*shape_is_topic=*/true, rng, l_dot_k, l_dot_j);

  std::int64_t lprime_total = 0;
  for (std::int32_t k = 0; k < K; ++k) {
    s.aug_lprime_k[k] = static_cast<std::int32_t>(
        sample_crt(l_dot_k[k], s.gamma0 / K, rng));
    lprime_total += s.aug_lprime_k[k];
  }

  if (update_p) {
    const double r_total = std::accumulate(s.r_topic.begin(), s.r_topic.end(), 0.0);
    for (std::int32_t j = 0; j < s.J; ++j)
      s.p_doc[j] = clamp_prob(sample_beta(
          hp.a0 + static_cast<double>(s.doc_tokens(j)), hp.b0 + r_total, rng));
  }

  double T = 0.0;  // -sum_j ln(1 - p_j)
  for (std::int32_t j = 0; j < s.J; ++j) T -= std::log1p(-s.p_doc[j]);
  require_unit_interval(s, "gamma0", T / (hp.c + T));  // p'
  // f0 - ln(1-p') = f0 + ln(1 + T/c)
  s.gamma0 = sample_gamma(hp.e0 + static_cast<double>(lprime_total),
                          1.0 / (hp.f0 + std::log1p(T / hp.c)), rng);

  for (std::int32_t k = 0; k < K; ++k)
    s.r_topic[k] = sample_gamma(s.gamma0 / K + static_cast<double>(l_dot_k[k]),
                                1.0 / (hp.c + T), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] = sample_gamma(s.r_topic[k] + s.n_jk[idx], s.p_doc[j], rng);
    }

  resample_phi(s, hp.eta, rng);
}

// NB process: theta_jk == r_k with one shared p; the measure G is pooled
// across groups, so its posterior uses the column totals n_.k
void params_nb(ModelState& s, const Hyperparams& hp, RngStream& rng) {
  const std::int32_t K = s.K;
  std::fill(s.aug_l_jk.begin(), s.aug_l_jk.end(), 0);
  std::int64_t lprime_total = 0;
  for (std::int32_t k = 0; k < K; ++k) {
    s.aug_lprime_k[k] = static_cast<std::int32_t>(
        sample_crt(s.n_k[k], s.gamma0 / K, rng));
    lprime_total += s.aug_lprime_k[k];
  }

  const auto total_tokens = static_cast<double>(s.num_tokens());
  s.p_shared = clamp_prob(
      sample_beta(hp.a0 + total_tokens, hp.b0 + s.gamma0, rng));

  s.gamma0 = sample_gamma(hp.e0 + static_cast<double>(lprime_total),
                          1.0 / (hp.f0 - std::log1p(-s.p_shared)), rng);

  for (std::int32_t k = 0; k < K; ++k)
    s.r_topic[k] =
        sample_gamma(s.gamma0 / K + static_cast<double>(s.n_k[k]),
                     s.p_shared / static_cast<double>(s.J), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k)
      s.theta[static_cast<std::size_t>(j) * K + k] = s.r_topic[k];

  resample_phi(s, hp.eta, rng);
}

// NB-LDA: document-specific r_j and p_j; gamma0 couples the documents through
// the marginalized CRT chain l_j. ~ NB(gamma0, q_j)
void params_nb_lda(ModelState& s, const Hyperparams& hp, RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<std::int64_t> l_dot_k, l_dot_j;
  crt_layer(s, /*shape_is_topic=*/false, rng, l_dot_k, l_dot_j);

  for (std::int32_t j = 0; j < s.J; ++j)
    s.p_doc[j] = clamp_prob(
        sample_beta(hp.a0 + static_cast<double>(s.doc_tokens(j)),
                    hp.b0 + static_cast<double>(K) * s.r_doc[j], rng));

  std::int64_t lprime_total = 0;
  double S = 0.0;  // -sum_j ln(1 - q_j)
  std::vector<double> t_doc(s.J);
  for (std::int32_t j = 0; j < s.J; ++j) {
    t_doc[j] = -static_cast<double>(K) * std::log1p(-s.p_doc[j]);
    require_unit_interval(s, "gamma0", t_doc[j] / (hp.c + t_doc[j]));
    s.aug_lprime_j[j] = static_cast<std::int32_t>(
        sample_crt(l_dot_j[j], s.gamma0, rng));
    lprime_total += s.aug_lprime_j[j];
    S += std::log1p(t_doc[j] / hp.c);
  }
  s.gamma0 = sample_gamma(hp.e0 + static_cast<double>(lprime_total),
                          1.0 / (hp.f0 + S), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    s.r_doc[j] = sample_gamma(s.gamma0 + static_cast<double>(l_dot_j[j]),
                              1.0 / (hp.c + t_doc[j]), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] = sample_gamma(s.r_doc[j] + s.n_jk[idx], s.p_doc[j], rng);
    }

  resample_phi(s, hp.eta, rng);
}

// Beta-NB: shared probability measure (p_k), document dispersions r_j
void params_beta_nb(ModelState& s, const Hyperparams& hp, RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<std::int64_t> l_dot_k, l_dot_j;
  crt_layer(s, /*shape_is_topic=*/false, rng, l_dot_k, l_dot_j);

  const double r_doc_total =
      std::accumulate(s.r_doc.begin(), s.r_doc.end(), 0.0);
  for (std::int32_t k = 0; k < K; ++k)
    s.p_topic[k] = clamp_prob(sample_beta(
        hp.a0 + static_cast<double>(s.n_k[k]), hp.b0 + r_doc_total, rng));

  double T = 0.0;  // -sum_k ln(1 - p_k), shared by every document
  for (std::int32_t k = 0; k < K; ++k) T -= std::log1p(-s.p_topic[k]);
  require_unit_interval(s, "gamma0", T / (hp.c + T));

  std::int64_t lprime_total = 0;
  for (std::int32_t j = 0; j < s.J; ++j) {
    s.aug_lprime_j[j] = static_cast<std::int32_t>(
        sample_crt(l_dot_j[j], s.gamma0, rng));
    lprime_total += s.aug_lprime_j[j];
  }
  s.gamma0 = sample_gamma(
      hp.e0 + static_cast<double>(lprime_total),
      1.0 / (hp.f0 + static_cast<double>(s.J) * std::log1p(T / hp.c)), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    s.r_doc[j] = sample_gamma(s.gamma0 + static_cast<double>(l_dot_j[j]),
                              1.0 / (hp.c + T), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] =
          sample_gamma(s.r_doc[j] + s.n_jk[idx], s.p_topic[k], rng);
    }

  resample_phi(s, hp.eta, rng);
}

// Marked-Beta-NB: both measures shared, (r_k, p_k) per atom
void params_marked_beta_nb(ModelState& s, const Hyperparams& hp,
                           RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<std::int64_t> l_dot_k, l_dot_j;
  crt_layer(s, /*shape_is_topic=*/true, rng, l_dot_k, l_dot_j);

  const auto Jd = static_cast<double>(s.J);
  for (std::int32_t k = 0; k < K; ++k)
    s.p_topic[k] = clamp_prob(sample_beta(
        hp.a0 + static_cast<double>(s.n_k[k]), hp.b0 + Jd * s.r_topic[k], rng));

  std::int64_t lprime_total = 0;
  double Sq = 0.0;  // sum_k -ln(1 - q_k) with q_k the atom-level mixing prob
  std::vector<double> t_topic(K);
  for (std::int32_t k = 0; k < K; ++k) {
    t_topic[k] = -Jd * std::log1p(-s.p_topic[k]);
    require_unit_interval(s, "gamma0", t_topic[k] / (hp.c + t_topic[k]));
    s.aug_lprime_k[k] = static_cast<std::int32_t>(
        sample_crt(l_dot_k[k], s.gamma0 / K, rng));
    lprime_total += s.aug_lprime_k[k];
    Sq += std::log1p(t_topic[k] / hp.c);
  }
  s.gamma0 =
      sample_gamma(hp.e0 + static_cast<double>(lprime_total),
                   1.0 / (hp.f0 + Sq / static_cast<double>(K)), rng);

  for (std::int32_t k = 0; k < K; ++k)
    s.r_topic[k] = sample_gamma(s.gamma0 / K + static_cast<double>(l_dot_k[k]),
                                1.0 / (hp.c + t_topic[k]), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] =
          sample_gamma(s.r_topic[k] + s.n_jk[idx], s.p_topic[k], rng);
    }

  resample_phi(s, hp.eta, rng);
}

// Beta-Geometric: dispersion fixed at one, only the probability measure moves
void params_beta_geometric(ModelState& s, const Hyperparams& hp,
                           RngStream& rng) {
  const std::int32_t K = s.K;
  std::fill(s.aug_l_jk.begin(), s.aug_l_jk.end(), 0);
  for (std::int32_t k = 0; k < K; ++k)
    s.p_topic[k] = clamp_prob(
        sample_beta(hp.a0 + static_cast<double>(s.n_k[k]),
                    hp.b0 + static_cast<double>(s.J), rng));

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] =
          sample_gamma(1.0 + s.n_jk[idx], s.p_topic[k], rng);
    }

  resample_phi(s, hp.eta, rng);
}

// NB-FTM: beta-Bernoulli mask b_jk gates theta_jk ~ Gamma(r_k b_jk, 1);
// p_j stays pinned at 0.5
void params_nb_ftm(ModelState& s, const Hyperparams& hp, RngStream& rng) {
  const std::int32_t K = s.K;
  const double pj = kPinnedP;
  const double log1mp = std::log1p(-pj);

  // masks: forced on wherever a count exists
  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      if (s.n_jk[idx] > 0) {
        s.b_active[idx] = 1;
      } else {
        s.b_active[idx] =
            sample_bernoulli(ftm_mask_posterior(s.pi_topic[k], s.r_topic[k], pj),
                             rng)
                ? 1
                : 0;
      }
    }

  // beta-process finite approximation for pi_k
  const double pi_a = hp.c_beta * s.gamma0 / K;
  const double pi_b = hp.c_beta * (1.0 - s.gamma0 / K);
  if (!(pi_b > 0.0))
    fail_numeric(s, "pi",
                 "gamma0 = " + std::to_string(s.gamma0) +
                     " >= K breaks the finite beta-process prior");
  std::vector<std::int64_t> mask_total(K, 0);
  for (std::int32_t k = 0; k < K; ++k) {
    for (std::int32_t j = 0; j < s.J; ++j)
      mask_total[k] += s.b_active[static_cast<std::size_t>(j) * K + k];
    s.pi_topic[k] = sample_beta(
        pi_a + static_cast<double>(mask_total[k]),
        pi_b + static_cast<double>(s.J - mask_total[k]), rng);
  }

  // CRT/gamma0 layer on the active entries (n_jk > 0 implies b_jk = 1)
  std::vector<std::int64_t> l_dot_k, l_dot_j;
  crt_layer(s, /*shape_is_topic=*/true, rng, l_dot_k, l_dot_j);

  std::int64_t lprime_total = 0;
  double Sq = 0.0;
  std::vector<double> t_topic(K);
  for (std::int32_t k = 0; k < K; ++k) {
    t_topic[k] = -static_cast<double>(mask_total[k]) * log1mp;
    s.aug_lprime_k[k] = static_cast<std::int32_t>(
        sample_crt(l_dot_k[k], s.gamma0 / K, rng));
    lprime_total += s.aug_lprime_k[k];
    Sq += std::log1p(t_topic[k] / hp.c);
  }
  s.gamma0 =
      sample_gamma(hp.e0 + static_cast<double>(lprime_total),
                   1.0 / (hp.f0 + Sq / static_cast<double>(K)), rng);

  for (std::int32_t k = 0; k < K; ++k)
    s.r_topic[k] = sample_gamma(s.gamma0 / K + static_cast<double>(l_dot_k[k]),
                                1.0 / (hp.c + t_topic[k]), rng);

  for (std::int32_t j = 0; j < s.J; ++j)
    for (std::int32_t k = 0; k < K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(j) * K + k;
      s.theta[idx] =
          s.b_active[idx]
              ? sample_gamma(s.r_topic[k] + s.n_jk[idx], pj, rng)
              : 0.0;
    }

  resample_phi(s, hp.eta, rng);
}

// Dir-PFA baseline: topic proportions from a fixed-alpha Dirichlet
void params_dir_pfa(ModelState& s, const Hyperparams& hp, RngStream& rng) {
  const std::int32_t K = s.K;
  std::vector<double> alpha(K), row(K);
  for (std::int32_t j = 0; j < s.J; ++j) {
    for (std::int32_t k = 0; k < K; ++k)
      alpha[k] = s.lda_alpha / K +
                 s.n_jk[static_cast<std::size_t>(j) * K + k];
    sample_dirichlet(alpha, row, rng);
    for (std::int32_t k = 0; k < K; ++k)
      s.theta[static_cast<std::size_t>(j) * K + k] = row[k];
  }
  resample_phi(s, hp.eta, rng);
}

}  // namespace

ModelState init_state(const SparseCountMatrix& data, const ModelSpec& spec,
                      RngStream& rng) {
  spec.hp.validate();
  ModelState s;
  s.variant = spec.variant;
  s.lda_alpha = spec.lda_alpha;
  s.V = data.vocab_size();
  s.J = data.num_docs();
  s.K = spec.hp.K;
  const std::int32_t K = s.K;

  s.doc_begin.assign(s.J + 1, 0);
  for (std::int32_t j = 0; j < s.J; ++j)
    s.doc_begin[j + 1] = s.doc_begin[j] + data.doc_total(j);
  s.token_term.resize(s.doc_begin[s.J]);
  for (std::int32_t j = 0; j < s.J; ++j) {
    std::int64_t t = s.doc_begin[j];
    for (const auto& [term, count] : data.doc(j))
      for (std::int32_t i = 0; i < count; ++i) s.token_term[t++] = term;
  }

  s.z.resize(s.token_term.size());
  for (auto& zz : s.z) zz = static_cast<std::int32_t>(rng.bounded(K));

  s.n_vk.assign(static_cast<std::size_t>(s.V) * K, 0);
  s.n_jk.assign(static_cast<std::size_t>(s.J) * K, 0);
  s.n_k.assign(K, 0);
  s.recount_from_z();

  s.phi.assign(static_cast<std::size_t>(s.V) * K, 0.0);
  {
    std::vector<double> alpha(s.V, spec.hp.eta), col(s.V);
    for (std::int32_t k = 0; k < K; ++k) {
      sample_dirichlet(alpha, col, rng);
      for (std::int32_t v = 0; v < s.V; ++v)
        s.phi[static_cast<std::size_t>(v) * K + k] = col[v];
    }
  }
  s.theta.assign(static_cast<std::size_t>(s.J) * K, 1.0);

  const double r_pin = kWarmupMass / K;
  if (variant_has_r_topic(s.variant)) s.r_topic.assign(K, r_pin);
  if (variant_has_r_doc(s.variant)) s.r_doc.assign(s.J, r_pin);
  if (variant_has_p_topic(s.variant)) s.p_topic.assign(K, kPinnedP);
  if (variant_has_p_doc(s.variant)) s.p_doc.assign(s.J, kPinnedP);
  s.p_shared = kPinnedP;
  s.gamma0 = 1.0;
  if (s.variant == Variant::kNbFtm) {
    s.pi_topic.assign(K, 0.5);
    s.b_active.assign(static_cast<std::size_t>(s.J) * K, 1);
  }

  s.aug_l_jk.assign(static_cast<std::size_t>(s.J) * K, 0);
  s.aug_lprime_k.assign(K, 0);
  s.aug_lprime_j.assign(s.J, 0);
  return s;
}

void pinned_sweep(ModelState& s, const ModelSpec& spec, RngStream& rng) {
  try {
    resample_z(s, rng);
    const double r_pin = kWarmupMass / s.K;
    for (std::int32_t j = 0; j < s.J; ++j)
      for (std::int32_t k = 0; k < s.K; ++k) {
        const std::size_t idx = static_cast<std::size_t>(j) * s.K + k;
        s.theta[idx] = sample_gamma(r_pin + s.n_jk[idx], kPinnedP, rng);
      }
    resample_phi(s, spec.hp.eta, rng);
  } catch (const std::domain_error& e) {
    fail_numeric(s, "warmup", e.what());
  }
}

void update_params(ModelState& s, const ModelSpec& spec, RngStream& rng) {
  try {
    switch (s.variant) {
      case Variant::kNb:
        params_nb(s, spec.hp, rng);
        break;
      case Variant::kNbLda:
        params_nb_lda(s, spec.hp, rng);
        break;
      case Variant::kNbHdp:
        params_gamma_nb(s, spec.hp, /*update_p=*/false, rng);
        break;
      case Variant::kNbFtm:
        params_nb_ftm(s, spec.hp, rng);
        break;
      case Variant::kBetaGeometric:
        params_beta_geometric(s, spec.hp, rng);
        break;
      case Variant::kBetaNb:
        params_beta_nb(s, spec.hp, rng);
        break;
      case Variant::kGammaNb:
        params_gamma_nb(s, spec.hp, /*update_p=*/true, rng);
        break;
      case Variant::kMarkedBetaNb:
        params_marked_beta_nb(s, spec.hp, rng);
        break;
      case Variant::kDirPfa:
        params_dir_pfa(s, spec.hp, rng);
        break;
    }
  } catch (const std::domain_error& e) {
    fail_numeric(s, "params", e.what());
  }
}

void sweep_variant(ModelState& s, const ModelSpec& spec, RngStream& rng) {
  resample_z(s, rng);
  update_params(s, spec, rng);
}

void sweep(ModelState& s, const ModelSpec& spec, RngStream& rng) {
  if (s.variant != Variant::kGammaNb)
    throw std::logic_error("sweep() is the gamma-NB block; use sweep_variant");
  sweep_variant(s, spec, rng);
}

double ftm_mask_posterior(double pi, double r, double p) {
  const double on = pi * std::exp(r * std::log1p(-p));
  return on / (on + 1.0 - pi);
}

ModelState init_schedule(const SparseCountMatrix& data, const ModelSpec& spec,
                         std::int32_t warmup, RngStream& rng) {
  ModelState s = init_state(data, spec, rng);
  for (std::int32_t i = 0; i < warmup; ++i) pinned_sweep(s, spec, rng);
  update_params(s, spec, rng);  // unpin: every free parameter resampled once
  return s;
}

std::vector<double> predictive_weights(const ModelState& s, std::int32_t j) {
  const std::int32_t K = s.K;
  std::vector<double> w(K + 1, 0.0);
  const auto njk = [&](std::int32_t k) {
    return static_cast<double>(s.n_jk[static_cast<std::size_t>(j) * K + k]);
  };
  switch (s.variant) {
    case Variant::kNb:
      // one measure pooled across groups: E[G | -] per atom
      for (std::int32_t k = 0; k < K; ++k)
        w[k] = s.gamma0 / K + static_cast<double>(s.n_k[k]);
      break;
    case Variant::kNbLda:
      for (std::int32_t k = 0; k < K; ++k) w[k] = s.r_doc[j] + njk(k);
      break;
    case Variant::kNbHdp:
    case Variant::kGammaNb:
      for (std::int32_t k = 0; k < K; ++k) w[k] = s.r_topic[k] + njk(k);
      break;
    case Variant::kNbFtm:
      for (std::int32_t k = 0; k < K; ++k)
        w[k] = s.r_topic[k] * s.b_active[static_cast<std::size_t>(j) * K + k] +
               njk(k);
      break;
    case Variant::kBetaGeometric:
      for (std::int32_t k = 0; k < K; ++k)
        w[k] = (1.0 + njk(k)) * s.p_topic[k];
      break;
    case Variant::kBetaNb:
      for (std::int32_t k = 0; k < K; ++k)
        w[k] = (s.r_doc[j] + njk(k)) * s.p_topic[k];
      break;
    case Variant::kMarkedBetaNb:
      for (std::int32_t k = 0; k < K; ++k)
        w[k] = (s.r_topic[k] + njk(k)) * s.p_topic[k];
      break;
    case Variant::kDirPfa:
      for (std::int32_t k = 0; k < K; ++k) w[k] = s.lda_alpha / K + njk(k);
      break;
  }
  return w;  // w[K] = 0: no continuous remainder under finite truncation
}

}  // namespace nbp
