#include "nbp/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "nbp/distributions.hpp"

namespace nbp {

namespace {

std::vector<std::vector<double>> draw_atoms(std::int32_t K, std::int32_t V,
                                            double eta, RngStream& rng) {
  std::vector<double> alpha(V, eta);
  std::vector<std::vector<double>> atoms(K);
  for (std::int32_t k = 0; k < K; ++k)
    atoms[k] = sample_dirichlet(alpha, rng);
  return atoms;
}

void check_measure_args(double gamma0, double c, std::int32_t K,
                        std::int32_t V, double eta) {
  if (!(gamma0 > 0.0)) throw std::domain_error("total mass gamma0 must be positive");
  if (!(c > 0.0)) throw std::domain_error("concentration c must be positive");
  if (!(eta > 0.0)) throw std::domain_error("base Dirichlet eta must be positive");
  if (K < 1 || V < 1) throw std::domain_error("K and V must be >= 1");
}

}  // namespace

TruncatedMeasure draw_gamma_process(double gamma0, double c, std::int32_t K,
                                    std::int32_t V, double eta,
                                    RngStream& rng) {
  check_measure_args(gamma0, c, K, V, eta);
  TruncatedMeasure g;
  g.K = K;
  g.V = V;
  g.weights.resize(K);
  for (std::int32_t k = 0; k < K; ++k)
    g.weights[k] = sample_gamma(gamma0 / K, 1.0 / c, rng);
  g.atoms = draw_atoms(K, V, eta, rng);
  return g;
}

TruncatedMeasure draw_beta_process(double gamma0, double c, std::int32_t K,
                                   std::int32_t V, double eta,
                                   RngStream& rng) {
  check_measure_args(gamma0, c, K, V, eta);
  if (!(gamma0 < static_cast<double>(K)))
    throw std::domain_error(
        "beta process truncation needs gamma0 < K (per-atom mass below 1)");
  TruncatedMeasure b;
  b.K = K;
  b.V = V;
  b.weights.resize(K);
  for (std::int32_t k = 0; k < K; ++k)
    b.weights[k] =
        sample_beta(c * gamma0 / K, c * (1.0 - gamma0 / K), rng);
  b.atoms = draw_atoms(K, V, eta, rng);
  return b;
}

std::vector<std::pair<std::vector<double>, std::int64_t>> draw_nb_process(
    double gamma0, double p, std::int32_t V, double eta, RngStream& rng) {
  if (!(gamma0 > 0.0)) throw std::domain_error("gamma0 must be positive");
  if (!(p > 0.0) || !(p < 1.0)) throw std::domain_error("p outside (0,1)");
  const std::int64_t k_plus =
      sample_poisson(-gamma0 * std::log1p(-p), rng);
  std::vector<double> alpha(V, eta);
  std::vector<std::pair<std::vector<double>, std::int64_t>> draw;
  draw.reserve(k_plus);
  for (std::int64_t k = 0; k < k_plus; ++k) {
    const std::int64_t count = sample_log(p, rng);
    draw.emplace_back(sample_dirichlet(alpha, rng), count);
  }
  return draw;
}

SyntheticCorpus simulate_corpus(const ModelSpec& spec, std::int32_t V,
                                std::int32_t J, std::uint64_t truth_seed,
                                RngStream& rng) {
  spec.hp.validate();
  if (V < 1 || J < 1) throw std::invalid_argument("V and J must be >= 1");
  const Hyperparams& hp = spec.hp;
  const std::int32_t K = hp.K;
  const auto Jd = static_cast<double>(J);

  RngStream truth(truth_seed, streams::id(streams::kSimTruth, 0));

  SyntheticCorpus corpus;
  corpus.variant = spec.variant;
  corpus.truth_seed = truth_seed;
  corpus.gamma0 = sample_gamma(hp.e0, 1.0 / hp.f0, truth);

  // topic-level truth, k-order
  switch (spec.variant) {
    case Variant::kNb:
      corpus.p_shared = clamp_prob(sample_beta(hp.a0, hp.b0, truth));
      corpus.r_topic.resize(K);
      for (auto& r : corpus.r_topic)
        r = sample_gamma(corpus.gamma0 / K,
                         corpus.p_shared / (Jd * (1.0 - corpus.p_shared)),
                         truth);
      break;
    case Variant::kNbHdp:
    case Variant::kGammaNb:
      corpus.r_topic.resize(K);
      for (auto& r : corpus.r_topic)
        r = sample_gamma(corpus.gamma0 / K, 1.0 / hp.c, truth);
      break;
    case Variant::kNbFtm:
      if (!(corpus.gamma0 < static_cast<double>(K)))
        throw std::runtime_error(
            "simulated gamma0 >= K: the finite beta-process prior for pi_k "
            "needs gamma0 < K");
      corpus.r_topic.resize(K);
      for (auto& r : corpus.r_topic)
        r = sample_gamma(corpus.gamma0 / K, 1.0 / hp.c, truth);
      corpus.pi_topic.resize(K);
      for (auto& pi : corpus.pi_topic)
        pi = sample_beta(hp.c_beta * corpus.gamma0 / K,
                         hp.c_beta * (1.0 - corpus.gamma0 / K), truth);
      break;
    case Variant::kBetaGeometric:
      corpus.p_topic.resize(K);
      for (auto& p : corpus.p_topic)
        p = clamp_prob(sample_beta(hp.a0, hp.b0, truth));
      break;
    case Variant::kBetaNb:
      corpus.p_topic.resize(K);
      for (auto& p : corpus.p_topic)
        p = clamp_prob(sample_beta(hp.a0, hp.b0, truth));
      break;
    case Variant::kMarkedBetaNb:
      corpus.r_topic.resize(K);
      for (auto& r : corpus.r_topic)
        r = sample_gamma(corpus.gamma0 / K, 1.0 / hp.c, truth);
      corpus.p_topic.resize(K);
      for (auto& p : corpus.p_topic)
        p = clamp_prob(sample_beta(hp.a0, hp.b0, truth));
      break;
    case Variant::kNbLda:  // document-level parameters only
    case Variant::kDirPfa:
      break;
  }

  // document-level truth, j-order
  if (variant_has_r_doc(spec.variant)) {
    corpus.r_doc.resize(J);
    for (auto& r : corpus.r_doc)
      r = sample_gamma(corpus.gamma0, 1.0 / hp.c, truth);
  }
  if (spec.variant == Variant::kNbLda || spec.variant == Variant::kGammaNb) {
    corpus.p_doc.resize(J);
    for (auto& p : corpus.p_doc)
      p = clamp_prob(sample_beta(hp.a0, hp.b0, truth));
  } else if (spec.variant == Variant::kNbHdp ||
             spec.variant == Variant::kNbFtm) {
    corpus.p_doc.assign(J, 0.5);
  }

  {
    std::vector<double> alpha(V, hp.eta);
    corpus.topics.resize(K);
    for (std::int32_t k = 0; k < K; ++k)
      corpus.topics[k] = sample_dirichlet(alpha, truth);
  }

  // counts: per-document substreams keyed off the caller's stream
  const std::uint64_t count_seed = rng.next_u64();
  corpus.counts = SparseCountMatrix(V, J);
  corpus.n_jk.assign(static_cast<std::size_t>(J) * K, 0);

  std::vector<std::int32_t> term_count(V);
  for (std::int32_t j = 0; j < J; ++j) {
    RngStream doc_rng(count_seed, streams::id(streams::kSimDoc, j));
    std::fill(term_count.begin(), term_count.end(), 0);
    for (std::int32_t k = 0; k < K; ++k) {
      double theta = 0.0;
      switch (spec.variant) {
        case Variant::kNb:
          theta = corpus.r_topic[k];
          break;
        case Variant::kNbLda:
          theta = sample_gamma(
              corpus.r_doc[j],
              corpus.p_doc[j] / (1.0 - corpus.p_doc[j]), doc_rng);
          break;
        case Variant::kNbHdp:
        case Variant::kGammaNb:
          theta = sample_gamma(
              corpus.r_topic[k],
              corpus.p_doc[j] / (1.0 - corpus.p_doc[j]), doc_rng);
          break;
        case Variant::kNbFtm:
          theta = sample_bernoulli(corpus.pi_topic[k], doc_rng)
                      ? sample_gamma(corpus.r_topic[k], 1.0, doc_rng)
                      : 0.0;
          break;
        case Variant::kBetaGeometric:
          theta = sample_gamma(
              1.0, corpus.p_topic[k] / (1.0 - corpus.p_topic[k]), doc_rng);
          break;
        case Variant::kBetaNb:
          theta = sample_gamma(
              corpus.r_doc[j],
              corpus.p_topic[k] / (1.0 - corpus.p_topic[k]), doc_rng);
          break;
        case Variant::kMarkedBetaNb:
          theta = sample_gamma(
              corpus.r_topic[k],
              corpus.p_topic[k] / (1.0 - corpus.p_topic[k]), doc_rng);
          break;
        case Variant::kDirPfa:
          theta = sample_gamma(spec.lda_alpha / K, 1.0, doc_rng);
          break;
      }
      const std::int64_t n = theta > 0.0 ? sample_poisson(theta, doc_rng) : 0;
      corpus.n_jk[static_cast<std::size_t>(j) * K + k] = n;
      for (std::int64_t t = 0; t < n; ++t)
        ++term_count[sample_categorical(corpus.topics[k], doc_rng)];
    }
    for (std::int32_t v = 0; v < V; ++v)
      if (term_count[v] > 0) corpus.counts.add(j, v, term_count[v]);
  }
  return corpus;
}

}  // namespace nbp
