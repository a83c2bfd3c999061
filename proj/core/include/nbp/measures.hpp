#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nbp/corpus.hpp"
#include "nbp/model.hpp"
#include "nbp/rng.hpp"

namespace nbp {

// Finite truncation of a completely random measure: K atoms on the
// V-simplex, a weight per atom (r_k for gamma-type, p_k in (0,1) for
// beta-type) and, for marked processes, a second weight array.
struct TruncatedMeasure {
  std::int32_t K = 0;
  std::int32_t V = 0;
  std::vector<double> weights;        // K
  std::vector<double> marks;          // K or empty
  std::vector<std::vector<double>> atoms;  // K simplex vectors of length V
};

/// gamma process truncated to K atoms: r_k ~ Gamma(gamma0/K, 1/c) iid with
/// atoms from Dir(eta, ..., eta); the total mass is Gamma(gamma0, 1/c)
TruncatedMeasure draw_gamma_process(double gamma0, double c, std::int32_t K,
                                    std::int32_t V, double eta,
                                    RngStream& rng);

/// beta process truncated to K atoms: p_k ~ Beta(c gamma0/K, c(1 - gamma0/K))
/// iid, preserving E[sum_k p_k] ~ gamma0; requires gamma0 < K
TruncatedMeasure draw_beta_process(double gamma0, double c, std::int32_t K,
                                   std::int32_t V, double eta, RngStream& rng);

/// one NB process draw: K+ ~ Pois(-gamma0 ln(1-p)) atoms, each carrying a
/// Log(p) count and a Dir(eta) atom; the total count is marginally
/// NB(gamma0, p)
std::vector<std::pair<std::vector<double>, std::int64_t>> draw_nb_process(
    double gamma0, double p, std::int32_t V, double eta, RngStream& rng);

// Synthetic corpus with the generating state snapshot kept as ground truth.
struct SyntheticCorpus {
  SparseCountMatrix counts;
  Variant variant = Variant::kGammaNb;
  std::uint64_t truth_seed = 0;
  std::vector<std::vector<double>> topics;  // K rows of length V (phi_k)
  std::vector<double> r_topic, r_doc, p_topic, p_doc, pi_topic;
  double p_shared = 0.0;
  double gamma0 = 0.0;
  std::vector<std::int64_t> n_jk;  // J*K latent per-document topic counts
};

/// Draws the variant's (r, p, pi) parameters from the truth stream, then
/// theta_jk, n_jk ~ Pois(theta_jk) and term allocations via phi_k per
/// document. Document-level randomness runs on per-document substreams of
/// `rng`, so generation order cannot change the corpus.
SyntheticCorpus simulate_corpus(const ModelSpec& spec, std::int32_t V,
                                std::int32_t J, std::uint64_t truth_seed,
                                RngStream& rng);

}  // namespace nbp
