#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/corpus.hpp"

namespace nbp {

// The nine model variants. They share the token assignment and topic updates
// and differ in how the gamma priors of theta_jk (and hence the NB priors of
// the latent counts n_jk) are put together.
enum class Variant : std::int32_t {
  kNb = 0,            // theta_jk == r_k, one shared p
  kNbLda,             // theta_jk ~ Gamma(r_j, p_j/(1-p_j))
  kNbHdp,             // gamma-NB with p_j pinned at 0.5
  kNbFtm,             // zero-inflated: theta_jk ~ Gamma(r_k b_jk, 1), p_j = 0.5
  kBetaGeometric,     // theta_jk ~ Gamma(1, p_k/(1-p_k))
  kBetaNb,            // theta_jk ~ Gamma(r_j, p_k/(1-p_k))
  kGammaNb,           // theta_jk ~ Gamma(r_k, p_j/(1-p_j))
  kMarkedBetaNb,      // theta_jk ~ Gamma(r_k, p_k/(1-p_k))
  kDirPfa,            // theta_j ~ Dir(alpha/K, ...), fixed alpha
};

Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant v);
const std::vector<Variant>& all_variants();

bool variant_has_r_topic(Variant v);
bool variant_has_r_doc(Variant v);
bool variant_has_p_topic(Variant v);
bool variant_has_p_doc(Variant v);

struct Hyperparams {
  double a0 = 0.01;  // beta prior on probability parameters
  double b0 = 0.01;
  double e0 = 0.01;  // gamma prior on gamma0
  double f0 = 0.01;
  double c = 1.0;       // gamma-process scale rate
  double c_beta = 1.0;  // beta-process concentration (pi_k prior); a distinct
                        // knob even though both are conventionally written c
  double eta = 0.05;  // topic Dirichlet
  std::int32_t K = 400;

  void validate() const;
};

struct ModelSpec {
  Variant variant = Variant::kGammaNb;
  Hyperparams hp;
  double lda_alpha = 50.0;  // Dir-PFA topic-proportion concentration
};

// All latent variables of one chain plus the derived count tensors. Tokens
// are stored doc-major in corpus entry order with counts expanded, so a
// sweep's RNG consumption is a pure function of (state, seed).
struct ModelState {
  Variant variant = Variant::kGammaNb;
  std::int32_t V = 0, J = 0, K = 0;

  std::vector<std::int32_t> token_term;  // size N
  std::vector<std::int64_t> doc_begin;   // size J+1
  std::vector<std::int32_t> z;           // size N, topic per token

  std::vector<double> phi;      // V*K, phi[v*K + k], columns on the simplex
  std::vector<double> theta;    // J*K, theta[j*K + k]
  std::vector<double> r_topic;  // K, empty unless the variant uses r_k
  std::vector<double> r_doc;    // J, empty unless the variant uses r_j
  std::vector<double> p_topic;  // K, empty unless the variant uses p_k
  std::vector<double> p_doc;    // J, empty unless the variant uses p_j
  double p_shared = 0.5;        // NB variant only
  double gamma0 = 1.0;
  double lda_alpha = 50.0;      // Dir-PFA only, copied from ModelSpec
  std::vector<double> pi_topic;        // K, NB-FTM only
  std::vector<std::uint8_t> b_active;  // J*K, NB-FTM only

  // derived counts (rebuilt from z after every assignment pass)
  std::vector<std::int32_t> n_vk;  // V*K
  std::vector<std::int32_t> n_jk;  // J*K
  std::vector<std::int64_t> n_k;   // K

  // CRT augmentation record of the most recent sweep (diagnostics and tests)
  std::vector<std::int32_t> aug_l_jk;      // J*K
  std::vector<std::int32_t> aug_lprime_k;  // K (atom-level second layer)
  std::vector<std::int32_t> aug_lprime_j;  // J (doc-level second layer)

  std::int64_t num_tokens() const {
    return static_cast<std::int64_t>(token_term.size());
  }
  std::int64_t doc_tokens(std::int32_t j) const {
    return doc_begin[j + 1] - doc_begin[j];
  }
  std::int32_t active_topics() const;

  void recount_from_z();
  /// throws std::logic_error if any count-consistency invariant is broken
  void check_counts() const;
};

}  // namespace nbp
