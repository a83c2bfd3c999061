#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nbp/corpus.hpp"
#include "nbp/distributions.hpp"
#include "nbp/model.hpp"

namespace nbp {

// Raised when a sweep hits a numerically impossible posterior (for example a
// mixing probability leaving (0,1)). The sweep aborts loudly instead of
// repairing shapes in place; `snapshot` carries a JSON summary of the state
// at the failure point.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& msg, std::string snapshot_json)
      : std::runtime_error(msg), snapshot(std::move(snapshot_json)) {}
  std::string snapshot;
};

/// fresh chain state: z uniform at random, topics from Dir(eta), theta = 1,
/// r and p pinned at the warm-up values (r = 50/K, p = 0.5)
ModelState init_state(const SparseCountMatrix& data, const ModelSpec& spec,
                      RngStream& rng);

/// warm-up iteration: z and counts, theta ~ Gamma(50/K + n_jk, 0.5),
/// phi ~ Dir(eta + counts); dispersion and probability parameters stay pinned
void pinned_sweep(ModelState& state, const ModelSpec& spec, RngStream& rng);

/// one systematic-scan block update of every latent variable of the
/// gamma-NB process, in the order z, l_jk, l'_k, p_j, gamma0, r_k,
/// theta_jk, phi_k. Requires state.variant == kGammaNb.
void sweep(ModelState& state, const ModelSpec& spec, RngStream& rng);

/// full sweep for any variant (gamma-NB included); same contract as sweep
void sweep_variant(ModelState& state, const ModelSpec& spec, RngStream& rng);

/// variant parameter block only (everything after the z/count pass); used to
/// unpin a warmed-up state before the first real sweep
void update_params(ModelState& state, const ModelSpec& spec, RngStream& rng);

/// init_state, `warmup` pinned sweeps, then one parameter pass of the target
/// variant so all pinned values have been resampled
ModelState init_schedule(const SparseCountMatrix& data, const ModelSpec& spec,
                         std::int32_t warmup, RngStream& rng);

/// unnormalized next-token weights for group j, one slot per atom plus a
/// trailing slot for the continuous remainder (zero under finite truncation)
std::vector<double> predictive_weights(const ModelState& state,
                                       std::int32_t j);

/// zero-inflation mask posterior at n_jk = 0:
/// P(b = 1 | -) = pi (1-p)^r / (pi (1-p)^r + 1 - pi)
double ftm_mask_posterior(double pi, double r, double p);

inline constexpr std::int32_t kWarmupSweeps = 50;
inline constexpr double kWarmupMass = 50.0;  // pinned r_k = 50/K
inline constexpr double kPinnedP = 0.5;

}  // namespace nbp
