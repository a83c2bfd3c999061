#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nbp/rng.hpp"
#include "nbp/stirling.hpp"

namespace nbp {

// ---------------------------------------------------------------------------
// log PMFs
// ---------------------------------------------------------------------------

/// log NB(m; r, p) = log[ Gamma(r+m) / (m! Gamma(r)) (1-p)^r p^m ]
double nb_log_pmf(std::int64_t m, double r, double p);

/// log Pois(m; lambda)
double poisson_log_pmf(std::int64_t m, double lambda);

/// log Log(k; p) = log[ -p^k / (k ln(1-p)) ], support k >= 1
double logarithmic_log_pmf(std::int64_t k, double p);

/// log CRT(l; m, r) = log[ Gamma(r)/Gamma(m+r) |s(m,l)| r^l ]
double crt_log_pmf(std::int64_t l, std::int64_t m, double r,
                   const StirlingTable& table);

/// log PoisLog(m, l; r, p) = log[ |s(m,l)| r^l / m! (1-p)^r p^m ]
double poislog_log_pmf(std::int64_t m, std::int64_t l, double r, double p,
                       const StirlingTable& table);

/// log SumLog(m; l, p) = log[ p^m l! |s(m,l)| / (m! (-ln(1-p))^l) ],
/// the law of a sum of l iid Log(p) variables
double sumlog_log_pmf(std::int64_t m, std::int64_t l, double p,
                      const StirlingTable& table);

// ---------------------------------------------------------------------------
// samplers (all pure functions of their parameters and the stream state)
// ---------------------------------------------------------------------------

double sample_normal(RngStream& rng);

/// Marsaglia-Tsang; shape < 1 handled by the boost-by-one draw times
/// u^(1/shape). Draws are floored at the smallest positive normal double so
/// callers can rely on strict positivity.
double sample_gamma(double shape, double scale, RngStream& rng);

double sample_beta(double a, double b, RngStream& rng);

void sample_dirichlet(std::span<const double> alpha, std::span<double> out,
                      RngStream& rng);
std::vector<double> sample_dirichlet(std::span<const double> alpha,
                                     RngStream& rng);

/// inverse-CDF over the running sum with a single uniform; if rounding walks
/// the cursor past the total, the last positive-weight index is returned
std::size_t sample_categorical(std::span<const double> weights, RngStream& rng);

std::int64_t sample_poisson(double lambda, RngStream& rng);

bool sample_bernoulli(double p, RngStream& rng);

/// NB(r, p) via its gamma-Poisson mixture: lambda ~ Gamma(r, p/(1-p)),
/// m ~ Pois(lambda)
std::int64_t sample_nb(double r, double p, RngStream& rng);

/// Log(p) by inverse CDF (sequential search), support k >= 1
std::int64_t sample_log(double p, RngStream& rng);

/// CRT(m, r) as the exact O(m) Bernoulli sum l = sum_n Bern(r/(n-1+r))
std::int64_t sample_crt(std::int64_t m, double r, RngStream& rng);

/// sum of l iid Log(p) draws; 0 iff l = 0
std::int64_t sample_sumlog(std::int64_t l, double p, RngStream& rng);

/// n independent categorical draws accumulated per cell
void sample_multinomial(std::int64_t n, std::span<const double> weights,
                        std::span<std::int64_t> out, RngStream& rng);

// Log(p) sampler with an extendable cached CDF; reusing one instance across
// draws with the same p amortizes the tail walk within a sweep.
class LogSampler {
public:
  explicit LogSampler(double p);
  std::int64_t operator()(RngStream& rng);
  double p() const { return p_; }

private:
  void extend();
  double p_;
  double pmf_tail_;            // PMF at k = cdf_.size()
  std::vector<double> cdf_;    // cdf_[i] = P(K <= i+1)
};

// ---------------------------------------------------------------------------
// probability clamp
// ---------------------------------------------------------------------------

// Probability parameters are clamped to [kProbEps, 1-kProbEps] before any
// log(1-p); beta draws can hit the boundary in floating point. Every clamp is
// counted (per thread) so runs can surface boundary pressure in their
// diagnostics.
inline constexpr double kProbEps = 1e-12;

double clamp_prob(double p) noexcept;
std::uint64_t clamp_prob_events() noexcept;
void reset_clamp_prob_events() noexcept;

}  // namespace nbp
