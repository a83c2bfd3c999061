#include "nbp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nbp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTinyPositive = std::numeric_limits<double>::min();

// per-thread so concurrent chains account their own boundary hits
thread_local std::uint64_t g_clamp_events = 0;

void check_prob(double p, const char* who) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error(std::string(who) + ": p = " + std::to_string(p) +
                            " outside (0,1)");
}

void check_positive(double x, const char* who, const char* name) {
  if (!(x > 0.0))
    throw std::domain_error(std::string(who) + ": " + name + " = " +
                            std::to_string(x) + " must be positive");
}

void check_count(std::int64_t m, const char* who) {
  if (m < 0)
    throw std::invalid_argument(std::string(who) + ": negative count " +
                                std::to_string(m));
}

}  // namespace

// ---------------------------------------------------------------------------
// log PMFs
// ---------------------------------------------------------------------------

double nb_log_pmf(std::int64_t m, double r, double p) {
  check_positive(r, "nb_log_pmf", "r");
  check_prob(p, "nb_log_pmf");
  check_count(m, "nb_log_pmf");
  const double md = static_cast<double>(m);
  return std::lgamma(r + md) - std::lgamma(md + 1.0) - std::lgamma(r) +
         r * std::log1p(-p) + md * std::log(p);
}

double poisson_log_pmf(std::int64_t m, double lambda) {
  if (lambda < 0.0)
    throw std::domain_error("poisson_log_pmf: negative rate");
  check_count(m, "poisson_log_pmf");
  if (lambda == 0.0) return m == 0 ? 0.0 : kNegInf;
  const double md = static_cast<double>(m);
  return md * std::log(lambda) - lambda - std::lgamma(md + 1.0);
}

double logarithmic_log_pmf(std::int64_t k, double p) {
  check_prob(p, "logarithmic_log_pmf");
  if (k < 1) return kNegInf;
  const double kd = static_cast<double>(k);
  return kd * std::log(p) - std::log(kd) - std::log(-std::log1p(-p));
}

double crt_log_pmf(std::int64_t l, std::int64_t m, double r,
                   const StirlingTable& table) {
  check_positive(r, "crt_log_pmf", "r");
  check_count(m, "crt_log_pmf");
  check_count(l, "crt_log_pmf");
  if (l > m) return kNegInf;
  const double md = static_cast<double>(m);
  const double ld = static_cast<double>(l);
  return std::lgamma(r) - std::lgamma(md + r) +
         table.log_s(static_cast<std::size_t>(m), static_cast<std::size_t>(l)) +
         ld * std::log(r);
}

double poislog_log_pmf(std::int64_t m, std::int64_t l, double r, double p,
                       const StirlingTable& table) {
  check_positive(r, "poislog_log_pmf", "r");
  check_prob(p, "poislog_log_pmf");
  check_count(m, "poislog_log_pmf");
  check_count(l, "poislog_log_pmf");
  if (l > m) return kNegInf;
  const double md = static_cast<double>(m);
  const double ld = static_cast<double>(l);
  return table.log_s(static_cast<std::size_t>(m), static_cast<std::size_t>(l)) +
         ld * std::log(r) - std::lgamma(md + 1.0) + r * std::log1p(-p) +
         md * std::log(p);
}

double sumlog_log_pmf(std::int64_t m, std::int64_t l, double p,
                      const StirlingTable& table) {
  check_prob(p, "sumlog_log_pmf");
  check_count(m, "sumlog_log_pmf");
  check_count(l, "sumlog_log_pmf");
  if (l == 0) return m == 0 ? 0.0 : kNegInf;
  if (m < l) return kNegInf;
  const double md = static_cast<double>(m);
  const double ld = static_cast<double>(l);
  return md * std::log(p) + std::lgamma(ld + 1.0) +
         table.log_s(static_cast<std::size_t>(m), static_cast<std::size_t>(l)) -
         std::lgamma(md + 1.0) - ld * std::log(-std::log1p(-p));
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

double sample_normal(RngStream& rng) {
  // Marsaglia polar; the spare value is discarded to keep draws stateless
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_gamma(double shape, double scale, RngStream& rng) {
  check_positive(shape, "sample_gamma", "shape");
  check_positive(scale, "sample_gamma", "scale");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    const double u = rng.uniform_pos();
    const double x = g * std::pow(u, 1.0 / shape) * scale;
    return std::max(x, kTinyPositive);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2)
      return std::max(d * v * scale, kTinyPositive);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return std::max(d * v * scale, kTinyPositive);
  }
}

double sample_beta(double a, double b, RngStream& rng) {
  check_positive(a, "sample_beta", "a");
  check_positive(b, "sample_beta", "b");
  const double x = sample_gamma(a, 1.0, rng);
  const double y = sample_gamma(b, 1.0, rng);
  return x / (x + y);
}

void sample_dirichlet(std::span<const double> alpha, std::span<double> out,
                      RngStream& rng) {
  if (alpha.size() != out.size())
    throw std::invalid_argument("sample_dirichlet: size mismatch");
  if (alpha.empty()) throw std::invalid_argument("sample_dirichlet: empty alpha");
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = sample_gamma(alpha[i], 1.0, rng);
    total += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= total;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha,
                                     RngStream& rng) {
  std::vector<double> out(alpha.size());
  sample_dirichlet(alpha, out, rng);
  return out;
}

std::size_t sample_categorical(std::span<const double> weights,
                               RngStream& rng) {
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0))
      throw std::domain_error("sample_categorical: negative or NaN weight");
    total += w;
  }
  if (!(total > 0.0))
    throw std::domain_error("sample_categorical: weights sum to zero");
  const double target = rng.uniform() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    cum += weights[i];
    if (target < cum) return i;
  }
  return last_positive;
}

std::int64_t sample_poisson(double lambda, RngStream& rng) {
  if (lambda < 0.0 || !std::isfinite(lambda))
    throw std::domain_error("sample_poisson: bad rate " + std::to_string(lambda));
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) {
    // Knuth product-of-uniforms
    const double floor_p = std::exp(-lambda);
    std::int64_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= rng.uniform_pos();
    } while (prod > floor_p);
    return k - 1;
  }
  // Hormann's PTRS transformed rejection
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lambda + kd * loglam - std::lgamma(kd + 1.0))
      return static_cast<std::int64_t>(kd);
  }
}

bool sample_bernoulli(double p, RngStream& rng) { return rng.uniform() < p; }

std::int64_t sample_nb(double r, double p, RngStream& rng) {
  check_positive(r, "sample_nb", "r");
  check_prob(p, "sample_nb");
  const double lambda = sample_gamma(r, p / (1.0 - p), rng);
  return sample_poisson(lambda, rng);
}

std::int64_t sample_log(double p, RngStream& rng) {
  check_prob(p, "sample_log");
  const double u = rng.uniform();
  double pmf = -p / std::log1p(-p);  // P(K = 1)
  double cdf = pmf;
  std::int64_t k = 1;
  while (u >= cdf) {
    const double next = pmf * p * static_cast<double>(k) /
                        static_cast<double>(k + 1);
    if (!(next > 0.0)) break;  // tail underflow: keep the last reachable k
    pmf = next;
    ++k;
    cdf += pmf;
  }
  return k;
}

std::int64_t sample_crt(std::int64_t m, double r, RngStream& rng) {
  check_positive(r, "sample_crt", "r");
  check_count(m, "sample_crt");
  std::int64_t l = 0;
  for (std::int64_t n = 1; n <= m; ++n) {
    const double denom = static_cast<double>(n - 1) + r;
    if (rng.uniform() * denom < r) ++l;
  }
  return l;
}

std::int64_t sample_sumlog(std::int64_t l, double p, RngStream& rng) {
  check_count(l, "sample_sumlog");
  std::int64_t m = 0;
  for (std::int64_t t = 0; t < l; ++t) m += sample_log(p, rng);
  return m;
}

void sample_multinomial(std::int64_t n, std::span<const double> weights,
                        std::span<std::int64_t> out, RngStream& rng) {
  if (weights.size() != out.size())
    throw std::invalid_argument("sample_multinomial: size mismatch");
  check_count(n, "sample_multinomial");
  std::fill(out.begin(), out.end(), std::int64_t{0});
  for (std::int64_t i = 0; i < n; ++i) ++out[sample_categorical(weights, rng)];
}

LogSampler::LogSampler(double p) : p_(p) {
  check_prob(p, "LogSampler");
  pmf_tail_ = -p / std::log1p(-p);
  cdf_.push_back(pmf_tail_);
}

void LogSampler::extend() {
  const auto k = static_cast<double>(cdf_.size());
  pmf_tail_ *= p_ * k / (k + 1.0);
  cdf_.push_back(cdf_.back() + pmf_tail_);
}

std::int64_t LogSampler::operator()(RngStream& rng) {
  const double u = rng.uniform();
  while (u >= cdf_.back()) {
    const double before = cdf_.back();
    extend();
    if (!(cdf_.back() > before)) return static_cast<std::int64_t>(cdf_.size());
  }
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::int64_t>(it - cdf_.begin()) + 1;
}

// ---------------------------------------------------------------------------
// probability clamp
// ---------------------------------------------------------------------------

double clamp_prob(double p) noexcept {
  if (p < kProbEps) {
    ++g_clamp_events;
    return kProbEps;
  }
  if (p > 1.0 - kProbEps) {
    ++g_clamp_events;
    return 1.0 - kProbEps;
  }
  return p;
}

std::uint64_t clamp_prob_events() noexcept { return g_clamp_events; }

void reset_clamp_prob_events() noexcept { g_clamp_events = 0; }

}  // namespace nbp
