#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nbp/distributions.hpp"
#include "support/test_utils.hpp"

using namespace nbp;
using nbp::test::bump;
using nbp::test::moments;
using nbp::test::tv_vs_pmf;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// CRT PMF by brute-force enumeration of the 2^m sequential Bernoulli
// outcomes; independent of both the sampler and the Stirling table
double crt_pmf_bruteforce(std::int64_t l, std::int64_t m, double r) {
  double total = 0.0;
  for (std::int64_t mask = 0; mask < (1ll << m); ++mask) {
    std::int64_t tables = 0;
    double prob = 1.0;
    for (std::int64_t n = 1; n <= m; ++n) {
      const double p_new = r / (n - 1 + r);
      if (mask & (1ll << (n - 1))) {
        ++tables;
        prob *= p_new;
      } else {
        prob *= 1.0 - p_new;
      }
    }
    if (tables == l) total += prob;
  }
  return total;
}
}  // namespace

// ---------------------------------------------------------------------------
// NB PMF and sampler
// ---------------------------------------------------------------------------

TEST_CASE("nb_log_pmf closed-form anchors") {
  // m = 0 collapses to (1-p)^r
  CHECK(nb_log_pmf(0, 2.5, 0.3) == doctest::Approx(2.5 * std::log(0.7)));
  // r = 1 is geometric
  CHECK(nb_log_pmf(2, 1.0, 0.5) == doctest::Approx(std::log(0.125)));
}

TEST_CASE("nb_log_pmf matches the gamma-recurrence product oracle") {
  // Gamma(r+m)/Gamma(r) = prod_{i<m} (r+i), evaluated without lgamma
  const std::int64_t m = 7;
  const double r = 3.2, p = 0.6;
  double oracle = 0.0;
  for (std::int64_t i = 0; i < m; ++i) oracle += std::log(r + i);
  for (std::int64_t i = 2; i <= m; ++i) oracle -= std::log(static_cast<double>(i));
  oracle += r * std::log(1.0 - p) + m * std::log(p);
  CHECK(nb_log_pmf(m, r, p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("nb_log_pmf mass sums toward one") {
  double total = 0.0;
  for (std::int64_t m = 0; m <= 400; ++m) total += std::exp(nb_log_pmf(m, 3.2, 0.6));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("nb domain errors") {
  CHECK_THROWS_AS((void)nb_log_pmf(1, -1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)nb_log_pmf(1, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)nb_log_pmf(1, 1.0, 1.0), std::domain_error);
  RngStream rng(1);
  CHECK_THROWS_AS((void)sample_nb(0.0, 0.5, rng), std::domain_error);
}

TEST_CASE("sample_nb moments match r p/(1-p) and r p/(1-p)^2") {
  RngStream rng(7, streams::id(streams::kScratch, 1));
  const double r = 3.0, p = 0.4;
  std::vector<double> draws;
  draws.reserve(100000);
  for (int i = 0; i < 100000; ++i)
    draws.push_back(static_cast<double>(sample_nb(r, p, rng)));
  const auto m = moments(draws);
  const double mean_true = r * p / (1.0 - p);
  const double var_true = r * p / ((1.0 - p) * (1.0 - p));
  CHECK(std::fabs(m.mean - mean_true) <= 3.0 * m.se_mean);
  CHECK(std::fabs(m.variance - var_true) <= 3.0 * m.se_variance);
}

TEST_CASE("NB converges to Poisson as r grows") {
  RngStream rng(7, streams::id(streams::kScratch, 2));
  const double r = 1e4, lambda = 2.0;
  std::vector<std::int64_t> counts;
  for (int i = 0; i < 100000; ++i)
    bump(counts, sample_nb(r, lambda / (lambda + r), rng));
  std::vector<double> pmf(40);
  for (std::int64_t m = 0; m < 40; ++m)
    pmf[m] = std::exp(poisson_log_pmf(m, lambda));
  CHECK(tv_vs_pmf(counts, 100000, pmf) < 0.01);
}

// ---------------------------------------------------------------------------
// logarithmic distribution
// ---------------------------------------------------------------------------

TEST_CASE("logarithmic pmf anchors") {
  CHECK(std::exp(logarithmic_log_pmf(1, 0.5)) ==
        doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-12));
  // p -> 0+: all mass collapses onto k = 1
  CHECK(std::exp(logarithmic_log_pmf(1, 1e-9)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(logarithmic_log_pmf(0, 0.5) == -kInf);
}

TEST_CASE("sample_log frequencies match the pmf") {
  RngStream rng(7, streams::id(streams::kScratch, 3));
  const double p = 0.3;
  std::vector<std::int64_t> counts;
  for (int i = 0; i < 100000; ++i) bump(counts, sample_log(p, rng));
  for (std::int64_t k = 1; k <= 20; ++k) {
    const double emp = k < static_cast<std::int64_t>(counts.size())
                           ? counts[k] / 1e5
                           : 0.0;
    CHECK(std::fabs(emp - std::exp(logarithmic_log_pmf(k, p))) < 0.005);
  }
}

TEST_CASE("LogSampler agrees with sample_log draw-for-draw") {
  const double p = 0.62;
  LogSampler cached(p);
  RngStream a(123, 5), b(123, 5);
  for (int i = 0; i < 2000; ++i) CHECK(cached(a) == sample_log(p, b));
}

// ---------------------------------------------------------------------------
// CRT
// ---------------------------------------------------------------------------

TEST_CASE("sample_crt edge cases") {
  RngStream rng(7, streams::id(streams::kScratch, 4));
  CHECK(sample_crt(0, 5.0, rng) == 0);
  for (int i = 0; i < 200; ++i) CHECK(sample_crt(1, 2.5, rng) == 1);
  CHECK_THROWS_AS((void)sample_crt(3, 0.0, rng), std::domain_error);
}

TEST_CASE("sample_crt mean at (m=2, r=1) is 1.5") {
  RngStream rng(7, streams::id(streams::kScratch, 5));
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i)
    draws.push_back(static_cast<double>(sample_crt(2, 1.0, rng)));
  const auto m = moments(draws);
  CHECK(std::fabs(m.mean - 1.5) <= 3.0 * m.se_mean);
}

TEST_CASE("crt_log_pmf matches brute-force enumeration") {
  StirlingTable table(12);
  for (const double r : {0.3, 1.0, 2.7}) {
    for (std::int64_t m = 0; m <= 10; ++m) {
      for (std::int64_t l = 0; l <= m; ++l) {
        const double exact = crt_pmf_bruteforce(l, m, r);
        const double ours = std::exp(crt_log_pmf(l, m, r, table));
        CHECK(ours == doctest::Approx(exact).epsilon(1e-9));
      }
    }
  }
  // the m=3, r=1 law is (2/6, 3/6, 1/6) over l = 1,2,3
  CHECK(std::exp(crt_log_pmf(1, 3, 1.0, table)) == doctest::Approx(2.0 / 6));
  CHECK(std::exp(crt_log_pmf(2, 3, 1.0, table)) == doctest::Approx(3.0 / 6));
  CHECK(std::exp(crt_log_pmf(3, 3, 1.0, table)) == doctest::Approx(1.0 / 6));
}

TEST_CASE("crt_log_pmf at l = m reduces to Gamma(r)/Gamma(m+r) r^m") {
  StirlingTable table(40);
  for (const double r : {0.4, 5.0}) {
    const std::int64_t m = 17;
    CHECK(crt_log_pmf(m, m, r, table) ==
          doctest::Approx(std::lgamma(r) - std::lgamma(m + r) + m * std::log(r)));
  }
}

TEST_CASE("crt pmf normalizes and matches sampler frequencies") {
  StirlingTable table(50);
  for (const std::int64_t m : {0ll, 1ll, 7ll, 50ll}) {
    for (const double r : {0.2, 2.0, 30.0}) {
      double total = 0.0;
      for (std::int64_t l = 0; l <= m; ++l)
        total += std::exp(crt_log_pmf(l, m, r, table));
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  RngStream rng(7, streams::id(streams::kScratch, 6));
  std::vector<std::int64_t> counts(11, 0);
  for (int i = 0; i < 100000; ++i) ++counts[sample_crt(10, 2.0, rng)];
  for (std::int64_t l = 0; l <= 10; ++l)
    CHECK(std::fabs(counts[l] / 1e5 -
                    std::exp(crt_log_pmf(l, 10, 2.0, table))) < 0.01);
}

// ---------------------------------------------------------------------------
// bivariate Poisson-logarithmic and sum-logarithmic
// ---------------------------------------------------------------------------

TEST_CASE("poislog anchors") {
  StirlingTable table(10);
  // (m=2, l=1, r=1, p=0.5): |s|=1, r^l=1 -> 1 * 0.5 * 0.25 / 2 = 0.0625
  CHECK(poislog_log_pmf(2, 1, 1.0, 0.5, table) ==
        doctest::Approx(std::log(0.0625)).epsilon(1e-12));
  // cross-check against CRT x NB
  CHECK(poislog_log_pmf(2, 1, 1.0, 0.5, table) ==
        doctest::Approx(crt_log_pmf(1, 2, 1.0, table) + nb_log_pmf(2, 1.0, 0.5)));
  // empty count
  CHECK(poislog_log_pmf(0, 0, 3.3, 0.25, table) ==
        doctest::Approx(3.3 * std::log(0.75)));
  // sum-logarithmic route at (m=3, l=2, r=2, p=0.3)
  const double lhs = poislog_log_pmf(3, 2, 2.0, 0.3, table);
  const double rhs = sumlog_log_pmf(3, 2, 0.3, table) +
                     poisson_log_pmf(2, -2.0 * std::log1p(-0.3));
  CHECK(std::fabs(std::expm1(lhs - rhs)) <= 1e-10);
}

TEST_CASE("theorem-1 grid: all three pmf routes agree") {
  StirlingTable table(16);
  for (const double r : {0.1, 1.0, 5.0}) {
    for (const double p : {0.1, 0.5, 0.9}) {
      for (std::int64_t m = 0; m <= 15; ++m) {
        for (std::int64_t l = 0; l <= m; ++l) {
          const double joint = poislog_log_pmf(m, l, r, p, table);
          const double crt_route =
              crt_log_pmf(l, m, r, table) + nb_log_pmf(m, r, p);
          const double sumlog_route =
              sumlog_log_pmf(m, l, p, table) +
              poisson_log_pmf(l, -r * std::log1p(-p));
          if (joint == -kInf) {
            CHECK(crt_route == -kInf);
            CHECK(sumlog_route == -kInf);
          } else {
            CHECK(std::fabs(std::expm1(crt_route - joint)) <= 1e-10);
            CHECK(std::fabs(std::expm1(sumlog_route - joint)) <= 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("sample_sumlog basics and compound-Poisson law") {
  RngStream rng(7, streams::id(streams::kScratch, 7));
  CHECK(sample_sumlog(0, 0.5, rng) == 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_sumlog(3, 0.5, rng) >= 3);

  // l ~ Pois(-r ln(1-p)), m = sumlog(l, p) is NB(r, p)
  const double r = 3.0, p = 0.4;
  std::vector<std::int64_t> counts;
  for (int i = 0; i < 100000; ++i) {
    const std::int64_t l = sample_poisson(-r * std::log1p(-p), rng);
    bump(counts, sample_sumlog(l, p, rng));
  }
  std::vector<double> pmf(60);
  for (std::int64_t m = 0; m < 60; ++m) pmf[m] = std::exp(nb_log_pmf(m, r, p));
  CHECK(tv_vs_pmf(counts, 100000, pmf) < 0.01);
}

TEST_CASE("gamma-NB corollary: marginal of l is NB(r1, p')") {
  RngStream rng(7, streams::id(streams::kScratch, 8));
  const double r1 = 2.0, c1 = 1.0, p = 0.5;
  std::vector<std::int64_t> counts;
  for (int i = 0; i < 100000; ++i) {
    const double r = sample_gamma(r1, 1.0 / c1, rng);
    bump(counts, sample_poisson(-r * std::log1p(-p), rng));
  }
  const double p_prime = -std::log1p(-p) / (c1 - std::log1p(-p));
  std::vector<double> pmf(60);
  for (std::int64_t l = 0; l < 60; ++l)
    pmf[l] = std::exp(nb_log_pmf(l, r1, p_prime));
  CHECK(tv_vs_pmf(counts, 100000, pmf) < 0.01);
}

// ---------------------------------------------------------------------------
// standard kernels
// ---------------------------------------------------------------------------

TEST_CASE("dirichlet draws live on the simplex") {
  RngStream rng(7, streams::id(streams::kScratch, 9));
  const std::vector<double> alpha(25, 0.05);
  for (int i = 0; i < 200; ++i) {
    const auto x = sample_dirichlet(alpha, rng);
    double total = 0.0;
    for (const double v : x) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("categorical handles degenerate and zero weights") {
  RngStream rng(7, streams::id(streams::kScratch, 10));
  const std::vector<double> degenerate = {0.0, 5.0, 0.0};
  for (int i = 0; i < 100; ++i)
    CHECK(sample_categorical(degenerate, rng) == 1);
  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS((void)sample_categorical(zero, rng), std::domain_error);
  const std::vector<double> negative = {0.5, -0.1};
  CHECK_THROWS_AS((void)sample_categorical(negative, rng), std::domain_error);
}

TEST_CASE("categorical law is invariant to weight scale") {
  const std::vector<double> w = {0.3, 1.7, 0.01, 2.2};
  // power-of-two scaling is exact in floating point: decisions are bitwise equal
  std::vector<double> w4(w);
  for (auto& x : w4) x *= 4.0;
  RngStream a(99, 1), b(99, 1);
  for (int i = 0; i < 5000; ++i)
    CHECK(sample_categorical(w, a) == sample_categorical(w4, b));
  // an arbitrary scale agrees statistically
  std::vector<double> w3(w);
  for (auto& x : w3) x *= 3.0;
  RngStream c(99, 2), d(99, 3);
  std::vector<std::int64_t> ca(4, 0), cb(4, 0);
  for (int i = 0; i < 100000; ++i) {
    ++ca[sample_categorical(w, c)];
    ++cb[sample_categorical(w3, d)];
  }
  for (int k = 0; k < 4; ++k)
    CHECK(std::fabs(ca[k] / 1e5 - cb[k] / 1e5) < 0.01);
}

TEST_CASE("gamma sampler supports tiny shapes without bias") {
  RngStream rng(7, streams::id(streams::kScratch, 11));
  std::vector<double> draws;
  draws.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) {
    const double x = sample_gamma(0.01, 1.0, rng);
    CHECK(x > 0.0);
    draws.push_back(x);
  }
  const auto m = moments(draws);
  CHECK(std::fabs(m.mean - 0.01) <= 3.0 * m.se_mean);
}

TEST_CASE("gamma/beta domain errors") {
  RngStream rng(1);
  CHECK_THROWS_AS((void)sample_gamma(0.0, 1.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)sample_gamma(1.0, -2.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)sample_beta(0.0, 1.0, rng), std::domain_error);
  CHECK_THROWS_AS((void)sample_poisson(-0.5, rng), std::domain_error);
}

TEST_CASE("poisson sampler matches pmf in both regimes") {
  StirlingTable dummy(1);
  for (const double lambda : {0.5, 9.5, 30.0}) {
    RngStream rng(7, streams::id(streams::kScratch, 12));
    std::vector<std::int64_t> counts;
    for (int i = 0; i < 100000; ++i) bump(counts, sample_poisson(lambda, rng));
    std::vector<double> pmf(counts.size() + 30);
    for (std::size_t m = 0; m < pmf.size(); ++m)
      pmf[m] = std::exp(poisson_log_pmf(static_cast<std::int64_t>(m), lambda));
    CHECK(tv_vs_pmf(counts, 100000, pmf) < 0.01);
  }
}

TEST_CASE("samplers are pure functions of seed and parameters") {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 500; ++i) {
    CHECK(sample_gamma(0.7, 2.0, a) == sample_gamma(0.7, 2.0, b));
    CHECK(sample_nb(2.5, 0.6, a) == sample_nb(2.5, 0.6, b));
    CHECK(sample_crt(9, 1.3, a) == sample_crt(9, 1.3, b));
    CHECK(sample_log(0.8, a) == sample_log(0.8, b));
  }
}

TEST_CASE("clamp_prob pins the boundary and counts events") {
  reset_clamp_prob_events();
  CHECK(clamp_prob(0.5) == 0.5);
  CHECK(clamp_prob_events() == 0);
  CHECK(clamp_prob(0.0) == kProbEps);
  CHECK(clamp_prob(1.0) == 1.0 - kProbEps);
  CHECK(clamp_prob(-3.0) == kProbEps);
  CHECK(clamp_prob_events() == 3);
  reset_clamp_prob_events();
  CHECK(clamp_prob_events() == 0);
}
