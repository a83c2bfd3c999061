#include "nbp/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <json.hpp>

#include "nbp/distributions.hpp"

namespace nbp {

namespace {

using json = nlohmann::ordered_json;

// total variation between empirical counts and an exact PMF; mass beyond the
// evaluation cap counts fully against the distance
double tv_vs_pmf(const std::vector<std::int64_t>& counts, std::int64_t n,
                 const std::vector<double>& pmf) {
  double tv = 0.0;
  double pmf_mass = 0.0;
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

double tv_empirical(const std::vector<std::int64_t>& a,
                    const std::vector<std::int64_t>& b, std::int64_t n) {
  double tv = 0.0;
  const std::size_t cap = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < cap; ++k) {
    const double pa = k < a.size() ? static_cast<double>(a[k]) / n : 0.0;
    const double pb = k < b.size() ? static_cast<double>(b[k]) / n : 0.0;
    tv += std::fabs(pa - pb);
  }
  return 0.5 * tv;
}

void bump(std::vector<std::int64_t>& counts, std::int64_t k) {
  if (k >= static_cast<std::int64_t>(counts.size())) counts.resize(k + 1, 0);
  ++counts[k];
}

CheckResult theorem1_identity(const StirlingTable& table) {
  CheckResult res{"theorem1-pmf-factorizations", false, 0.0, 1e-10, ""};
  const double rs[] = {0.1, 1.0, 5.0};
  const double ps[] = {0.1, 0.5, 0.9};
  double worst = 0.0;
  for (const double r : rs) {
    for (const double p : ps) {
      for (std::int64_t m = 0; m <= 15; ++m) {
        for (std::int64_t l = 0; l <= m; ++l) {
          const double joint = poislog_log_pmf(m, l, r, p, table);
          const double via_crt =
              crt_log_pmf(l, m, r, table) + nb_log_pmf(m, r, p);
          const double via_sumlog =
              sumlog_log_pmf(m, l, p, table) +
              poisson_log_pmf(l, -r * std::log1p(-p));
          if (std::isinf(joint) && std::isinf(via_crt) &&
              std::isinf(via_sumlog))
            continue;  // all three agree the cell has zero mass
          const double err1 = std::fabs(std::expm1(via_crt - joint));
          const double err2 = std::fabs(std::expm1(via_sumlog - joint));
          worst = std::max({worst, err1, err2});
        }
      }
    }
  }
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max relative error over the (m,l,r,p) grid";
  return res;
}

CheckResult crt_normalization(const StirlingTable& table) {
  CheckResult res{"crt-pmf-normalization", false, 0.0, 1e-9, ""};
  const std::int64_t ms[] = {0, 1, 5, 50, 200, 1000};
  const double rs[] = {0.1, 1.0, 7.5, 50.0};
  double worst = 0.0;
  for (const std::int64_t m : ms) {
    for (const double r : rs) {
      double total = 0.0;
      for (std::int64_t l = 0; l <= m; ++l)
        total += std::exp(crt_log_pmf(l, m, r, table));
      worst = std::max(worst, std::fabs(total - 1.0));
    }
  }
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max |sum_l CRT(l;m,r) - 1|";
  return res;
}

CheckResult stirling_row_identity(const StirlingTable& table) {
  CheckResult res{"stirling-rising-factorial", false, 0.0, 1e-9, ""};
  const std::int64_t ms[] = {1, 10, 100, 1000};
  const double rs[] = {0.5, 1.0, 7.5, 50.0};
  double worst = 0.0;
  for (const std::int64_t m : ms) {
    for (const double r : rs) {
      // log sum_l |s(m,l)| r^l via log-sum-exp against lgamma(m+r)-lgamma(r)
      double hi = -std::numeric_limits<double>::infinity();
      for (std::int64_t l = 0; l <= m; ++l)
        hi = std::max(hi, table.log_s(m, l) + l * std::log(r));
      double sum = 0.0;
      for (std::int64_t l = 0; l <= m; ++l)
        sum += std::exp(table.log_s(m, l) + l * std::log(r) - hi);
      const double lhs = hi + std::log(sum);
      const double rhs = std::lgamma(m + r) - std::lgamma(r);
      worst = std::max(worst, std::fabs(std::expm1(lhs - rhs)));
    }
  }
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max relative error of sum_l |s(m,l)| r^l vs Gamma(m+r)/Gamma(r)";
  return res;
}

CheckResult crt_sampler_check(std::int64_t draws, std::uint64_t seed,
                              const StirlingTable& table) {
  CheckResult res{"crt-sampler-frequencies", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 10));
  const std::int64_t m = 10;
  const double r = 2.0;
  std::vector<std::int64_t> counts(m + 1, 0);
  for (std::int64_t i = 0; i < draws; ++i) ++counts[sample_crt(m, r, rng)];
  double worst = 0.0;
  for (std::int64_t l = 0; l <= m; ++l) {
    const double emp = static_cast<double>(counts[l]) / draws;
    worst = std::max(worst,
                     std::fabs(emp - std::exp(crt_log_pmf(l, m, r, table))));
  }
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max abs frequency error, CRT(m=10, r=2)";
  return res;
}

CheckResult log_sampler_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"log-sampler-frequencies", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 11));
  const double p = 0.3;
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i) bump(counts, sample_log(p, rng));
  double worst = 0.0;
  for (std::int64_t k = 1; k <= 20; ++k) {
    const double emp = k < static_cast<std::int64_t>(counts.size())
                           ? static_cast<double>(counts[k]) / draws
                           : 0.0;
    worst = std::max(worst, std::fabs(emp - std::exp(logarithmic_log_pmf(k, p))));
  }
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max abs frequency error over k <= 20, Log(p=0.3)";
  return res;
}

std::vector<double> nb_pmf_vector(double r, double p, std::int64_t cap) {
  std::vector<double> pmf(cap + 1);
  for (std::int64_t m = 0; m <= cap; ++m) pmf[m] = std::exp(nb_log_pmf(m, r, p));
  return pmf;
}

CheckResult nb_sampler_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"nb-gamma-poisson-tv", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 12));
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i) {
    std::int64_t m = sample_nb(3.0, 0.4, rng);
    bump(counts, std::min<std::int64_t>(m, 50));
  }
  res.value = tv_vs_pmf(counts, draws, nb_pmf_vector(3.0, 0.4, 50));
  res.pass = res.value <= res.threshold;
  res.detail = "TV over {0..50}, NB(3, 0.4) via gamma-Poisson";
  return res;
}

CheckResult compound_poisson_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"nb-compound-poisson-tv", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 13));
  const double r = 3.0, p = 0.4;
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i) {
    const std::int64_t l = sample_poisson(-r * std::log1p(-p), rng);
    bump(counts, std::min<std::int64_t>(sample_sumlog(l, p, rng), 50));
  }
  res.value = tv_vs_pmf(counts, draws, nb_pmf_vector(r, p, 50));
  res.pass = res.value <= res.threshold;
  res.detail = "TV over {0..50}, NB(3, 0.4) via l ~ Pois, m ~ SumLog";
  return res;
}

CheckResult corollary_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"gamma-nb-marginalization-tv", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 14));
  const double r1 = 2.0, c1 = 1.0, p = 0.5;
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i) {
    const double r = sample_gamma(r1, 1.0 / c1, rng);
    bump(counts,
         std::min<std::int64_t>(sample_poisson(-r * std::log1p(-p), rng), 60));
  }
  const double p_prime = -std::log1p(-p) / (c1 - std::log1p(-p));
  res.value = tv_vs_pmf(counts, draws, nb_pmf_vector(r1, p_prime, 60));
  res.pass = res.value <= res.threshold;
  res.detail = "TV of l against NB(r1, -ln(1-p)/(c1 - ln(1-p)))";
  return res;
}

CheckResult nb_poisson_limit_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"nb-poisson-limit-tv", false, 0.0, 0.01, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 15));
  const double r = 1e4, lambda = 2.0;
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < draws; ++i)
    bump(counts,
         std::min<std::int64_t>(sample_nb(r, lambda / (lambda + r), rng), 30));
  std::vector<double> pmf(31);
  for (std::int64_t m = 0; m <= 30; ++m)
    pmf[m] = std::exp(poisson_log_pmf(m, lambda));
  res.value = tv_vs_pmf(counts, draws, pmf);
  res.pass = res.value <= res.threshold;
  res.detail = "TV of NB(1e4, lam/(lam+1e4)) draws against Pois(2)";
  return res;
}

CheckResult poisson_multinomial_check(std::int64_t draws, std::uint64_t seed) {
  CheckResult res{"poisson-multinomial-equivalence", false, 0.0, 0.02, ""};
  RngStream rng(seed, streams::id(streams::kScratch, 16));
  const std::vector<double> theta = {2.0, 5.0, 10.0};
  const double total = 17.0;
  std::vector<std::vector<std::int64_t>> direct(3), allocated(3);
  std::vector<std::int64_t> cell(3);
  for (std::int64_t i = 0; i < draws; ++i) {
    for (std::size_t k = 0; k < 3; ++k)
      bump(direct[k], sample_poisson(theta[k], rng));
    const std::int64_t n = sample_poisson(total, rng);
    sample_multinomial(n, theta, cell, rng);
    for (std::size_t k = 0; k < 3; ++k) bump(allocated[k], cell[k]);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
    worst = std::max(worst, tv_empirical(direct[k], allocated[k], draws));
  res.value = worst;
  res.pass = worst <= res.threshold;
  res.detail = "max per-atom TV, n_k ~ Pois vs N ~ Pois then multinomial";
  return res;
}

}  // namespace

SelfCheckReport run_dist_check(std::int64_t draws, std::uint64_t seed) {
  SelfCheckReport report;
  report.draws = draws;
  report.seed = seed;
  const StirlingTable table(1000);
  report.checks.push_back(theorem1_identity(table));
  report.checks.push_back(crt_normalization(table));
  report.checks.push_back(stirling_row_identity(table));
  report.checks.push_back(crt_sampler_check(draws, seed, table));
  report.checks.push_back(log_sampler_check(draws, seed));
  report.checks.push_back(nb_sampler_check(draws, seed));
  report.checks.push_back(compound_poisson_check(draws, seed));
  report.checks.push_back(corollary_check(draws, seed));
  report.checks.push_back(nb_poisson_limit_check(draws, seed));
  report.checks.push_back(poisson_multinomial_check(draws, seed));
  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.pass; });
  return report;
}

std::string selfcheck_to_json(const SelfCheckReport& r) {
  json out;
  out["suite"] = "dist-check";
  out["draws"] = r.draws;
  out["seed"] = r.seed;
  out["all_pass"] = r.all_pass;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
  out["checks"] = std::move(checks);
  return out.dump(2) + "\n";
}

}  // namespace nbp
