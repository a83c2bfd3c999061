#include "nbp/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace nbp {

namespace {
struct VariantName {
  Variant v;
  std::string_view name;
};
constexpr VariantName kVariantNames[] = {
    {Variant::kNb, "nb"},
    {Variant::kNbLda, "nb-lda"},
    {Variant::kNbHdp, "nb-hdp"},
    {Variant::kNbFtm, "nb-ftm"},
    {Variant::kBetaGeometric, "beta-geometric"},
    {Variant::kBetaNb, "beta-nb"},
    {Variant::kGammaNb, "gamma-nb"},
    {Variant::kMarkedBetaNb, "marked-beta-nb"},
    {Variant::kDirPfa, "dir-pfa"},
};
}  // namespace

Variant parse_variant(std::string_view name) {
  for (const auto& [v, n] : kVariantNames)
    if (n == name) return v;
  throw std::invalid_argument("unknown model variant '" + std::string(name) +
                              "'");
}

std::string_view variant_name(Variant v) {
  for (const auto& [vv, n] : kVariantNames)
    if (vv == v) return n;
  throw std::invalid_argument("unknown variant tag");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> all = [] {
    std::vector<Variant> out;
    for (const auto& [v, n] : kVariantNames) out.push_back(v);
    return out;
  }();
  return all;
}

bool variant_has_r_topic(Variant v) {
  switch (v) {
    case Variant::kNb:
    case Variant::kNbHdp:
    case Variant::kNbFtm:
    case Variant::kGammaNb:
    case Variant::kMarkedBetaNb:
      return true;
    default:
      return false;
  }
}

bool variant_has_r_doc(Variant v) {
  return v == Variant::kNbLda || v == Variant::kBetaNb;
}

bool variant_has_p_topic(Variant v) {
  switch (v) {
    case Variant::kBetaGeometric:
    case Variant::kBetaNb:
    case Variant::kMarkedBetaNb:
      return true;
    default:
      return false;
  }
}

bool variant_has_p_doc(Variant v) {
  switch (v) {
    case Variant::kNbLda:
    case Variant::kNbHdp:  // pinned at 0.5 but present
    case Variant::kNbFtm:  // pinned at 0.5 but present
    case Variant::kGammaNb:
      return true;
    default:
      return false;
  }
}

void Hyperparams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0))
      throw std::invalid_argument(std::string("hyperparameter ") + name +
                                  " must be positive");
  };
  positive(a0, "a0");
  positive(b0, "b0");
  positive(e0, "e0");
  positive(f0, "f0");
  positive(c, "c");
  positive(c_beta, "c_beta");
  positive(eta, "eta");
  if (K < 1) throw std::invalid_argument("truncation level K must be >= 1");
}

std::int32_t ModelState::active_topics() const {
  std::int32_t active = 0;
  for (std::int32_t k = 0; k < K; ++k)
    if (n_k[k] > 0) ++active;
  return active;
}

void ModelState::recount_from_z() {
  std::fill(n_vk.begin(), n_vk.end(), 0);
  std::fill(n_jk.begin(), n_jk.end(), 0);
  std::fill(n_k.begin(), n_k.end(), std::int64_t{0});
  for (std::int32_t j = 0; j < J; ++j) {
    for (std::int64_t t = doc_begin[j]; t < doc_begin[j + 1]; ++t) {
      const std::int32_t v = token_term[t];
      const std::int32_t k = z[t];
      ++n_vk[static_cast<std::size_t>(v) * K + k];
      ++n_jk[static_cast<std::size_t>(j) * K + k];
      ++n_k[k];
    }
  }
}

void ModelState::check_counts() const {
  std::vector<std::int32_t> vk(n_vk.size(), 0), jk(n_jk.size(), 0);
  std::vector<std::int64_t> kk(n_k.size(), 0);
  for (std::int32_t j = 0; j < J; ++j) {
    for (std::int64_t t = doc_begin[j]; t < doc_begin[j + 1]; ++t) {
      const std::int32_t v = token_term[t];
      const std::int32_t k = z[t];
      if (k < 0 || k >= K) throw std::logic_error("token topic out of range");
      ++vk[static_cast<std::size_t>(v) * K + k];
      ++jk[static_cast<std::size_t>(j) * K + k];
      ++kk[k];
    }
  }
  if (vk != n_vk) throw std::logic_error("n_vk drifted from z");
  if (jk != n_jk) throw std::logic_error("n_jk drifted from z");
  if (kk != n_k) throw std::logic_error("n_k drifted from z");
  for (std::int32_t j = 0; j < J; ++j) {
    std::int64_t row = 0;
    for (std::int32_t k = 0; k < K; ++k)
      row += n_jk[static_cast<std::size_t>(j) * K + k];
    if (row != doc_tokens(j))
      throw std::logic_error("sum_k n_jk != N_j for doc " + std::to_string(j));
  }
}

}  // namespace nbp
