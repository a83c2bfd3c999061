#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbp/corpus.hpp"
#include "nbp/model.hpp"

namespace nbp {

// Running sums for the posterior-averaged predictive term probabilities
// f_jv = sum_s sum_k phi_vk theta_jk, normalized per document at finalize
// time. Because each topic sums to one over terms, the per-document
// normalizer is just sum_s sum_k theta_jk.
class PredictiveAccumulator {
public:
  PredictiveAccumulator() = default;
  PredictiveAccumulator(std::int32_t J, std::int32_t V);

  void accumulate(const ModelState& state);

  std::int64_t samples() const { return samples_; }
  std::int32_t num_docs() const { return J_; }
  std::int32_t vocab_size() const { return V_; }

  /// normalized J*V predictive matrix; requires samples() >= 1
  std::vector<double> predictive() const;

  /// merge by explicit averaging of f (cross-chain reports)
  void merge(const PredictiveAccumulator& other);

  // raw access for checkpointing
  const std::vector<double>& raw_sums() const { return f_raw_; }
  const std::vector<double>& doc_totals() const { return doc_total_; }
  void restore(std::vector<double> f_raw, std::vector<double> doc_total,
               std::int64_t samples);

private:
  std::int32_t J_ = 0, V_ = 0;
  std::int64_t samples_ = 0;
  std::vector<double> f_raw_;      // J*V
  std::vector<double> doc_total_;  // J
};

/// per-word perplexity of the held-out counts under a normalized J*V
/// predictive matrix: exp(-1/y.. sum_j sum_v y_jv log f_jv). Errors if the
/// held-out set is empty or any held-out cell has zero predictive mass.
double perplexity(const std::vector<double>& f, std::int32_t V,
                  const SparseCountMatrix& heldout);

struct TraceRow {
  std::int32_t iteration = 0;
  std::int32_t k_active = 0;
  double perplexity_so_far = 0.0;
  bool has_perplexity = false;
};

struct ParamDump {
  // topic-indexed parameters sorted by decreasing usage n_.k, then
  // doc-indexed parameters sorted by decreasing N_j
  std::vector<std::int32_t> topic_order, doc_order;
  std::vector<std::int64_t> topic_usage, doc_usage;
  std::vector<double> r_topic, p_topic, pi_topic;  // reordered, maybe empty
  std::vector<double> r_doc, p_doc;
};

ParamDump dump_params(const ModelState& state);

struct PerplexityReport {
  std::string variant;
  std::int64_t samples = 0;       // S
  double perplexity = 0.0;
  std::int32_t k_active_final = 0;
  std::vector<TraceRow> trace;    // per-iteration K+ and perplexity-so-far
  ParamDump params;
  // schedule actually used
  std::int32_t iterations = 0, burn_in = 0, warmup = 0;
  std::uint64_t seed = 0;
  std::uint64_t clamp_events = 0;
};

/// deterministic JSON serialization (insertion-ordered keys, shortest
/// round-trip doubles); byte-identical for identical runs
std::string report_to_json(const PerplexityReport& report);

void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::filesystem::path& path);
void write_param_csvs(const ParamDump& dump,
                      const std::filesystem::path& topic_csv,
                      const std::filesystem::path& doc_csv);

}  // namespace nbp
