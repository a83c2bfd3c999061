#include "nbp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace nbp {

using json = nlohmann::ordered_json;

PredictiveAccumulator::PredictiveAccumulator(std::int32_t J, std::int32_t V)
    : J_(J), V_(V) {
  f_raw_.assign(static_cast<std::size_t>(J) * V, 0.0);
  doc_total_.assign(J, 0.0);
}

void PredictiveAccumulator::accumulate(const ModelState& state) {
  if (state.J != J_ || state.V != V_)
    throw std::invalid_argument("accumulate: state shape mismatch");
  const std::int32_t K = state.K;
  for (std::int32_t j = 0; j < J_; ++j) {
    const double* th = &state.theta[static_cast<std::size_t>(j) * K];
    double* f = &f_raw_[static_cast<std::size_t>(j) * V_];
    double row_total = 0.0;
    for (std::int32_t k = 0; k < K; ++k) row_total += th[k];
    doc_total_[j] += row_total;
    for (std::int32_t v = 0; v < V_; ++v) {
      const double* ph = &state.phi[static_cast<std::size_t>(v) * K];
      double s = 0.0;
      for (std::int32_t k = 0; k < K; ++k) s += ph[k] * th[k];
      f[v] += s;
    }
  }
  ++samples_;
}

std::vector<double> PredictiveAccumulator::predictive() const {
  if (samples_ < 1)
    throw std::logic_error("no collected samples to normalize");
  std::vector<double> f(f_raw_.size());
  for (std::int32_t j = 0; j < J_; ++j) {
    const double total = doc_total_[j];
    if (!(total > 0.0))
      throw std::logic_error("document " + std::to_string(j) +
                             " accumulated zero predictive mass");
    for (std::int32_t v = 0; v < V_; ++v) {
      const std::size_t idx = static_cast<std::size_t>(j) * V_ + v;
      f[idx] = f_raw_[idx] / total;
    }
  }
  return f;
}

void PredictiveAccumulator::merge(const PredictiveAccumulator& other) {
  if (other.J_ != J_ || other.V_ != V_)
    throw std::invalid_argument("merge: accumulator shape mismatch");
  for (std::size_t i = 0; i < f_raw_.size(); ++i) f_raw_[i] += other.f_raw_[i];
  for (std::size_t j = 0; j < doc_total_.size(); ++j)
    doc_total_[j] += other.doc_total_[j];
  samples_ += other.samples_;
}

void PredictiveAccumulator::restore(std::vector<double> f_raw,
                                    std::vector<double> doc_total,
                                    std::int64_t samples) {
  if (f_raw.size() != f_raw_.size() || doc_total.size() != doc_total_.size())
    throw std::invalid_argument("restore: accumulator shape mismatch");
  f_raw_ = std::move(f_raw);
  doc_total_ = std::move(doc_total);
  samples_ = samples;
}

double perplexity(const std::vector<double>& f, std::int32_t V,
                  const SparseCountMatrix& heldout) {
  if (heldout.total() == 0)
    throw std::invalid_argument("perplexity: held-out set is empty");
  if (f.size() != static_cast<std::size_t>(heldout.num_docs()) * V)
    throw std::invalid_argument("perplexity: predictive matrix shape mismatch");
  double log_sum = 0.0;
  std::int64_t y_total = 0;
  for (std::int32_t j = 0; j < heldout.num_docs(); ++j) {
    for (const auto& [v, y] : heldout.doc(j)) {
      const double fjv = f[static_cast<std::size_t>(j) * V + v];
      if (!(fjv > 0.0))
        throw std::runtime_error(
            "held-out term with zero predictive probability (doc " +
            std::to_string(j) + ", term " + std::to_string(v) + ")");
      log_sum += static_cast<double>(y) * std::log(fjv);
      y_total += y;
    }
  }
  return std::exp(-log_sum / static_cast<double>(y_total));
}

ParamDump dump_params(const ModelState& s) {
  ParamDump d;
  d.topic_order.resize(s.K);
  std::iota(d.topic_order.begin(), d.topic_order.end(), 0);
  std::stable_sort(d.topic_order.begin(), d.topic_order.end(),
                   [&](std::int32_t a, std::int32_t b) {
                     return s.n_k[a] > s.n_k[b];
                   });
  d.doc_order.resize(s.J);
  std::iota(d.doc_order.begin(), d.doc_order.end(), 0);
  std::stable_sort(d.doc_order.begin(), d.doc_order.end(),
                   [&](std::int32_t a, std::int32_t b) {
                     return s.doc_tokens(a) > s.doc_tokens(b);
                   });
  for (const std::int32_t k : d.topic_order) {
    d.topic_usage.push_back(s.n_k[k]);
    if (!s.r_topic.empty()) d.r_topic.push_back(s.r_topic[k]);
    if (!s.p_topic.empty()) d.p_topic.push_back(s.p_topic[k]);
    if (!s.pi_topic.empty()) d.pi_topic.push_back(s.pi_topic[k]);
  }
  for (const std::int32_t j : d.doc_order) {
    d.doc_usage.push_back(s.doc_tokens(j));
    if (!s.r_doc.empty()) d.r_doc.push_back(s.r_doc[j]);
    if (!s.p_doc.empty()) d.p_doc.push_back(s.p_doc[j]);
  }
  return d;
}

std::string report_to_json(const PerplexityReport& r) {
  json out;
  out["variant"] = r.variant;
  out["seed"] = r.seed;
  out["schedule"] = {{"iterations", r.iterations},
                     {"burn_in", r.burn_in},
                     {"warmup", r.warmup},
                     {"collected_samples", r.samples}};
  out["perplexity"] = r.perplexity;
  out["k_active_final"] = r.k_active_final;
  out["clamp_events"] = r.clamp_events;
  json trace = json::array();
  for (const auto& row : r.trace) {
    json t;
    t["iteration"] = row.iteration;
    t["k_active"] = row.k_active;
    if (row.has_perplexity) t["perplexity"] = row.perplexity_so_far;
    trace.push_back(std::move(t));
  }
  out["trace"] = std::move(trace);
  json params;
  params["topic_usage"] = r.params.topic_usage;
  if (!r.params.r_topic.empty()) params["r_topic"] = r.params.r_topic;
  if (!r.params.p_topic.empty()) params["p_topic"] = r.params.p_topic;
  if (!r.params.pi_topic.empty()) params["pi_topic"] = r.params.pi_topic;
  params["doc_usage"] = r.params.doc_usage;
  if (!r.params.r_doc.empty()) params["r_doc"] = r.params.r_doc;
  if (!r.params.p_doc.empty()) params["p_doc"] = r.params.p_doc;
  out["params"] = std::move(params);
  return out.dump(2) + "\n";
}

namespace {
void write_double(std::ofstream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out << buf;
}
}  // namespace

void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "iteration,k_active,perplexity\n";
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.k_active << ',';
    if (row.has_perplexity) write_double(out, row.perplexity_so_far);
    out << '\n';
  }
}

void write_param_csvs(const ParamDump& dump,
                      const std::filesystem::path& topic_csv,
                      const std::filesystem::path& doc_csv) {
  {
    std::ofstream out(topic_csv);
    if (!out)
      throw std::runtime_error("cannot open " + topic_csv.string());
    out << "rank,topic,tokens,r_k,p_k,pi_k\n";
    for (std::size_t i = 0; i < dump.topic_order.size(); ++i) {
      out << i << ',' << dump.topic_order[i] << ',' << dump.topic_usage[i]
          << ',';
      if (!dump.r_topic.empty()) write_double(out, dump.r_topic[i]);
      out << ',';
      if (!dump.p_topic.empty()) write_double(out, dump.p_topic[i]);
      out << ',';
      if (!dump.pi_topic.empty()) write_double(out, dump.pi_topic[i]);
      out << '\n';
    }
  }
  {
    std::ofstream out(doc_csv);
    if (!out)
      throw std::runtime_error("cannot open " + doc_csv.string());
    out << "rank,doc,tokens,r_j,p_j\n";
    for (std::size_t i = 0; i < dump.doc_order.size(); ++i) {
      out << i << ',' << dump.doc_order[i] << ',' << dump.doc_usage[i] << ',';
      if (!dump.r_doc.empty()) write_double(out, dump.r_doc[i]);
      out << ',';
      if (!dump.p_doc.empty()) write_double(out, dump.p_doc[i]);
      out << '\n';
    }
  }
}

}  // namespace nbp
