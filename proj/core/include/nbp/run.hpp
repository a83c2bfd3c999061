#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nbp/checkpoint.hpp"
#include "nbp/corpus.hpp"
#include "nbp/eval.hpp"
#include "nbp/model.hpp"

namespace nbp {

struct RunConfig {
  ModelSpec spec;
  std::int32_t iterations = 2500;
  std::int32_t burn_in = 1000;  // collect the last iterations - burn_in
  double train_fraction = 0.6;
  std::uint64_t seed = 1;
  std::int32_t chains = 1;
  std::int32_t checkpoint_every = 0;  // 0: final checkpoint only
  std::int32_t min_df = 0;            // vocabulary min-document-frequency
  std::string out_dir;                // empty: nothing written to disk

  void validate() const;
};

struct ChainOutcome {
  PerplexityReport report;
  std::string report_json;
  ModelState final_state;
  PredictiveAccumulator acc;
};

struct FitOutcome {
  std::vector<ChainOutcome> chains;
  double merged_perplexity = 0.0;
  std::string merged_report_json;
  HoldoutSplit split;
};

/// split, run every chain (each on its own stream), evaluate held-out
/// perplexity, and write the artifact layout under cfg.out_dir when set:
/// config.json, report.json, chain-XXX/{report.json, trace.csv,
/// params_topic.csv, params_doc.csv, checkpoint.json}
FitOutcome run_fit(const RunConfig& cfg, const SparseCountMatrix& corpus);

/// continue a single chain from a checkpoint to its configured horizon;
/// the finished trajectory is bit-identical to an uninterrupted run
ChainOutcome resume_chain(ChainCheckpoint ckpt,
                          const std::filesystem::path& out_dir = {});

std::string run_config_to_json(const RunConfig& cfg);

}  // namespace nbp
