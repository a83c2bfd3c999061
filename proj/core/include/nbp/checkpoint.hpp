#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nbp/corpus.hpp"
#include "nbp/eval.hpp"
#include "nbp/model.hpp"
#include "nbp/rng.hpp"

namespace nbp {

// Versioned snapshot of one chain. Restoring it and continuing reproduces
// the uninterrupted trajectory bit-exactly: the RNG state, the model state,
// the accumulators, the trace so far and both matrices are all captured.
struct ChainCheckpoint {
  static constexpr std::int32_t kFormatVersion = 1;

  ModelSpec spec;
  std::int32_t iterations = 0;
  std::int32_t burn_in = 0;
  std::int32_t warmup = 0;
  std::uint64_t seed = 0;
  std::int32_t chain_index = 0;
  std::int32_t iteration = 0;  // iterations fully completed
  std::uint64_t clamp_events = 0;  // cumulative across the whole trajectory

  RngStream rng;
  ModelState state;
  PredictiveAccumulator acc;
  std::vector<TraceRow> trace;
  SparseCountMatrix train;
  SparseCountMatrix heldout;
};

std::string checkpoint_to_json(const ChainCheckpoint& ckpt);
ChainCheckpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const ChainCheckpoint& ckpt,
                     const std::filesystem::path& path);
ChainCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace nbp
