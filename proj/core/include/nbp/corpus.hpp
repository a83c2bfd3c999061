#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nbp/rng.hpp"

namespace nbp {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line_number)
      : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  std::size_t line;
};

// Term-document counts m_vj stored as per-document (term, count) rows, kept
// sorted by term id. Counts are strictly positive and (doc, term) pairs are
// unique.
class SparseCountMatrix {
public:
  using Cell = std::pair<std::int32_t, std::int32_t>;  // (term, count)

  SparseCountMatrix() = default;
  SparseCountMatrix(std::int32_t vocab_size, std::int32_t num_docs);

  std::int32_t vocab_size() const { return vocab_size_; }
  std::int32_t num_docs() const { return num_docs_; }

  /// inserts m_vj = count; throws std::invalid_argument on out-of-range ids,
  /// nonpositive counts, or duplicate (doc, term) pairs
  void add(std::int32_t doc, std::int32_t term, std::int32_t count);

  const std::vector<Cell>& doc(std::int32_t j) const { return rows_[j]; }

  std::int64_t doc_total(std::int32_t j) const;    // N_j
  std::int64_t total() const;                      // sum of all counts
  std::int64_t nonzeros() const;

  std::vector<std::string> vocab;  // optional; empty or size vocab_size()

  bool operator==(const SparseCountMatrix& other) const {
    return vocab_size_ == other.vocab_size_ && num_docs_ == other.num_docs_ &&
           rows_ == other.rows_;
  }

private:
  std::int32_t vocab_size_ = 0;
  std::int32_t num_docs_ = 0;
  std::vector<std::vector<Cell>> rows_;
};

/// Reads UCI bag-of-words files: three header lines D, W, NNZ followed by
/// NNZ lines of "docID termID count" (1-indexed). An optional vocabulary file
/// holds one term per line. Throws ParseError with the offending line number.
SparseCountMatrix load_uci(const std::filesystem::path& docword_path,
                           const std::filesystem::path& vocab_path = {});

/// Writes the matrix in UCI format, entries doc-major and term-sorted, so a
/// write/load round trip is exact.
void save_uci(const SparseCountMatrix& m,
              const std::filesystem::path& docword_path,
              const std::filesystem::path& vocab_path = {});

/// Drops terms that appear in fewer than min_docs documents and compacts the
/// vocabulary ids. Documents are kept even if they end up empty.
SparseCountMatrix filter_min_document_frequency(const SparseCountMatrix& m,
                                                std::int32_t min_docs);

struct HoldoutSplit {
  SparseCountMatrix train;
  SparseCountMatrix heldout;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Per-document multiset split: each document keeps
/// floor(fraction * N_j) + Bernoulli(frac) tokens chosen uniformly without
/// replacement. Deterministic under the seed (one substream per document).
/// Requires N_j >= 1 for every document and fraction in (0,1).
HoldoutSplit split_holdout(const SparseCountMatrix& m, double fraction,
                           std::uint64_t seed);

}  // namespace nbp
