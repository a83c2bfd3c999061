#include "nbp/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace nbp {

SparseCountMatrix::SparseCountMatrix(std::int32_t vocab_size,
                                     std::int32_t num_docs)
    : vocab_size_(vocab_size), num_docs_(num_docs), rows_(num_docs) {
  if (vocab_size < 1 || num_docs < 1)
    throw std::invalid_argument("SparseCountMatrix: dimensions must be >= 1");
}

void SparseCountMatrix::add(std::int32_t doc, std::int32_t term,
                            std::int32_t count) {
  if (doc < 0 || doc >= num_docs_)
    throw std::invalid_argument("doc id " + std::to_string(doc) +
                                " out of range [0," +
                                std::to_string(num_docs_) + ")");
  if (term < 0 || term >= vocab_size_)
    throw std::invalid_argument("term id " + std::to_string(term) +
                                " out of range [0," +
                                std::to_string(vocab_size_) + ")");
  if (count <= 0)
    throw std::invalid_argument("count must be positive, got " +
                                std::to_string(count));
  auto& row = rows_[doc];
  const auto it = std::lower_bound(
      row.begin(), row.end(), term,
      [](const Cell& c, std::int32_t t) { return c.first < t; });
  if (it != row.end() && it->first == term)
    throw std::invalid_argument("duplicate entry for doc " +
                                std::to_string(doc) + ", term " +
                                std::to_string(term));
  row.insert(it, {term, count});
}

std::int64_t SparseCountMatrix::doc_total(std::int32_t j) const {
  std::int64_t n = 0;
  for (const auto& [term, count] : rows_[j]) n += count;
  return n;
}

std::int64_t SparseCountMatrix::total() const {
  std::int64_t n = 0;
  for (std::int32_t j = 0; j < num_docs_; ++j) n += doc_total(j);
  return n;
}

std::int64_t SparseCountMatrix::nonzeros() const {
  std::int64_t n = 0;
  for (const auto& row : rows_) n += static_cast<std::int64_t>(row.size());
  return n;
}

namespace {

// reads the next non-empty line; returns false at EOF
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::int64_t parse_int(const std::string& line, std::size_t line_no,
                       const char* what) {
  std::int64_t v = 0;
  std::istringstream ss(line);
  if (!(ss >> v)) throw ParseError(std::string("expected ") + what, line_no);
  return v;
}

}  // namespace

SparseCountMatrix load_uci(const std::filesystem::path& docword_path,
                           const std::filesystem::path& vocab_path) {
  std::ifstream in(docword_path);
  if (!in)
    throw std::runtime_error("cannot open " + docword_path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError("missing D header", line_no + 1);
  const std::int64_t D = parse_int(line, line_no, "document count D");
  if (!next_line(in, line, line_no)) throw ParseError("missing W header", line_no + 1);
  const std::int64_t W = parse_int(line, line_no, "vocabulary size W");
  if (!next_line(in, line, line_no)) throw ParseError("missing NNZ header", line_no + 1);
  const std::int64_t NNZ = parse_int(line, line_no, "nonzero count NNZ");
  if (D < 1 || W < 1 || NNZ < 0)
    throw ParseError("bad header dimensions", line_no);

  SparseCountMatrix m(static_cast<std::int32_t>(W),
                      static_cast<std::int32_t>(D));
  std::int64_t seen = 0;
  while (next_line(in, line, line_no)) {
    std::int64_t doc = 0, term = 0, count = 0;
    std::istringstream ss(line);
    if (!(ss >> doc >> term >> count))
      throw ParseError("expected 'docID termID count'", line_no);
    if (doc < 1 || doc > D)
      throw ParseError("doc id " + std::to_string(doc) + " outside [1," +
                           std::to_string(D) + "]",
                       line_no);
    if (term < 1 || term > W)
      throw ParseError("term id " + std::to_string(term) + " outside [1," +
                           std::to_string(W) + "]",
                       line_no);
    if (count < 1)
      throw ParseError("count must be >= 1, got " + std::to_string(count),
                       line_no);
    try {
      m.add(static_cast<std::int32_t>(doc - 1),
            static_cast<std::int32_t>(term - 1),
            static_cast<std::int32_t>(count));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
    ++seen;
  }
  if (seen != NNZ)
    throw ParseError("header promised " + std::to_string(NNZ) +
                         " entries, file has " + std::to_string(seen),
                     line_no);

  if (!vocab_path.empty()) {
    std::ifstream vin(vocab_path);
    if (!vin)
      throw std::runtime_error("cannot open " + vocab_path.string());
    std::string term;
    while (std::getline(vin, term)) {
      if (!term.empty() && term.back() == '\r') term.pop_back();
      m.vocab.push_back(term);
    }
    if (static_cast<std::int64_t>(m.vocab.size()) != W)
      throw std::runtime_error("vocabulary has " +
                               std::to_string(m.vocab.size()) +
                               " terms, docword header says " +
                               std::to_string(W));
  }
  return m;
}

void save_uci(const SparseCountMatrix& m,
              const std::filesystem::path& docword_path,
              const std::filesystem::path& vocab_path) {
  std::ofstream out(docword_path);
  if (!out)
    throw std::runtime_error("cannot open " + docword_path.string() +
                             " for writing");
  out << m.num_docs() << '\n' << m.vocab_size() << '\n' << m.nonzeros() << '\n';
  for (std::int32_t j = 0; j < m.num_docs(); ++j)
    for (const auto& [term, count] : m.doc(j))
      out << (j + 1) << ' ' << (term + 1) << ' ' << count << '\n';

  if (!vocab_path.empty()) {
    std::ofstream vout(vocab_path);
    if (!vout)
      throw std::runtime_error("cannot open " + vocab_path.string() +
                               " for writing");
    if (!m.vocab.empty()) {
      for (const auto& term : m.vocab) vout << term << '\n';
    } else {
      for (std::int32_t v = 0; v < m.vocab_size(); ++v)
        vout << "term" << (v + 1) << '\n';
    }
  }
}

SparseCountMatrix filter_min_document_frequency(const SparseCountMatrix& m,
                                                std::int32_t min_docs) {
  if (min_docs <= 1) return m;
  std::vector<std::int32_t> df(m.vocab_size(), 0);
  for (std::int32_t j = 0; j < m.num_docs(); ++j)
    for (const auto& [term, count] : m.doc(j)) ++df[term];

  std::vector<std::int32_t> remap(m.vocab_size(), -1);
  std::int32_t kept = 0;
  for (std::int32_t v = 0; v < m.vocab_size(); ++v)
    if (df[v] >= min_docs) remap[v] = kept++;
  if (kept == 0)
    throw std::runtime_error("min-document-frequency filter removed every term");

  SparseCountMatrix out(kept, m.num_docs());
  for (std::int32_t j = 0; j < m.num_docs(); ++j)
    for (const auto& [term, count] : m.doc(j))
      if (remap[term] >= 0) out.add(j, remap[term], count);
  if (!m.vocab.empty())
    for (std::int32_t v = 0; v < m.vocab_size(); ++v)
      if (remap[v] >= 0) out.vocab.push_back(m.vocab[v]);
  return out;
}

HoldoutSplit split_holdout(const SparseCountMatrix& m, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw std::invalid_argument("split fraction must lie in (0,1)");

  HoldoutSplit split;
  split.train = SparseCountMatrix(m.vocab_size(), m.num_docs());
  split.heldout = SparseCountMatrix(m.vocab_size(), m.num_docs());
  split.train.vocab = m.vocab;
  split.heldout.vocab = m.vocab;
  split.fraction = fraction;
  split.seed = seed;

  std::vector<std::int32_t> tokens;
  std::vector<std::int32_t> train_count, held_count;
  for (std::int32_t j = 0; j < m.num_docs(); ++j) {
    const std::int64_t n_j = m.doc_total(j);
    if (n_j < 1)
      throw std::invalid_argument("document " + std::to_string(j + 1) +
                                  " has no tokens; cannot split");
    RngStream rng(seed, streams::id(streams::kSplitDoc, j));

    const double want = fraction * static_cast<double>(n_j);
    std::int64_t n_train = static_cast<std::int64_t>(std::floor(want));
    if (rng.uniform() < want - std::floor(want)) ++n_train;
    n_train = std::min(n_train, n_j);

    tokens.clear();
    for (const auto& [term, count] : m.doc(j))
      tokens.insert(tokens.end(), count, term);
    // partial Fisher-Yates: the first n_train slots become the training draw
    for (std::int64_t i = 0; i < n_train; ++i) {
      const auto span = static_cast<std::uint32_t>(n_j - i);
      std::swap(tokens[i], tokens[i + rng.bounded(span)]);
    }

    train_count.assign(m.vocab_size(), 0);
    held_count.assign(m.vocab_size(), 0);
    for (std::int64_t i = 0; i < n_train; ++i) ++train_count[tokens[i]];
    for (std::int64_t i = n_train; i < n_j; ++i) ++held_count[tokens[i]];
    for (std::int32_t v = 0; v < m.vocab_size(); ++v) {
      if (train_count[v] > 0) split.train.add(j, v, train_count[v]);
      if (held_count[v] > 0) split.heldout.add(j, v, held_count[v]);
    }
  }
  return split;
}

}  // namespace nbp
