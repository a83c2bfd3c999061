#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "nbp/corpus.hpp"
#include "support/test_utils.hpp"

using namespace nbp;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("load_uci reads a small well-formed file") {
  const auto p = write_temp("uci_ok.txt", "2\n3\n2\n1 1 4\n2 3 1\n");
  const auto m = load_uci(p);
  CHECK(m.num_docs() == 2);
  CHECK(m.vocab_size() == 3);
  CHECK(m.doc_total(0) == 4);
  CHECK(m.doc_total(1) == 1);
  CHECK(m.total() == 5);
}

TEST_CASE("load_uci rejects malformed input with line numbers") {
  SUBCASE("duplicate entry") {
    const auto p = write_temp("uci_dup.txt", "1\n2\n2\n1 1 4\n1 1 2\n");
    CHECK_THROWS_AS((void)load_uci(p), ParseError);
    try {
      (void)load_uci(p);
    } catch (const ParseError& e) {
      CHECK(e.line == 5);
    }
  }
  SUBCASE("zero count") {
    const auto p = write_temp("uci_zero.txt", "1\n2\n1\n1 1 0\n");
    CHECK_THROWS_AS((void)load_uci(p), ParseError);
  }
  SUBCASE("term id out of range") {
    const auto p = write_temp("uci_range.txt", "1\n2\n1\n1 3 1\n");
    CHECK_THROWS_AS((void)load_uci(p), ParseError);
  }
  SUBCASE("nnz mismatch") {
    const auto p = write_temp("uci_nnz.txt", "1\n2\n3\n1 1 1\n");
    CHECK_THROWS_AS((void)load_uci(p), ParseError);
  }
  SUBCASE("vocabulary size mismatch") {
    const auto p = write_temp("uci_v.txt", "1\n2\n1\n1 1 1\n");
    const auto v = write_temp("uci_vocab.txt", "only_one_term\n");
    CHECK_THROWS_AS((void)load_uci(p, v), std::runtime_error);
  }
}

TEST_CASE("save/load round trip is exact") {
  const auto m = test::toy_corpus(17, 23, 40, 5);
  const fs::path dir = fs::temp_directory_path() / "nbp_roundtrip";
  fs::create_directories(dir);
  save_uci(m, dir / "docword.txt", dir / "vocab.txt");
  const auto back = load_uci(dir / "docword.txt");
  CHECK(back == m);
}

TEST_CASE("split keeps exactly floor(f N_j) tokens when the remainder is zero") {
  SparseCountMatrix m(2, 1);
  m.add(0, 0, 3);
  m.add(0, 1, 1);
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto split = split_holdout(m, 0.5, seed);
    CHECK(split.train.doc_total(0) == 2);
    CHECK(split.heldout.doc_total(0) == 2);
  }
}

TEST_CASE("split retains each token with probability fraction") {
  // doc with counts (3,1): over many seeds, term 0 keeps 1.5 of 3 tokens and
  // term 1 keeps 0.5 of 1 on average
  SparseCountMatrix m(2, 1);
  m.add(0, 0, 3);
  m.add(0, 1, 1);
  const int runs = 20000;
  double kept0 = 0.0, kept1 = 0.0;
  for (int seed = 0; seed < runs; ++seed) {
    const auto split = split_holdout(m, 0.5, seed);
    for (const auto& [term, count] : split.train.doc(0)) {
      if (term == 0) kept0 += count;
      if (term == 1) kept1 += count;
    }
  }
  // hypergeometric mean 1.5 (var 0.25): 3 sigma of the MC average
  CHECK(std::fabs(kept0 / runs - 1.5) < 3.0 * std::sqrt(0.25 / runs));
  CHECK(std::fabs(kept1 / runs - 0.5) < 3.0 * std::sqrt(0.25 / runs));
}

TEST_CASE("split conserves counts entrywise and is seed-deterministic") {
  const auto m = test::toy_corpus(30, 50, 60, 11);
  const auto a = split_holdout(m, 0.7, 99);
  const auto b = split_holdout(m, 0.7, 99);
  CHECK(a.train == b.train);
  CHECK(a.heldout == b.heldout);

  for (std::int32_t j = 0; j < m.num_docs(); ++j) {
    std::vector<std::int32_t> total(m.vocab_size(), 0);
    for (const auto& [v, c] : a.train.doc(j)) total[v] += c;
    for (const auto& [v, c] : a.heldout.doc(j)) total[v] += c;
    for (const auto& [v, c] : m.doc(j)) {
      CHECK(total[v] == c);
      total[v] = 0;
    }
    for (const auto t : total) CHECK(t == 0);  // nothing invented
  }
}

TEST_CASE("split validates its inputs") {
  const auto m = test::toy_corpus(5, 3, 10, 2);
  CHECK_THROWS_AS((void)split_holdout(m, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)split_holdout(m, 1.0, 1), std::invalid_argument);
  SparseCountMatrix with_empty(3, 2);
  with_empty.add(0, 0, 5);  // doc 1 stays empty
  CHECK_THROWS_AS((void)split_holdout(with_empty, 0.5, 1),
                  std::invalid_argument);
}

TEST_CASE("a lucky split may hold out nothing from a document") {
  SparseCountMatrix m(1, 1);
  m.add(0, 0, 1);
  bool saw_empty_heldout = false;
  for (std::uint64_t seed = 0; seed < 50 && !saw_empty_heldout; ++seed)
    saw_empty_heldout = split_holdout(m, 0.9, seed).heldout.doc_total(0) == 0;
  CHECK(saw_empty_heldout);
}

TEST_CASE("min-document-frequency filter compacts the vocabulary") {
  SparseCountMatrix m(4, 3);
  m.add(0, 0, 1);
  m.add(1, 0, 2);
  m.add(2, 0, 1);
  m.add(0, 2, 1);
  m.add(1, 2, 1);
  m.add(0, 3, 5);
  const auto f = filter_min_document_frequency(m, 2);
  CHECK(f.vocab_size() == 2);  // terms 0 and 2 survive
  CHECK(f.num_docs() == 3);
  CHECK(f.doc_total(0) == 2);
  CHECK(f.doc_total(2) == 1);
}
