#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "screenal/corpus.hpp"
#include "screenal/csv.hpp"
#include "screenal/errors.hpp"
#include "screenal/synth.hpp"
#include "screenal/tfidf.hpp"

using namespace screenal;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/screenal_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

Corpus tiny_corpus(const std::vector<std::string>& texts) {
  Corpus c;
  c.predicateIds = {"p1"};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Document d;
    d.id = "d" + std::to_string(i);
    d.text = texts[i];
    d.gold["p1"] = i % 2 == 0 ? Label::In : Label::Out;
    c.documents.push_back(std::move(d));
  }
  return c;
}

}  // namespace

TEST_CASE("tokenize lowercases and keeps alnum runs of length >= 2") {
  CHECK(tokenize("Cat, cat! dog") == std::vector<std::string>{"cat", "cat", "dog"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("a B2 cc") == std::vector<std::string>{"b2", "cc"});
  CHECK(tokenize("x1y2-z") == std::vector<std::string>{"x1y2"});
}

TEST_CASE("tokenize handles UTF-8 by code points") {
  // Two-byte code points count once toward token length.
  CHECK(tokenize("caf\xc3\xa9 ok") == std::vector<std::string>{"caf\xc3\xa9", "ok"});
  // A single multi-byte code point alone is below the length threshold.
  CHECK(tokenize("\xc3\xa9") == std::vector<std::string>{});
  CHECK(tokenize("\xc3\xa9\xc3\xa9") == std::vector<std::string>{"\xc3\xa9\xc3\xa9"});
}

TEST_CASE("csv parser handles quoting") {
  const auto rows = csv::parse("a,b\n\"x, \"\"y\"\"\",2\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "x, \"y\"");
  CHECK(rows[1][1] == "2");
  CHECK_THROWS_AS(csv::parse("\"unterminated"), SchemaError);
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("load_corpus parses rows into documents") {
  const auto path = write_temp("corpus_ok.csv",
                               "id,text,p1,p2\n"
                               "d1,some words,1,0\n"
                               "d2,other words,0,1\n");
  const Corpus c = load_corpus(path, {"p1", "p2"});
  REQUIRE(c.size() == 2);
  CHECK(c.documents[0].id == "d1");
  CHECK(c.documents[0].gold.at("p1") == Label::In);
  CHECK(c.documents[0].gold.at("p2") == Label::Out);
  CHECK(c.documents[1].gold.at("p1") == Label::Out);
  CHECK(c.documents[1].gold.at("p2") == Label::In);
}

TEST_CASE("load_corpus reports schema problems") {
  const auto missing = write_temp("corpus_missing.csv", "id,text,p1\nd1,words,1\n");
  CHECK_THROWS_WITH_AS(load_corpus(missing, {"p1", "p2"}),
                       doctest::Contains("missing column 'p2'"), SchemaError);

  const auto badLabel = write_temp("corpus_badlabel.csv",
                                   "id,text,p1\nd1,words,1\nd2,words,2\n");
  CHECK_THROWS_WITH_AS(load_corpus(badLabel, {"p1"}), doctest::Contains("row 3"), SchemaError);

  const auto dup = write_temp("corpus_dup.csv", "id,text,p1\nd1,words,1\nd1,words,0\n");
  CHECK_THROWS_WITH_AS(load_corpus(dup, {"p1"}), doctest::Contains("duplicate document id"),
                       SchemaError);
}

TEST_CASE("measured selectivity matches the generator's documented value") {
  SynthConfig config;
  config.items = 500;
  config.selectivities = {0.61, 0.10};
  const Corpus generated = generate_synthetic_corpus(config);
  const auto path = "/tmp/screenal_selectivity.csv";
  write_corpus_csv(generated, path);
  const Corpus loaded = load_corpus(path, {"p1", "p2"});
  CHECK(loaded.selectivity("p1") == doctest::Approx(0.61).epsilon(1e-9));
  CHECK(loaded.selectivity("p2") == doctest::Approx(0.10).epsilon(1e-9));
}

TEST_CASE("build_vocabulary computes df and smoothed idf") {
  const Corpus c = tiny_corpus({"cat cat dog", "dog fish"});
  const Vocabulary v = build_vocabulary(c, {.minDf = 1, .maxFeatures = 100});
  REQUIRE(v.size() == 3);
  // Lexicographic index order.
  CHECK(v.terms == std::vector<std::string>{"cat", "dog", "fish"});
  CHECK(v.documentFrequency[v.termToIndex.at("cat")] == 1);
  CHECK(v.documentFrequency[v.termToIndex.at("dog")] == 2);
  CHECK(v.idf[v.termToIndex.at("dog")] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.idf[v.termToIndex.at("cat")] == doctest::Approx(1.4054651081081644).epsilon(1e-12));
  CHECK(v.idf[v.termToIndex.at("fish")] == doctest::Approx(1.4054651081081644).epsilon(1e-12));
}

TEST_CASE("build_vocabulary prunes by df and feature budget") {
  const Corpus c = tiny_corpus({"cat cat dog", "dog fish"});
  const Vocabulary byDf = build_vocabulary(c, {.minDf = 2, .maxFeatures = 100});
  CHECK(byDf.terms == std::vector<std::string>{"dog"});

  const Vocabulary byMax = build_vocabulary(c, {.minDf = 1, .maxFeatures = 1});
  CHECK(byMax.terms == std::vector<std::string>{"dog"});

  CHECK_THROWS_AS(build_vocabulary(c, {.minDf = 10, .maxFeatures = 100}), ConfigError);
}

TEST_CASE("vectorize produces L2-normalized tf-idf") {
  const Corpus c = tiny_corpus({"cat cat dog", "dog fish"});
  const Vocabulary v = build_vocabulary(c, {.minDf = 1, .maxFeatures = 100});

  const SparseVector x = vectorize(c.documents[0], v);
  REQUIRE(x.nnz() == 2);
  CHECK(x.indices[0] == v.termToIndex.at("cat"));
  CHECK(x.values[0] == doctest::Approx(0.9421556246632359).epsilon(1e-12));
  CHECK(x.values[1] == doctest::Approx(0.33517574332792605).epsilon(1e-12));

  Document oov;
  oov.text = "zebra unseen";
  CHECK(vectorize(oov, v).is_zero());

  Document single;
  single.text = "dog";
  const SparseVector s = vectorize(single, v);
  REQUIRE(s.nnz() == 1);
  CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vectorization is deterministic and unit-norm on a synthetic corpus") {
  SynthConfig config;
  config.items = 120;
  const Corpus c = generate_synthetic_corpus(config);
  const Vocabulary v = build_vocabulary(c, {.minDf = 1, .maxFeatures = 100000});
  for (const auto& doc : c.documents) {
    const SparseVector a = vectorize(doc, v);
    const SparseVector b = vectorize(doc, v);
    REQUIRE(a.indices == b.indices);
    REQUIRE(a.values == b.values);
    if (!a.is_zero()) {
      double norm2 = 0.0;
      for (double w : a.values) norm2 += w * w;
      CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-9);
    }
    for (std::size_t i = 1; i < a.indices.size(); ++i) CHECK(a.indices[i - 1] < a.indices[i]);
  }
  // minDf=1 with an unbounded budget keeps every token present in the corpus.
  std::set<std::string> all;
  for (const auto& doc : c.documents) {
    for (const auto& t : tokenize(doc.text)) all.insert(t);
  }
  CHECK(v.size() == all.size());
}

TEST_CASE("split_seed samples per predicate with stratification") {
  SynthConfig config;
  config.items = 1000;
  const Corpus c = generate_synthetic_corpus(config);

  Rng rng(5);
  const SeedSplit split = split_seed(c, 0.02, rng);
  CHECK(split.seed.size() == 40);  // 20 per predicate
  CHECK(split.pool.size() == 2 * 1000 - 40);
  for (const auto& pred : c.predicateIds) {
    std::size_t count = 0;
    for (const auto& pair : split.seed) {
      if (pair.predicateId == pred) ++count;
    }
    CHECK(count == 20);
  }

  Rng rngA(99), rngB(99);
  const SeedSplit a = split_seed(c, 0.02, rngA);
  const SeedSplit b = split_seed(c, 0.02, rngB);
  CHECK(a.seed == b.seed);
  CHECK(a.pool == b.pool);

  CHECK_THROWS_AS(split_seed(c, 0.0, rng), Error);
  CHECK_THROWS_AS(split_seed(c, 1.0, rng), Error);

  Corpus allIn = c;
  for (auto& doc : allIn.documents) doc.gold["p1"] = Label::In;
  CHECK_THROWS_WITH_AS(split_seed(allIn, 0.02, rng), doctest::Contains("stratification"),
                       Error);
}

TEST_CASE("split_seed always covers both gold classes per predicate") {
  SynthConfig config;
  config.items = 300;
  config.selectivities = {0.02, 0.5};  // rare IN class on p1
  const Corpus c = generate_synthetic_corpus(config);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const SeedSplit split = split_seed(c, 0.02, rng);
    for (const auto& pred : c.predicateIds) {
      bool sawIn = false, sawOut = false;
      for (const auto& pair : split.seed) {
        if (pair.predicateId != pred) continue;
        for (const auto& doc : c.documents) {
          if (doc.id == pair.itemId) {
            (doc.gold.at(pred) == Label::In ? sawIn : sawOut) = true;
            break;
          }
        }
      }
      CHECK(sawIn);
      CHECK(sawOut);
    }
  }
}

TEST_CASE("vocabulary dump is a well-formed TSV") {
  const Corpus c = tiny_corpus({"cat cat dog", "dog fish"});
  const Vocabulary v = build_vocabulary(c, {.minDf = 1, .maxFeatures = 100});
  const std::string path = "/tmp/screenal_vocab.tsv";
  write_vocabulary_tsv(v, path);
  std::ifstream in(path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "term\tdf\tidf");
  CHECK(first == "cat\t1\t1.405465");
}
