#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "screenal/corpus.hpp"

namespace screenal {

// L2-normalized tf-idf vector; indices strictly increasing. The zero vector
// is only produced for documents with no in-vocabulary tokens.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool is_zero() const { return indices.empty(); }
};

struct Vocabulary {
  std::vector<std::string> terms;  // index -> term, lexicographic order
  std::unordered_map<std::string, std::uint32_t> termToIndex;
  std::vector<std::uint32_t> documentFrequency;
  std::vector<double> idf;  // ln((1+N)/(1+df)) + 1
  std::size_t corpusSize = 0;

  std::size_t size() const { return terms.size(); }
};

struct VocabularyConfig {
  std::size_t minDf = 2;
  std::size_t maxFeatures = 50000;
};

// Terms with df >= minDf, truncated to the maxFeatures highest-df terms
// (ties broken lexicographically).
Vocabulary build_vocabulary(const Corpus& corpus, const VocabularyConfig& config);

// weight(t) = tf(t) * idf(t), L2-normalized. Out-of-vocabulary tokens are
// ignored.
SparseVector vectorize(const Document& doc, const Vocabulary& vocab);

// TSV dump: term, df, idf.
void write_vocabulary_tsv(const Vocabulary& vocab, const std::string& path);

// Immutable vectorized pool with id lookup.
class FeaturePool {
 public:
  FeaturePool(const Corpus& corpus, const Vocabulary& vocab);

  const SparseVector& at(const std::string& itemId) const;
  const std::vector<SparseVector>& vectors() const { return vectors_; }
  const std::vector<std::string>& itemIds() const { return ids_; }
  std::size_t dim() const { return dim_; }

 private:
  std::vector<std::string> ids_;
  std::vector<SparseVector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
};

}  // namespace screenal
