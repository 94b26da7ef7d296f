#include "screenal/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "screenal/errors.hpp"
#include "screenal/kernels.hpp"

namespace screenal {

Vocabulary build_vocabulary(const Corpus& corpus, const VocabularyConfig& config) {
  if (config.minDf < 1) throw ConfigError("build_vocabulary: minDf must be >= 1");
  if (config.maxFeatures < 1) throw ConfigError("build_vocabulary: maxFeatures must be >= 1");

  std::map<std::string, std::uint32_t> df;
  for (const auto& doc : corpus.documents) {
    auto tokens = tokenize(doc.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[t];
  }

  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= config.minDf) kept.emplace_back(term, count);
  }
  if (kept.size() > config.maxFeatures) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    kept.resize(config.maxFeatures);
    std::sort(kept.begin(), kept.end());  // back to lexicographic for indexing
  }
  if (kept.empty()) {
    throw ConfigError("build_vocabulary: empty vocabulary (minDf=" +
                      std::to_string(config.minDf) + ")");
  }

  Vocabulary vocab;
  vocab.corpusSize = corpus.size();
  const double n = static_cast<double>(vocab.corpusSize);
  vocab.terms.reserve(kept.size());
  vocab.documentFrequency.reserve(kept.size());
  vocab.idf.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    vocab.terms.push_back(kept[i].first);
    vocab.termToIndex.emplace(kept[i].first, i);
    vocab.documentFrequency.push_back(kept[i].second);
    vocab.idf.push_back(std::log((1.0 + n) / (1.0 + kept[i].second)) + 1.0);
  }
  return vocab;
}

SparseVector vectorize(const Document& doc, const Vocabulary& vocab) {
  std::map<std::uint32_t, std::uint32_t> tf;  // index -> raw count, sorted
  for (const auto& token : tokenize(doc.text)) {
    const auto it = vocab.termToIndex.find(token);
    if (it != vocab.termToIndex.end()) ++tf[it->second];
  }

  SparseVector v;
  v.indices.reserve(tf.size());
  v.values.reserve(tf.size());
  for (const auto& [index, count] : tf) {
    v.indices.push_back(index);
    v.values.push_back(static_cast<double>(count) * vocab.idf[index]);
  }
  const double norm = std::sqrt(kernels::squared_norm(v.values));
  if (norm > 0.0) kernels::scale(v.values, 1.0 / norm);
  return v;
}

void write_vocabulary_tsv(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_vocabulary_tsv: cannot open '" + path + "'");
  out << "term\tdf\tidf\n";
  char buf[64];
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", vocab.idf[i]);
    out << vocab.terms[i] << '\t' << vocab.documentFrequency[i] << '\t' << buf << '\n';
  }
}

FeaturePool::FeaturePool(const Corpus& corpus, const Vocabulary& vocab) : dim_(vocab.size()) {
  ids_.reserve(corpus.size());
  vectors_.reserve(corpus.size());
  for (const auto& doc : corpus.documents) {
    index_.emplace(doc.id, ids_.size());
    ids_.push_back(doc.id);
    vectors_.push_back(vectorize(doc, vocab));
  }
}

const SparseVector& FeaturePool::at(const std::string& itemId) const {
  const auto it = index_.find(itemId);
  if (it == index_.end()) throw Error("FeaturePool: unknown item '" + itemId + "'");
  return vectors_[it->second];
}

}  // namespace screenal
