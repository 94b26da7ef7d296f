#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screenal/corpus.hpp"

namespace screenal {

// Generator for keyword-bearing screening corpora. Each predicate gets IN
// and OUT word pools; a document draws signal words from the pool matching
// its gold label, with a per-word flip rate that controls how hard the text
// is for a classifier, plus shared noise words. Gold labels hit the target
// selectivities exactly (up to rounding).
struct SynthConfig {
  std::size_t items = 2000;
  std::vector<double> selectivities = {0.6, 0.2};
  std::uint64_t seed = 7;

  std::size_t signalWordsPerPredicate = 3;
  std::size_t signalPoolSize = 30;
  std::size_t noiseWords = 12;
  std::size_t noisePoolSize = 150;
  double signalFlipRate = 0.25;
};

Corpus generate_synthetic_corpus(const SynthConfig& config);

// CSV in the ingestion schema: id, text, one 0/1 column per predicate.
void write_corpus_csv(const Corpus& corpus, const std::string& path);

}  // namespace screenal
