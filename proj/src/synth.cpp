#include "screenal/synth.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "screenal/csv.hpp"
#include "screenal/errors.hpp"
#include "screenal/rng.hpp"

namespace screenal {

Corpus generate_synthetic_corpus(const SynthConfig& config) {
  if (config.items < 4) throw ConfigError("gen-synth: items must be >= 4");
  if (config.selectivities.empty()) throw ConfigError("gen-synth: selectivities must be nonempty");
  for (double s : config.selectivities) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("gen-synth: selectivities must be in (0, 1)");
  }
  if (!(config.signalFlipRate >= 0.0 && config.signalFlipRate < 0.5)) {
    throw ConfigError("gen-synth: signalFlipRate must be in [0, 0.5)");
  }

  const std::size_t n = config.items;
  const std::size_t npred = config.selectivities.size();
  Rng rng(config.seed);

  Corpus corpus;
  corpus.predicateIds.reserve(npred);
  for (std::size_t p = 0; p < npred; ++p) {
    corpus.predicateIds.push_back("p" + std::to_string(p + 1));
  }

  // Gold assignment with exact per-predicate IN counts, independent across
  // predicates.
  std::vector<std::vector<Label>> gold(npred, std::vector<Label>(n, Label::Out));
  for (std::size_t p = 0; p < npred; ++p) {
    auto inCount = static_cast<std::size_t>(
        std::llround(config.selectivities[p] * static_cast<double>(n)));
    inCount = std::min(std::max<std::size_t>(inCount, 1), n - 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < inCount; ++i) gold[p][order[i]] = Label::In;
  }

  const int width = static_cast<int>(std::to_string(n - 1).size());
  corpus.documents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Document doc;
    std::string num = std::to_string(i);
    doc.id = "d" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num;

    std::string text;
    for (std::size_t p = 0; p < npred; ++p) {
      const std::string& pid = corpus.predicateIds[p];
      doc.gold[pid] = gold[p][i];
      for (std::size_t s = 0; s < config.signalWordsPerPredicate; ++s) {
        Label effective = gold[p][i];
        if (rng.uniform01() < config.signalFlipRate) effective = flip(effective);
        const char* cls = effective == Label::In ? "yes" : "non";
        text += pid + cls + std::to_string(rng.below(config.signalPoolSize)) + " ";
      }
    }
    for (std::size_t s = 0; s < config.noiseWords; ++s) {
      text += "filler" + std::to_string(rng.below(config.noisePoolSize)) + " ";
    }
    if (!text.empty()) text.pop_back();
    doc.text = std::move(text);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void write_corpus_csv(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_corpus_csv: cannot open '" + path + "'");
  out << "id,text";
  for (const auto& p : corpus.predicateIds) out << ',' << p;
  out << '\n';
  for (const auto& doc : corpus.documents) {
    out << csv::escape(doc.id) << ',' << csv::escape(doc.text);
    for (const auto& p : corpus.predicateIds) {
      out << ',' << (doc.gold.at(p) == Label::In ? 1 : 0);
    }
    out << '\n';
  }
}

}  // namespace screenal
