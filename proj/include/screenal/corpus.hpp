#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "screenal/rng.hpp"

namespace screenal {

enum class Label : std::uint8_t { Out = 0, In = 1 };

inline Label flip(Label l) { return l == Label::In ? Label::Out : Label::In; }

// One document of the finite pool. Gold labels exist for every predicate and
// are visible only to the crowd simulator and the evaluator, never to a
// sampling strategy.
struct Document {
  std::string id;
  std::string text;
  std::map<std::string, Label> gold;
};

struct Corpus {
  std::vector<Document> documents;      // stable ingestion order
  std::vector<std::string> predicateIds;

  std::size_t size() const { return documents.size(); }

  // Mean gold IN rate of a predicate.
  double selectivity(const std::string& predicateId) const;
};

// Lowercased maximal runs of alphanumeric code points, length >= 2 code
// points. UTF-8 is decoded per code point; non-ASCII code points count as
// word characters and are kept verbatim.
std::vector<std::string> tokenize(std::string_view text);

// CSV with header: id, text, then one 0/1 gold column per predicate id.
// Extra columns are ignored.
Corpus load_corpus(const std::string& path, const std::vector<std::string>& predicateIds);

// An (item, predicate) annotation unit.
struct PairKey {
  std::string itemId;
  std::string predicateId;
  auto operator<=>(const PairKey&) const = default;
};

struct SeedSplit {
  std::vector<PairKey> seed;  // initial labeled set, grouped by predicate
  std::vector<PairKey> pool;  // everything else
};

// Per predicate, a uniform sample of round(fraction * |items|) items (at
// least 2), adjusted so both gold classes appear when the corpus has both.
SeedSplit split_seed(const Corpus& corpus, double seedFractionPerPredicate, Rng& rng);

}  // namespace screenal
