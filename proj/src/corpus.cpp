#include "screenal/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "screenal/csv.hpp"
#include "screenal/errors.hpp"

namespace screenal {

double Corpus::selectivity(const std::string& predicateId) const {
  if (documents.empty()) return 0.0;
  std::size_t in = 0;
  for (const auto& d : documents) {
    auto it = d.gold.find(predicateId);
    if (it == d.gold.end()) throw Error("selectivity: unknown predicate '" + predicateId + "'");
    if (it->second == Label::In) ++in;
  }
  return static_cast<double>(in) / static_cast<double>(documents.size());
}

namespace {

// Decodes one UTF-8 code point starting at i; returns (codepoint, length).
// Invalid sequences decode as (0xFFFD, 1).
std::pair<std::uint32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<std::uint8_t>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + len > s.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<std::uint8_t>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool ascii_alnum(std::uint32_t cp) {
  return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t currentLen = 0;  // in code points

  auto flush = [&] {
    if (currentLen >= 2) tokens.push_back(current);
    current.clear();
    currentLen = 0;
  };

  for (std::size_t i = 0; i < text.size();) {
    const auto [cp, len] = decode_utf8(text, i);
    const bool wordChar = cp >= 0x80 ? cp != 0xFFFD : ascii_alnum(cp);
    if (wordChar) {
      if (cp < 0x80) {
        current.push_back(static_cast<char>(cp >= 'A' && cp <= 'Z' ? cp - 'A' + 'a' : cp));
      } else {
        current.append(text.substr(i, len));
      }
      ++currentLen;
    } else {
      flush();
    }
    i += len;
  }
  flush();
  return tokens;
}

Corpus load_corpus(const std::string& path, const std::vector<std::string>& predicateIds) {
  const auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError("load_corpus: '" + path + "' is empty");

  const auto& header = rows.front();
  auto columnOf = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw SchemaError("load_corpus: missing column '" + name + "' in '" + path + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t idCol = columnOf("id");
  const std::size_t textCol = columnOf("text");
  std::vector<std::size_t> goldCols;
  goldCols.reserve(predicateIds.size());
  for (const auto& p : predicateIds) goldCols.push_back(columnOf(p));

  Corpus corpus;
  corpus.predicateIds = predicateIds;
  corpus.documents.reserve(rows.size() - 1);
  std::unordered_set<std::string> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string rowTag = "row " + std::to_string(r + 1);
    if (row.size() < header.size()) {
      throw SchemaError("load_corpus: " + rowTag + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(row.size()));
    }
    Document doc;
    doc.id = row[idCol];
    doc.text = row[textCol];
    if (!seen.insert(doc.id).second) {
      throw SchemaError("load_corpus: " + rowTag + ": duplicate document id '" + doc.id + "'");
    }
    for (std::size_t p = 0; p < predicateIds.size(); ++p) {
      const std::string& raw = row[goldCols[p]];
      Label label;
      if (raw == "1") label = Label::In;
      else if (raw == "0") label = Label::Out;
      else {
        throw SchemaError("load_corpus: " + rowTag + ": unparsable label '" + raw +
                          "' for predicate '" + predicateIds[p] + "'");
      }
      doc.gold[predicateIds[p]] = label;
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

SeedSplit split_seed(const Corpus& corpus, double seedFractionPerPredicate, Rng& rng) {
  if (!(seedFractionPerPredicate > 0.0 && seedFractionPerPredicate < 1.0)) {
    throw Error("split_seed: seed fraction must be in (0, 1)");
  }
  const std::size_t n = corpus.size();
  if (n == 0) throw Error("split_seed: empty corpus");

  SeedSplit out;
  for (const auto& pred : corpus.predicateIds) {
    std::vector<std::size_t> inItems, outItems;
    for (std::size_t i = 0; i < n; ++i) {
      (corpus.documents[i].gold.at(pred) == Label::In ? inItems : outItems).push_back(i);
    }
    if (inItems.empty() || outItems.empty()) {
      throw Error("split_seed: stratification error: predicate '" + pred +
                  "' has a single gold class");
    }

    std::size_t m = static_cast<std::size_t>(std::llround(seedFractionPerPredicate *
                                                          static_cast<double>(n)));
    m = std::clamp<std::size_t>(m, 2, n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::size_t> sample(order.begin(), order.begin() + static_cast<long>(m));

    // Force at least one item of each gold class into the sample.
    for (Label cls : {Label::In, Label::Out}) {
      const bool present = std::any_of(sample.begin(), sample.end(), [&](std::size_t i) {
        return corpus.documents[i].gold.at(pred) == cls;
      });
      if (!present) {
        const auto& candidates = cls == Label::In ? inItems : outItems;
        sample[rng.below(sample.size())] = candidates[rng.below(candidates.size())];
      }
    }

    std::vector<bool> inSeed(n, false);
    for (std::size_t i : sample) inSeed[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      (inSeed[i] ? out.seed : out.pool).push_back({corpus.documents[i].id, pred});
    }
  }
  return out;
}

}  // namespace screenal
