#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "screenal/crowd.hpp"
#include "screenal/model.hpp"
#include "screenal/tfidf.hpp"

namespace screenal {

struct Predicate {
  std::string id;
  std::string text;  // human-readable criterion
};

// Ordered predicates combined conjunctively: an item is relevant only when
// every predicate holds.
struct PredicateSet {
  std::vector<Predicate> predicates;

  std::vector<std::string> ids() const;
  void validate() const;  // nonempty, unique ids
};

enum class Provenance : std::uint8_t { Crowd, Machine };

struct ScreeningDecision {
  std::string itemId;
  std::vector<double> perPredicateProbIn;  // aligned with PredicateSet order
  std::vector<Provenance> provenance;
  double probOut = 0.0;
  Label decision = Label::Out;
};

// Prob(i in OUT) = 1 - prod_p Prob(i_p in IN).
double exclusion_probability(std::span<const double> inProbs);

// Crowd labels override model estimates per predicate; OUT iff probOut is at
// least the exclusion threshold.
ScreeningDecision decide_item(const std::string& itemId, const SparseVector& x,
                              const PredicateSet& predicates, const LabelStore& labels,
                              const ModelRegistry& models, double exclusionThreshold = 0.5);

struct MetricsRecord {
  std::string strategy;
  int votesPerPair = 0;
  double annotationProportion = 0.0;
  std::uint64_t runSeed = 0;
  double precisionIn = 0.0;
  double recallIn = 0.0;
  double f1In = 0.0;
  double precisionOut = 0.0;
  double recallOut = 0.0;
  double f1Out = 0.0;
  std::size_t budgetSpent = 0;
};

// Precision/recall/F1 for both classes against per-item gold relevance
// (gold IN iff all predicate gold labels are IN). Decisions must cover the
// pool exactly once. Zero denominators yield 0; f1 = 2PR/(P+R) when P+R > 0.
MetricsRecord compute_metrics(const std::vector<ScreeningDecision>& decisions,
                              const std::map<std::string, Label>& goldRelevance);

// Conjunction of predicate gold labels per item.
std::map<std::string, Label> gold_item_relevance(const Corpus& corpus);

// CSV export: itemId, per-predicate probability, probOut, decision,
// per-predicate provenance.
void write_decisions(const std::vector<ScreeningDecision>& decisions,
                     const PredicateSet& predicates, const std::string& path);

}  // namespace screenal
