#include "screenal/screening.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "screenal/errors.hpp"
#include "screenal/strategies.hpp"

namespace screenal {

std::vector<std::string> PredicateSet::ids() const {
  std::vector<std::string> out;
  out.reserve(predicates.size());
  for (const auto& p : predicates) out.push_back(p.id);
  return out;
}

void PredicateSet::validate() const {
  if (predicates.empty()) throw Error("PredicateSet: must be nonempty");
  std::set<std::string> seen;
  for (const auto& p : predicates) {
    if (p.id.empty()) throw Error("PredicateSet: empty predicate id");
    if (!seen.insert(p.id).second) throw Error("PredicateSet: duplicate id '" + p.id + "'");
  }
}

double exclusion_probability(std::span<const double> inProbs) {
  double in = 1.0;
  for (double p : inProbs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error("exclusion_probability: probability out of [0, 1]");
    }
    in *= p;
  }
  return 1.0 - in;
}

ScreeningDecision decide_item(const std::string& itemId, const SparseVector& x,
                              const PredicateSet& predicates, const LabelStore& labels,
                              const ModelRegistry& models, double exclusionThreshold) {
  ScreeningDecision d;
  d.itemId = itemId;
  d.perPredicateProbIn.reserve(predicates.predicates.size());
  d.provenance.reserve(predicates.predicates.size());
  for (const auto& pred : predicates.predicates) {
    const PairKey pair{itemId, pred.id};
    d.perPredicateProbIn.push_back(estimate_in_probability(pair, labels, models, x));
    d.provenance.push_back(labels.has(pair) ? Provenance::Crowd : Provenance::Machine);
  }
  d.probOut = exclusion_probability(d.perPredicateProbIn);
  d.decision = d.probOut >= exclusionThreshold ? Label::Out : Label::In;
  return d;
}

MetricsRecord compute_metrics(const std::vector<ScreeningDecision>& decisions,
                              const std::map<std::string, Label>& goldRelevance) {
  if (decisions.size() != goldRelevance.size()) {
    throw Error("compute_metrics: decisions must cover the pool exactly once (" +
                std::to_string(decisions.size()) + " decisions, " +
                std::to_string(goldRelevance.size()) + " items)");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::set<std::string> seen;
  for (const auto& d : decisions) {
    const auto it = goldRelevance.find(d.itemId);
    if (it == goldRelevance.end()) {
      throw Error("compute_metrics: decision for unknown item '" + d.itemId + "'");
    }
    if (!seen.insert(d.itemId).second) {
      throw Error("compute_metrics: duplicate decision for item '" + d.itemId + "'");
    }
    const bool goldIn = it->second == Label::In;
    const bool predIn = d.decision == Label::In;
    if (predIn && goldIn) ++tp;
    else if (predIn && !goldIn) ++fp;
    else if (!predIn && goldIn) ++fn;
    else ++tn;
  }

  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  auto f1 = [](double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; };

  MetricsRecord m;
  m.precisionIn = ratio(tp, tp + fp);
  m.recallIn = ratio(tp, tp + fn);
  m.f1In = f1(m.precisionIn, m.recallIn);
  m.precisionOut = ratio(tn, tn + fn);
  m.recallOut = ratio(tn, tn + fp);
  m.f1Out = f1(m.precisionOut, m.recallOut);
  return m;
}

std::map<std::string, Label> gold_item_relevance(const Corpus& corpus) {
  std::map<std::string, Label> out;
  for (const auto& doc : corpus.documents) {
    bool allIn = true;
    for (const auto& pred : corpus.predicateIds) {
      if (doc.gold.at(pred) == Label::Out) {
        allIn = false;
        break;
      }
    }
    out[doc.id] = allIn ? Label::In : Label::Out;
  }
  return out;
}

void write_decisions(const std::vector<ScreeningDecision>& decisions,
                     const PredicateSet& predicates, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_decisions: cannot open '" + path + "'");
  out << "item_id";
  for (const auto& p : predicates.predicates) out << ",prob_in_" << p.id;
  out << ",prob_out,decision";
  for (const auto& p : predicates.predicates) out << ",provenance_" << p.id;
  out << '\n';
  char buf[32];
  for (const auto& d : decisions) {
    out << d.itemId;
    for (double p : d.perPredicateProbIn) {
      std::snprintf(buf, sizeof(buf), ",%.6f", p);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.6f", d.probOut);
    out << buf << ',' << (d.decision == Label::In ? "IN" : "OUT");
    for (Provenance prov : d.provenance) {
      out << ',' << (prov == Provenance::Crowd ? "crowd" : "machine");
    }
    out << '\n';
  }
}

}  // namespace screenal
