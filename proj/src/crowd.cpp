#include "screenal/crowd.hpp"

#include <fstream>
#include <set>

#include "screenal/errors.hpp"

namespace screenal {

const AccuracyModel& CrowdModel::at(const std::string& predicateId) const {
  const auto it = perPredicate.find(predicateId);
  if (it == perPredicate.end()) {
    throw Error("CrowdModel: no accuracy model for predicate '" + predicateId + "'");
  }
  return it->second;
}

double draw_worker_accuracy(const AccuracyModel& model, Rng& rng) {
  if (const auto* point = std::get_if<PointAccuracy>(&model)) {
    if (!(point->a > 0.0 && point->a <= 1.0)) {
      throw Error("draw_worker_accuracy: point accuracy must be in (0, 1]");
    }
    return point->a;
  }
  const auto& beta = std::get<BetaAccuracy>(model);
  if (!(beta.alpha > 0.0) || !(beta.beta > 0.0)) {
    throw Error("draw_worker_accuracy: beta parameters must be positive");
  }
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double a = rng.beta(beta.alpha, beta.beta);
    if (a > 0.5 && a <= 1.0) return a;
  }
  throw NumericError("draw_worker_accuracy: Beta(" + std::to_string(beta.alpha) + ", " +
                     std::to_string(beta.beta) + ") has negligible mass above 0.5");
}

std::vector<Label> simulate_votes(Label gold, int n, const AccuracyModel& model, Rng& rng) {
  if (n < 1) throw Error("simulate_votes: vote count must be >= 1");
  std::vector<Label> votes;
  votes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = draw_worker_accuracy(model, rng);
    votes.push_back(rng.uniform01() < a ? gold : flip(gold));
  }
  return votes;
}

Label aggregate_majority(const std::vector<Label>& votes) {
  if (votes.empty()) throw Error("aggregate_majority: empty vote list");
  std::size_t in = 0;
  for (Label v : votes) {
    if (v == Label::In) ++in;
  }
  // Tie resolves to IN: a false OUT on any predicate excludes the item for good.
  return 2 * in >= votes.size() ? Label::In : Label::Out;
}

void BudgetLedger::charge(std::size_t votes) {
  if (votes > remaining()) {
    throw BudgetExhaustedError("BudgetLedger: requested " + std::to_string(votes) +
                               " votes with " + std::to_string(remaining()) + " remaining");
  }
  spent_ += votes;
}

const VoteRecord* LabelStore::find(const PairKey& pair) const {
  const auto it = records_.find(pair);
  return it == records_.end() ? nullptr : &it->second;
}

const VoteRecord& LabelStore::at(const PairKey& pair) const {
  const auto* rec = find(pair);
  if (rec == nullptr) {
    throw Error("LabelStore: no record for (" + pair.itemId + ", " + pair.predicateId + ")");
  }
  return *rec;
}

void LabelStore::insert(VoteRecord record) {
  PairKey key{record.itemId, record.predicateId};
  if (!records_.emplace(std::move(key), std::move(record)).second) {
    throw Error("LabelStore: pair already labeled");
  }
}

void annotate_pairs(const std::vector<PairKey>& pairs, int votesPerPair, const CrowdModel& crowd,
                    BudgetLedger& ledger, const GoldOracle& gold, Rng& rng, LabelStore& labels) {
  if (votesPerPair < 1) throw Error("annotate_pairs: votesPerPair must be >= 1");

  std::set<PairKey> unique;
  for (const auto& pair : pairs) {
    if (labels.has(pair)) {
      throw Error("annotate_pairs: pair (" + pair.itemId + ", " + pair.predicateId +
                  ") already labeled");
    }
    if (!unique.insert(pair).second) {
      throw Error("annotate_pairs: duplicate pair (" + pair.itemId + ", " + pair.predicateId +
                  ") in batch");
    }
    crowd.at(pair.predicateId);  // fail fast on missing accuracy model
  }
  const std::size_t cost = pairs.size() * static_cast<std::size_t>(votesPerPair);
  if (cost > ledger.remaining()) {
    throw BudgetExhaustedError("annotate_pairs: batch needs " + std::to_string(cost) +
                               " votes with " + std::to_string(ledger.remaining()) +
                               " remaining");
  }

  for (const auto& pair : pairs) {
    VoteRecord rec;
    rec.itemId = pair.itemId;
    rec.predicateId = pair.predicateId;
    rec.votes = simulate_votes(gold(pair), votesPerPair, crowd.at(pair.predicateId), rng);
    rec.aggregated = aggregate_majority(rec.votes);
    rec.votesCharged = rec.votes.size();
    ledger.charge(rec.votesCharged);
    labels.insert(std::move(rec));
  }
}

void write_vote_log(const LabelStore& labels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_vote_log: cannot open '" + path + "'");
  out << "item_id,predicate_id,vote_index,vote,aggregated\n";
  for (const auto& [key, rec] : labels.records()) {
    for (std::size_t i = 0; i < rec.votes.size(); ++i) {
      out << key.itemId << ',' << key.predicateId << ',' << i << ','
          << (rec.votes[i] == Label::In ? 1 : 0) << ','
          << (rec.aggregated == Label::In ? 1 : 0) << '\n';
    }
  }
}

}  // namespace screenal
