#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "screenal/corpus.hpp"
#include "screenal/rng.hpp"

namespace screenal {

// Every vote equals the gold label with this fixed probability.
struct PointAccuracy {
  double a = 1.0;
};

// Per-vote worker accuracy drawn from Beta(alpha, beta), rejection-resampled
// into (0.5, 1].
struct BetaAccuracy {
  double alpha = 1.0;
  double beta = 1.0;
};

using AccuracyModel = std::variant<PointAccuracy, BetaAccuracy>;

struct CrowdModel {
  std::map<std::string, AccuracyModel> perPredicate;

  const AccuracyModel& at(const std::string& predicateId) const;
};

double draw_worker_accuracy(const AccuracyModel& model, Rng& rng);

// n independent votes; each equals gold with probability given by a fresh
// worker accuracy draw.
std::vector<Label> simulate_votes(Label gold, int n, const AccuracyModel& model, Rng& rng);

// Strict majority wins; an exact tie resolves to IN.
Label aggregate_majority(const std::vector<Label>& votes);

struct VoteRecord {
  std::string itemId;
  std::string predicateId;
  std::vector<Label> votes;
  Label aggregated = Label::Out;
  std::size_t votesCharged = 0;
};

class BudgetLedger {
 public:
  explicit BudgetLedger(std::size_t totalVotesAllowed) : total_(totalVotesAllowed) {}

  std::size_t total() const { return total_; }
  std::size_t spent() const { return spent_; }
  std::size_t remaining() const { return total_ - spent_; }

  void charge(std::size_t votes);

 private:
  std::size_t total_;
  std::size_t spent_ = 0;
};

class LabelStore {
 public:
  bool has(const PairKey& pair) const { return records_.count(pair) > 0; }
  const VoteRecord* find(const PairKey& pair) const;
  const VoteRecord& at(const PairKey& pair) const;
  std::size_t size() const { return records_.size(); }
  const std::map<PairKey, VoteRecord>& records() const { return records_; }

  void insert(VoteRecord record);

 private:
  std::map<PairKey, VoteRecord> records_;
};

using GoldOracle = std::function<Label(const PairKey&)>;

// Simulates votesPerPair votes for every pair and records the aggregated
// labels. Atomic: capacity and duplicate checks happen before any mutation.
void annotate_pairs(const std::vector<PairKey>& pairs, int votesPerPair, const CrowdModel& crowd,
                    BudgetLedger& ledger, const GoldOracle& gold, Rng& rng, LabelStore& labels);

// CSV export: itemId, predicateId, voteIndex, vote, aggregated.
void write_vote_log(const LabelStore& labels, const std::string& path);

}  // namespace screenal
