#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenal/crowd.hpp"
#include "screenal/model.hpp"
#include "screenal/rng.hpp"
#include "screenal/tfidf.hpp"

namespace screenal {

enum class StrategyKind { Random, Uncertainty, ObjectiveAware };

StrategyKind parse_strategy(std::string_view name);
std::string_view strategy_name(StrategyKind kind);

struct PairScore {
  PairKey pair;
  double score = 0.0;
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::ObjectiveAware;
  std::size_t batchSize = 50;
  bool roundRobin = false;  // per-predicate round-robin instead of global top-k
};

// Crowd knowledge dominates the model: an aggregated label maps to 1/0,
// otherwise the predicate's classifier supplies Prob(i_p in IN).
double estimate_in_probability(const PairKey& pair, const LabelStore& labels,
                               const ModelRegistry& models, const SparseVector& x);

// 1 - max(p, 1-p): distance-to-boundary uncertainty for a binary posterior.
double uncertainty_score(double probIn);

// Uncertainty on the target predicate times the certainty-of-inclusion
// product over the remaining predicates; targets overall screening error.
double objective_aware_score(double targetProbIn, std::span<const double> otherProbsIn);

double random_score(Rng& rng);

using PairScorer = std::function<double(const PairKey&)>;

// Scorer over unlabeled pairs for the given strategy. The random scorer
// consumes one rng draw per call, so callers must score pairs in a canonical
// order for reproducibility (select_batch and score_pool do).
PairScorer make_scorer(StrategyKind kind, const std::vector<std::string>& predicateIds,
                       const FeaturePool& features, const LabelStore& labels,
                       const ModelRegistry& models, Rng& rng);

// Scores every unlabeled pair in canonical (itemId, predicateId) order.
std::vector<PairScore> score_pool(const std::vector<PairKey>& pool, const PairScorer& scorer,
                                  const LabelStore& labels);

// Global top-k by score, ties broken by lexicographically smaller pair.
// Already-labeled pairs and duplicates are dropped; returns fewer than k
// only when the remaining pool is smaller than k.
std::vector<PairKey> select_batch(const std::vector<PairKey>& pool, const PairScorer& scorer,
                                  std::size_t k, const LabelStore& labels);

// Ablation variant: cycles predicates in the given order, taking each
// predicate's best remaining pair until k pairs are collected.
std::vector<PairKey> select_batch_round_robin(const std::vector<PairKey>& pool,
                                              const PairScorer& scorer, std::size_t k,
                                              const LabelStore& labels,
                                              const std::vector<std::string>& predicateOrder);

}  // namespace screenal
