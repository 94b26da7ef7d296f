#include "screenal/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "screenal/errors.hpp"

namespace screenal {

StrategyKind parse_strategy(std::string_view name) {
  if (name == "random") return StrategyKind::Random;
  if (name == "uncertainty") return StrategyKind::Uncertainty;
  if (name == "objective-aware") return StrategyKind::ObjectiveAware;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected random, uncertainty or objective-aware)");
}

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Random: return "random";
    case StrategyKind::Uncertainty: return "uncertainty";
    case StrategyKind::ObjectiveAware: return "objective-aware";
  }
  throw Error("strategy_name: invalid kind");
}

double estimate_in_probability(const PairKey& pair, const LabelStore& labels,
                               const ModelRegistry& models, const SparseVector& x) {
  if (const VoteRecord* rec = labels.find(pair)) {
    return rec->aggregated == Label::In ? 1.0 : 0.0;
  }
  return predict_proba(models.at(pair.predicateId), x);
}

namespace {

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(std::string(who) + ": probability out of [0, 1]");
  }
}

}  // namespace

double uncertainty_score(double probIn) {
  check_probability(probIn, "uncertainty_score");
  return 1.0 - std::max(probIn, 1.0 - probIn);
}

double objective_aware_score(double targetProbIn, std::span<const double> otherProbsIn) {
  double certainty = 1.0;
  for (double p : otherProbsIn) {
    check_probability(p, "objective_aware_score");
    certainty *= p;
  }
  return uncertainty_score(targetProbIn) * certainty;
}

double random_score(Rng& rng) { return rng.uniform01(); }

PairScorer make_scorer(StrategyKind kind, const std::vector<std::string>& predicateIds,
                       const FeaturePool& features, const LabelStore& labels,
                       const ModelRegistry& models, Rng& rng) {
  switch (kind) {
    case StrategyKind::Random:
      return [&rng](const PairKey&) { return random_score(rng); };
    case StrategyKind::Uncertainty:
      return [&features, &labels, &models](const PairKey& pair) {
        return uncertainty_score(
            estimate_in_probability(pair, labels, models, features.at(pair.itemId)));
      };
    case StrategyKind::ObjectiveAware:
      return [&predicateIds, &features, &labels, &models](const PairKey& pair) {
        const SparseVector& x = features.at(pair.itemId);
        const double target = estimate_in_probability(pair, labels, models, x);
        std::vector<double> others;
        others.reserve(predicateIds.size() - 1);
        for (const auto& p : predicateIds) {
          if (p == pair.predicateId) continue;
          others.push_back(estimate_in_probability({pair.itemId, p}, labels, models, x));
        }
        return objective_aware_score(target, others);
      };
  }
  throw Error("make_scorer: invalid strategy kind");
}

namespace {

// Unlabeled, deduplicated pool in canonical order.
std::vector<PairKey> canonical_pool(const std::vector<PairKey>& pool, const LabelStore& labels) {
  std::vector<PairKey> out;
  out.reserve(pool.size());
  for (const auto& pair : pool) {
    if (!labels.has(pair)) out.push_back(pair);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<PairScore> score_canonical(const std::vector<PairKey>& canonical,
                                       const PairScorer& scorer) {
  std::vector<PairScore> scored;
  scored.reserve(canonical.size());
  for (const auto& pair : canonical) {
    const double s = scorer(pair);
    if (!std::isfinite(s)) {
      throw NumericError("select_batch: non-finite score for (" + pair.itemId + ", " +
                         pair.predicateId + ")");
    }
    scored.push_back({pair, s});
  }
  return scored;
}

bool better(const PairScore& a, const PairScore& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.pair < b.pair;
}

}  // namespace

std::vector<PairScore> score_pool(const std::vector<PairKey>& pool, const PairScorer& scorer,
                                  const LabelStore& labels) {
  return score_canonical(canonical_pool(pool, labels), scorer);
}

std::vector<PairKey> select_batch(const std::vector<PairKey>& pool, const PairScorer& scorer,
                                  std::size_t k, const LabelStore& labels) {
  if (k < 1) throw Error("select_batch: k must be >= 1");
  auto scored = score_pool(pool, scorer, labels);
  std::sort(scored.begin(), scored.end(), better);
  if (scored.size() > k) scored.resize(k);
  std::vector<PairKey> out;
  out.reserve(scored.size());
  for (auto& ps : scored) out.push_back(std::move(ps.pair));
  return out;
}

std::vector<PairKey> select_batch_round_robin(const std::vector<PairKey>& pool,
                                              const PairScorer& scorer, std::size_t k,
                                              const LabelStore& labels,
                                              const std::vector<std::string>& predicateOrder) {
  if (k < 1) throw Error("select_batch_round_robin: k must be >= 1");
  auto scored = score_pool(pool, scorer, labels);

  std::vector<std::vector<PairScore>> queues(predicateOrder.size());
  for (auto& ps : scored) {
    const auto it = std::find(predicateOrder.begin(), predicateOrder.end(), ps.pair.predicateId);
    if (it == predicateOrder.end()) {
      throw Error("select_batch_round_robin: pair references unknown predicate '" +
                  ps.pair.predicateId + "'");
    }
    queues[static_cast<std::size_t>(it - predicateOrder.begin())].push_back(std::move(ps));
  }
  for (auto& q : queues) std::sort(q.begin(), q.end(), better);

  std::vector<PairKey> out;
  std::vector<std::size_t> heads(queues.size(), 0);
  bool progressed = true;
  while (out.size() < k && progressed) {
    progressed = false;
    for (std::size_t p = 0; p < queues.size() && out.size() < k; ++p) {
      if (heads[p] < queues[p].size()) {
        out.push_back(queues[p][heads[p]++].pair);
        progressed = true;
      }
    }
  }
  return out;
}

}  // namespace screenal
