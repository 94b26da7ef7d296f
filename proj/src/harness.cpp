#include "screenal/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "screenal/errors.hpp"

namespace screenal {

Label PreparedData::gold(const PairKey& pair) const {
  for (const auto& doc : corpus.documents) {
    if (doc.id == pair.itemId) return doc.gold.at(pair.predicateId);
  }
  throw Error("gold oracle: unknown item '" + pair.itemId + "'");
}

PreparedData prepare_data(const ExperimentConfig& config) {
  std::vector<std::string> predicateIds;
  for (const auto& p : config.predicates) predicateIds.push_back(p.id);
  Corpus corpus = load_corpus(config.datasetPath, predicateIds);
  Vocabulary vocab = build_vocabulary(corpus, config.vocabulary);
  FeaturePool features(corpus, vocab);
  auto goldRelevance = gold_item_relevance(corpus);
  return PreparedData{std::move(corpus), std::move(vocab), std::move(features),
                      std::move(goldRelevance)};
}

namespace {

// Fast id -> gold lookup for the oracle closure.
struct GoldIndex {
  std::map<std::string, const Document*> byId;

  explicit GoldIndex(const Corpus& corpus) {
    for (const auto& doc : corpus.documents) byId.emplace(doc.id, &doc);
  }

  Label operator()(const PairKey& pair) const {
    const auto it = byId.find(pair.itemId);
    if (it == byId.end()) throw Error("gold oracle: unknown item '" + pair.itemId + "'");
    return it->second->gold.at(pair.predicateId);
  }
};

std::uint64_t derive_train_seed(std::uint64_t runSeed, std::size_t iteration,
                                std::size_t predIndex) {
  using detail::splitmix64;
  using detail::fnv1a64;
  std::uint64_t s = splitmix64(runSeed ^ splitmix64(fnv1a64("train")));
  s = splitmix64(s ^ (static_cast<std::uint64_t>(iteration) * 0x9E3779B97F4A7C15ULL));
  return splitmix64(s ^ static_cast<std::uint64_t>(predIndex));
}

// Model used when the crowd labels for a predicate are still single-class:
// zero weights with a Laplace-smoothed prior as bias, so probabilities stay
// informative until a minority label arrives.
LinearModel prior_model(std::size_t dim, std::size_t nIn, std::size_t n) {
  const double p = (static_cast<double>(nIn) + 1.0) / (static_cast<double>(n) + 2.0);
  LinearModel m;
  m.weights.assign(dim, 0.0);
  m.bias = std::log(p / (1.0 - p));
  return m;
}

ModelRegistry train_models(const ExperimentConfig& config, const PreparedData& data,
                           const LabelStore& labels, std::uint64_t runSeed,
                           std::size_t iteration) {
  ModelRegistry registry;
  for (std::size_t pi = 0; pi < config.predicates.size(); ++pi) {
    const std::string& pred = config.predicates[pi].id;
    TrainingSet set;
    for (const auto& [key, rec] : labels.records()) {
      if (key.predicateId != pred) continue;
      set.xs.push_back(data.features.at(key.itemId));
      set.ys.push_back(rec.aggregated);
    }
    const auto nIn = static_cast<std::size_t>(
        std::count(set.ys.begin(), set.ys.end(), Label::In));
    if (set.ys.empty() || nIn == 0 || nIn == set.ys.size()) {
      registry.models.emplace(pred, prior_model(data.vocab.size(), nIn, set.ys.size()));
      continue;
    }
    set.weights = balanced_class_weights(set.ys);
    Hyperparams hyper = config.classifier;
    hyper.rngSeed = derive_train_seed(runSeed, iteration, pi);
    registry.models.emplace(pred, train(set, data.vocab.size(), hyper));
  }
  return registry;
}

void assert_budget(const BudgetLedger& ledger, const LabelStore& labels, int votesPerPair) {
  std::size_t charged = 0;
  for (const auto& [key, rec] : labels.records()) {
    (void)key;
    charged += rec.votesCharged;
  }
  const std::size_t expected = labels.size() * static_cast<std::size_t>(votesPerPair);
  if (ledger.spent() != expected || ledger.spent() != charged) {
    throw Error("budget invariant violated: spent=" + std::to_string(ledger.spent()) +
                " charged=" + std::to_string(charged) + " expected=" +
                std::to_string(expected));
  }
  if (ledger.spent() > ledger.total()) {
    throw Error("budget invariant violated: ledger overdrawn");
  }
}

void validate_cell(const CellKey& cell) {
  if (cell.votesPerPair < 1) throw Error("run: votesPerPair must be >= 1");
  if (!(cell.proportion > 0.0 && cell.proportion <= 1.0)) {
    throw Error("run: annotationProportion must be in (0, 1]");
  }
}

std::vector<PairKey> sorted_batch(std::vector<PairKey> batch) {
  std::sort(batch.begin(), batch.end());
  return batch;
}

}  // namespace

RunArtifacts run_single_detailed(const ExperimentConfig& config, const PreparedData& data,
                                 const CellKey& cell, std::uint64_t runSeed) {
  validate_cell(cell);
  const PredicateSet predicateSet = config.predicate_set();
  const CrowdModel crowd = config.crowd_model();
  const std::vector<std::string> predicateIds = predicateSet.ids();

  const std::size_t totalPairs = data.corpus.size() * predicateIds.size();
  const auto cap = static_cast<std::size_t>(
      std::floor(cell.proportion * static_cast<double>(totalPairs) + 1e-9));
  if (cap < 1) throw Error("run: annotation cap is zero; proportion too small");

  Rng splitRng = Rng::stream(runSeed, "split");
  Rng crowdRng = Rng::stream(runSeed, "crowd");
  Rng strategyRng = Rng::stream(runSeed, "strategy");

  SeedSplit split = split_seed(data.corpus, config.seedFraction, splitRng);
  if (split.seed.size() > cap) {
    throw Error("run: seed set of " + std::to_string(split.seed.size()) +
                " pairs exceeds the annotation cap of " + std::to_string(cap));
  }

  BudgetLedger ledger(cap * static_cast<std::size_t>(cell.votesPerPair));
  LabelStore labels;
  const GoldIndex gold(data.corpus);

  annotate_pairs(split.seed, cell.votesPerPair, crowd, ledger, gold, crowdRng, labels);
  assert_budget(ledger, labels, cell.votesPerPair);

  std::vector<PairKey> pool = std::move(split.pool);
  std::sort(pool.begin(), pool.end());

  std::size_t iteration = 0;
  while (!pool.empty()) {
    const std::size_t remaining = cap - labels.size();
    const std::size_t take = std::min(config.batchSize, pool.size());
    // A batch never splits across the proportion boundary; realized
    // annotation may undershoot the cap by up to batchSize - 1 pairs.
    if (remaining < take) break;

    const ModelRegistry models = train_models(config, data, labels, runSeed, iteration);
    const PairScorer scorer = make_scorer(cell.strategy, predicateIds, data.features, labels,
                                          models, strategyRng);
    std::vector<PairKey> batch =
        config.roundRobin
            ? select_batch_round_robin(pool, scorer, config.batchSize, labels, predicateIds)
            : select_batch(pool, scorer, config.batchSize, labels);
    if (batch.empty()) break;

    try {
      annotate_pairs(batch, cell.votesPerPair, crowd, ledger, gold, crowdRng, labels);
    } catch (const BudgetExhaustedError&) {
      break;  // clean termination: evaluate with what was annotated
    }
    assert_budget(ledger, labels, cell.votesPerPair);

    const std::vector<PairKey> annotated = sorted_batch(std::move(batch));
    std::vector<PairKey> nextPool;
    nextPool.reserve(pool.size() - annotated.size());
    std::set_difference(pool.begin(), pool.end(), annotated.begin(), annotated.end(),
                        std::back_inserter(nextPool));
    pool = std::move(nextPool);
    ++iteration;
  }

  const ModelRegistry models = train_models(config, data, labels, runSeed, iteration);
  RunArtifacts out;
  out.decisions.reserve(data.corpus.size());
  for (std::size_t i = 0; i < data.corpus.size(); ++i) {
    out.decisions.push_back(decide_item(data.corpus.documents[i].id, data.features.vectors()[i],
                                        predicateSet, labels, models,
                                        config.exclusionThreshold));
  }
  out.metrics = compute_metrics(out.decisions, data.goldRelevance);
  out.metrics.strategy = std::string(strategy_name(cell.strategy));
  out.metrics.votesPerPair = cell.votesPerPair;
  out.metrics.annotationProportion = cell.proportion;
  out.metrics.runSeed = runSeed;
  out.metrics.budgetSpent = ledger.spent();
  out.annotatedPairs = labels.size();
  if (out.metrics.budgetSpent !=
      out.annotatedPairs * static_cast<std::size_t>(cell.votesPerPair)) {
    throw Error("budget invariant violated: spent != votesPerPair * annotated pairs");
  }
  out.labels = std::move(labels);
  return out;
}

MetricsRecord run_single(const ExperimentConfig& config, const CellKey& cell,
                         std::uint64_t runSeed) {
  const PreparedData data = prepare_data(config);
  return run_single_detailed(config, data, cell, runSeed).metrics;
}

namespace {

ResultRow run_row(const MetricsRecord& m) {
  ResultRow r;
  r.kind = RowKind::Run;
  r.strategy = m.strategy;
  r.votesPerPair = m.votesPerPair;
  r.proportion = m.annotationProportion;
  r.runSeed = static_cast<long long>(m.runSeed);
  r.f1In = m.f1In;
  r.precisionIn = m.precisionIn;
  r.recallIn = m.recallIn;
  r.f1Out = m.f1Out;
  r.precisionOut = m.precisionOut;
  r.recallOut = m.recallOut;
  r.budgetSpent = static_cast<double>(m.budgetSpent);
  return r;
}

int kind_rank(RowKind k) {
  switch (k) {
    case RowKind::Run: return 0;
    case RowKind::Mean: return 1;
    case RowKind::Std: return 2;
  }
  return 3;
}

bool row_less(const ResultRow& a, const ResultRow& b) {
  if (a.strategy != b.strategy) return a.strategy < b.strategy;
  if (a.votesPerPair != b.votesPerPair) return a.votesPerPair < b.votesPerPair;
  if (a.proportion != b.proportion) return a.proportion < b.proportion;
  if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind);
  return a.runSeed < b.runSeed;
}

void append_summary_rows(std::vector<ResultRow>& rows, const std::vector<ResultRow>& cell) {
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto sampleStd = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / (static_cast<double>(v.size()) - 1.0));
  };

  ResultRow meanRow = cell.front();
  meanRow.kind = RowKind::Mean;
  meanRow.runSeed = kMeanSeed;
  ResultRow stdRow = cell.front();
  stdRow.kind = RowKind::Std;
  stdRow.runSeed = kStdSeed;

  constexpr double ResultRow::* kMetricMembers[] = {
      &ResultRow::f1In,  &ResultRow::precisionIn,  &ResultRow::recallIn,
      &ResultRow::f1Out, &ResultRow::precisionOut, &ResultRow::recallOut,
      &ResultRow::budgetSpent};
  for (auto member : kMetricMembers) {
    std::vector<double> v;
    v.reserve(cell.size());
    for (const auto& r : cell) v.push_back(r.*member);
    meanRow.*member = mean(v);
    stdRow.*member = sampleStd(v);
  }
  rows.push_back(std::move(meanRow));
  rows.push_back(std::move(stdRow));
}

}  // namespace

std::vector<ResultRow> run_grid(const ExperimentConfig& config, const PreparedData& data) {
  std::vector<ResultRow> rows;
  for (StrategyKind strategy : config.strategies) {
    for (int votes : config.votesPerPair) {
      for (double proportion : config.annotationProportion) {
        const CellKey cell{strategy, votes, proportion};
        std::vector<ResultRow> cellRows;
        for (int run = 0; run < config.numRuns; ++run) {
          const std::uint64_t seed = config.baseRngSeed + static_cast<std::uint64_t>(run);
          try {
            cellRows.push_back(run_row(run_single_detailed(config, data, cell, seed).metrics));
          } catch (const Error& e) {
            char cellTag[128];
            std::snprintf(cellTag, sizeof(cellTag),
                          "cell (strategy=%s, votesPerPair=%d, proportion=%g, seed=%llu): ",
                          std::string(strategy_name(strategy)).c_str(), votes, proportion,
                          static_cast<unsigned long long>(seed));
            throw Error(cellTag + std::string(e.what()));
          }
        }
        rows.insert(rows.end(), cellRows.begin(), cellRows.end());
        append_summary_rows(rows, cellRows);
      }
    }
  }
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::vector<ResultRow> run_grid(const ExperimentConfig& config) {
  const PreparedData data = prepare_data(config);
  return run_grid(config, data);
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw Error("write_results: no rows");
  std::vector<ResultRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), row_less);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_results: cannot open '" + path + "'");
  out << "strategy,votes_per_pair,proportion,run_seed,f1_in,precision_in,recall_in,"
         "f1_out,precision_out,recall_out,budget_spent,row_kind\n";
  char buf[256];
  for (const auto& r : sorted) {
    const char* kind = r.kind == RowKind::Run ? "run" : (r.kind == RowKind::Mean ? "mean" : "std");
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%.6f,%lld,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n",
                  r.strategy.c_str(), r.votesPerPair, r.proportion, r.runSeed, r.f1In,
                  r.precisionIn, r.recallIn, r.f1Out, r.precisionOut, r.recallOut,
                  r.budgetSpent, kind);
    out << buf;
  }
}

ScoreSnapshot score_snapshot(const ExperimentConfig& config, const PreparedData& data,
                             const CellKey& cell, std::uint64_t runSeed) {
  validate_cell(cell);
  const PredicateSet predicateSet = config.predicate_set();
  const CrowdModel crowd = config.crowd_model();
  const std::vector<std::string> predicateIds = predicateSet.ids();

  Rng splitRng = Rng::stream(runSeed, "split");
  Rng crowdRng = Rng::stream(runSeed, "crowd");
  Rng strategyRng = Rng::stream(runSeed, "strategy");

  SeedSplit split = split_seed(data.corpus, config.seedFraction, splitRng);
  const std::size_t totalPairs = data.corpus.size() * predicateIds.size();
  BudgetLedger ledger(totalPairs * static_cast<std::size_t>(cell.votesPerPair));
  LabelStore labels;
  const GoldIndex gold(data.corpus);
  annotate_pairs(split.seed, cell.votesPerPair, crowd, ledger, gold, crowdRng, labels);

  ScoreSnapshot snap;
  snap.models = train_models(config, data, labels, runSeed, 0);
  const PairScorer scorer = make_scorer(cell.strategy, predicateIds, data.features, labels,
                                        snap.models, strategyRng);
  snap.scores = score_pool(split.pool, scorer, labels);
  std::sort(snap.scores.begin(), snap.scores.end(), [](const PairScore& a, const PairScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pair < b.pair;
  });
  return snap;
}

}  // namespace screenal
