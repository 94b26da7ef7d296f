#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "screenal/config.hpp"
#include "screenal/corpus.hpp"
#include "screenal/crowd.hpp"
#include "screenal/screening.hpp"
#include "screenal/strategies.hpp"
#include "screenal/tfidf.hpp"

namespace screenal {

// One grid cell: a point on the strategy x votes x proportion axes.
struct CellKey {
  StrategyKind strategy = StrategyKind::ObjectiveAware;
  int votesPerPair = 3;
  double proportion = 0.5;
};

enum class RowKind { Run, Mean, Std };

// Sentinel run_seed values for summary rows.
inline constexpr long long kMeanSeed = -1;
inline constexpr long long kStdSeed = -2;

struct ResultRow {
  RowKind kind = RowKind::Run;
  std::string strategy;
  int votesPerPair = 0;
  double proportion = 0.0;
  long long runSeed = 0;
  double f1In = 0.0;
  double precisionIn = 0.0;
  double recallIn = 0.0;
  double f1Out = 0.0;
  double precisionOut = 0.0;
  double recallOut = 0.0;
  double budgetSpent = 0.0;  // fractional in mean/std rows
};

// Dataset loaded and vectorized once per experiment.
struct PreparedData {
  Corpus corpus;
  Vocabulary vocab;
  FeaturePool features;
  std::map<std::string, Label> goldRelevance;

  Label gold(const PairKey& pair) const;
};

PreparedData prepare_data(const ExperimentConfig& config);

struct RunArtifacts {
  MetricsRecord metrics;
  std::size_t annotatedPairs = 0;
  LabelStore labels;
  std::vector<ScreeningDecision> decisions;
};

// One active-learning run: seed split, annotate, then
// {train, score, select top-k, annotate} until the proportion cap or pool
// exhaustion; finally decide every item and evaluate. Deterministic in
// (config, cell, runSeed).
RunArtifacts run_single_detailed(const ExperimentConfig& config, const PreparedData& data,
                                 const CellKey& cell, std::uint64_t runSeed);
MetricsRecord run_single(const ExperimentConfig& config, const CellKey& cell,
                         std::uint64_t runSeed);

// numRuns executions per cell with seeds baseRngSeed + runIndex, plus
// per-cell mean and sample-standard-deviation rows.
std::vector<ResultRow> run_grid(const ExperimentConfig& config, const PreparedData& data);
std::vector<ResultRow> run_grid(const ExperimentConfig& config);

// Fixed-schema CSV, 6 decimal digits, sorted by
// (strategy, votes_per_pair, proportion, row kind, run_seed).
void write_results(const std::vector<ResultRow>& rows, const std::string& path);

// Pair scores after the seed phase of a run, descending; for inspection.
struct ScoreSnapshot {
  std::vector<PairScore> scores;
  ModelRegistry models;
};
ScoreSnapshot score_snapshot(const ExperimentConfig& config, const PreparedData& data,
                             const CellKey& cell, std::uint64_t runSeed);

}  // namespace screenal
