#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screenal/crowd.hpp"
#include "screenal/model.hpp"
#include "screenal/screening.hpp"
#include "screenal/strategies.hpp"
#include "screenal/tfidf.hpp"

namespace screenal {

struct PredicateConfig {
  std::string id;
  std::string text;
  AccuracyModel accuracy = PointAccuracy{1.0};
};

// Experiment description. strategy, votesPerPair and annotationProportion
// are grid axes and accept either a scalar or a list in the config file.
struct ExperimentConfig {
  std::string datasetPath;
  std::vector<PredicateConfig> predicates;

  std::vector<StrategyKind> strategies = {StrategyKind::ObjectiveAware};
  std::vector<int> votesPerPair = {3};
  std::vector<double> annotationProportion = {0.5};

  std::size_t batchSize = 50;
  double seedFraction = 0.02;
  int numRuns = 10;
  std::uint64_t baseRngSeed = 42;
  double exclusionThreshold = 0.5;
  bool roundRobin = false;
  Hyperparams classifier;          // rngSeed is derived per run, not configured
  VocabularyConfig vocabulary;

  PredicateSet predicate_set() const;
  CrowdModel crowd_model() const;
};

// Strict JSON config: unknown keys and range violations are ConfigErrors
// naming the offending key.
ExperimentConfig parse_config(const std::string& jsonText);
ExperimentConfig load_config(const std::string& path);

}  // namespace screenal
