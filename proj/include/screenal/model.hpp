#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "screenal/corpus.hpp"
#include "screenal/tfidf.hpp"

namespace screenal {

struct ClassWeights {
  double wIn = 1.0;
  double wOut = 1.0;
};

struct Hyperparams {
  double l2Lambda = 1e-4;
  int epochs = 30;
  double learningRate = 0.1;  // decays as lr / sqrt(t)
  std::uint64_t rngSeed = 0;
};

// Per-predicate probabilistic linear classifier.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  Hyperparams hyper;

  std::size_t dim() const { return weights.size(); }
};

struct TrainingSet {
  std::vector<SparseVector> xs;
  std::vector<Label> ys;
  ClassWeights weights;
};

// w_c = n / (2 * n_c); both classes must be present.
ClassWeights balanced_class_weights(const std::vector<Label>& ys);

// Minimizes (1/n) * sum_i w_{y_i} * log(1 + exp(-y_i (w.x_i + b))) + lambda ||w||^2
// by seeded SGD with per-epoch shuffling; deterministic in (set, hyper).
LinearModel train(const TrainingSet& set, std::size_t dim, const Hyperparams& hyper);

// Sigmoid of w.x + b, clamped to the open interval (0, 1).
double predict_proba(const LinearModel& model, const SparseVector& x);

// Data term sum_i w_{y_i} * log(1 + exp(-y_i (w.x_i + b))), accumulated in
// example order.
double weighted_loss_sum(const TrainingSet& set, std::span<const double> w, double bias);

// Full objective: data term / n + lambda ||w||^2.
double weighted_loss(const TrainingSet& set, std::span<const double> w, double bias,
                     double l2Lambda);

// Analytic gradient of weighted_loss with respect to (w, bias).
void weighted_loss_gradient(const TrainingSet& set, std::span<const double> w, double bias,
                            double l2Lambda, std::span<double> gradW, double& gradB);

struct ModelRegistry {
  std::map<std::string, LinearModel> models;

  const LinearModel& at(const std::string& predicateId) const;
  bool has(const std::string& predicateId) const { return models.count(predicateId) > 0; }
};

// Text dump: nonzero (term-index, weight) pairs, one per line, then the bias.
void write_model_tsv(const LinearModel& model, const std::string& path);

}  // namespace screenal
