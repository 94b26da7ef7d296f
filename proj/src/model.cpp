#include "screenal/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "screenal/errors.hpp"
#include "screenal/kernels.hpp"
#include "screenal/rng.hpp"

namespace screenal {

namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) {
  if (m >= 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

constexpr double kProbEps = 1e-15;

void validate_set(const TrainingSet& set) {
  if (set.xs.empty() || set.xs.size() != set.ys.size()) {
    throw Error("train: training set empty or misaligned");
  }
  if (!(set.weights.wIn > 0.0) || !(set.weights.wOut > 0.0)) {
    throw Error("train: class weights must be positive");
  }
  const bool hasIn = std::find(set.ys.begin(), set.ys.end(), Label::In) != set.ys.end();
  const bool hasOut = std::find(set.ys.begin(), set.ys.end(), Label::Out) != set.ys.end();
  if (!hasIn || !hasOut) throw Error("train: training set must contain both classes");
  for (const auto& x : set.xs) {
    for (double v : x.values) {
      if (!std::isfinite(v)) throw NumericError("train: non-finite feature value");
    }
  }
}

}  // namespace

ClassWeights balanced_class_weights(const std::vector<Label>& ys) {
  const auto n = static_cast<double>(ys.size());
  const auto nIn = static_cast<double>(std::count(ys.begin(), ys.end(), Label::In));
  const double nOut = n - nIn;
  if (nIn == 0.0 || nOut == 0.0) {
    throw Error("balanced_class_weights: both classes must be present");
  }
  return {n / (2.0 * nIn), n / (2.0 * nOut)};
}

LinearModel train(const TrainingSet& set, std::size_t dim, const Hyperparams& hyper) {
  validate_set(set);
  if (hyper.epochs < 1) throw Error("train: epochs must be >= 1");
  if (!(hyper.learningRate > 0.0)) throw Error("train: learningRate must be positive");
  if (hyper.l2Lambda < 0.0) throw Error("train: l2Lambda must be >= 0");

  const std::size_t n = set.xs.size();
  std::vector<double> v(dim, 0.0);  // weights stored as s * v
  double s = 1.0;
  double b = 0.0;

  Rng rng(hyper.rngSeed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::uint64_t t = 0;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = order[k];
      const SparseVector& x = set.xs[i];
      const double ys = set.ys[i] == Label::In ? 1.0 : -1.0;
      const double cw = set.ys[i] == Label::In ? set.weights.wIn : set.weights.wOut;

      ++t;
      const double eta = hyper.learningRate / std::sqrt(static_cast<double>(t));
      const double z = s * kernels::sparse_dot(x.indices, x.values, v) + b;
      if (!std::isfinite(z)) {
        throw NumericError("train: non-finite margin at epoch " + std::to_string(epoch));
      }
      const double g = cw * stable_sigmoid(-ys * z);

      // L2 shrinkage folded into the scale; the sparse step touches only
      // the example's nonzeros.
      s *= 1.0 - 2.0 * eta * hyper.l2Lambda;
      if (s == 0.0 || std::abs(s) < 1e-9 || std::abs(s) > 1e9) {
        kernels::scale(v, s);
        s = 1.0;
      }
      kernels::sparse_axpy(eta * ys * g / s, x.indices, x.values, v);
      b += eta * ys * g;
    }
  }

  LinearModel model;
  model.hyper = hyper;
  model.bias = b;
  model.weights = std::move(v);
  kernels::scale(model.weights, s);
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw NumericError("train: non-finite weight after training");
  }
  if (!std::isfinite(model.bias)) throw NumericError("train: non-finite bias after training");
  return model;
}

double predict_proba(const LinearModel& model, const SparseVector& x) {
  if (!x.indices.empty() && x.indices.back() >= model.weights.size()) {
    throw Error("predict_proba: dimension mismatch");
  }
  const double z = kernels::sparse_dot(x.indices, x.values, model.weights) + model.bias;
  return std::clamp(stable_sigmoid(z), kProbEps, 1.0 - kProbEps);
}

double weighted_loss_sum(const TrainingSet& set, std::span<const double> w, double bias) {
  double acc = 0.0;
  for (std::size_t i = 0; i < set.xs.size(); ++i) {
    const double ys = set.ys[i] == Label::In ? 1.0 : -1.0;
    const double cw = set.ys[i] == Label::In ? set.weights.wIn : set.weights.wOut;
    const double z = kernels::sparse_dot(set.xs[i].indices, set.xs[i].values, w) + bias;
    acc += cw * log1p_exp_neg(ys * z);
  }
  return acc;
}

double weighted_loss(const TrainingSet& set, std::span<const double> w, double bias,
                     double l2Lambda) {
  const double n = static_cast<double>(set.xs.size());
  return weighted_loss_sum(set, w, bias) / n + l2Lambda * kernels::squared_norm(w);
}

void weighted_loss_gradient(const TrainingSet& set, std::span<const double> w, double bias,
                            double l2Lambda, std::span<double> gradW, double& gradB) {
  if (gradW.size() != w.size()) throw Error("weighted_loss_gradient: gradient size mismatch");
  std::fill(gradW.begin(), gradW.end(), 0.0);
  gradB = 0.0;
  const double n = static_cast<double>(set.xs.size());
  for (std::size_t i = 0; i < set.xs.size(); ++i) {
    const double ys = set.ys[i] == Label::In ? 1.0 : -1.0;
    const double cw = set.ys[i] == Label::In ? set.weights.wIn : set.weights.wOut;
    const double z = kernels::sparse_dot(set.xs[i].indices, set.xs[i].values, w) + bias;
    const double g = -ys * cw * stable_sigmoid(-ys * z) / n;
    kernels::sparse_axpy(g, set.xs[i].indices, set.xs[i].values, gradW);
    gradB += g;
  }
  for (std::size_t j = 0; j < w.size(); ++j) gradW[j] += 2.0 * l2Lambda * w[j];
}

const LinearModel& ModelRegistry::at(const std::string& predicateId) const {
  const auto it = models.find(predicateId);
  if (it == models.end()) throw Error("ModelRegistry: unknown predicate '" + predicateId + "'");
  return it->second;
}

void write_model_tsv(const LinearModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_model_tsv: cannot open '" + path + "'");
  char buf[64];
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] == 0.0) continue;
    std::snprintf(buf, sizeof(buf), "%zu\t%.17g", i, model.weights[i]);
    out << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "bias\t%.17g", model.bias);
  out << buf << '\n';
}

}  // namespace screenal
