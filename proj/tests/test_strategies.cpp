#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "screenal/errors.hpp"
#include "screenal/strategies.hpp"

using namespace screenal;

namespace {

// Probability-table scorers: the strategy math evaluated on fixed
// Prob(i_p in IN) tables, independent of any trained model.
using ProbTable = std::map<std::string, std::map<std::string, double>>;  // item -> pred -> p

PairScorer table_uncertainty(const ProbTable& table) {
  return [&table](const PairKey& pair) {
    return uncertainty_score(table.at(pair.itemId).at(pair.predicateId));
  };
}

PairScorer table_objective_aware(const ProbTable& table) {
  return [&table](const PairKey& pair) {
    const auto& row = table.at(pair.itemId);
    std::vector<double> others;
    for (const auto& [pred, p] : row) {
      if (pred != pair.predicateId) others.push_back(p);
    }
    return objective_aware_score(row.at(pair.predicateId), others);
  };
}

std::vector<PairKey> all_pairs(const ProbTable& table) {
  std::vector<PairKey> pool;
  for (const auto& [item, row] : table) {
    for (const auto& [pred, p] : row) {
      (void)p;
      pool.push_back({item, pred});
    }
  }
  return pool;
}

ProbTable paper_table1() {
  return {{"1", {{"p1", 0.99}, {"p2", 0.98}}},
          {"2", {{"p1", 0.51}, {"p2", 0.01}}},
          {"3", {{"p1", 0.51}, {"p2", 0.99}}},
          {"4", {{"p1", 0.03}, {"p2", 0.01}}}};
}

}  // namespace

TEST_CASE("uncertainty_score is distance to the decision boundary") {
  CHECK(uncertainty_score(0.51) == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(uncertainty_score(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uncertainty_score(0.99) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK_THROWS_AS(uncertainty_score(-0.1), Error);
  CHECK_THROWS_AS(uncertainty_score(1.1), Error);
}

TEST_CASE("objective_aware_score multiplies uncertainty by inclusion certainty") {
  const std::vector<double> other99{0.99};
  CHECK(objective_aware_score(0.51, other99) == doctest::Approx(0.4851).epsilon(1e-12));
  const std::vector<double> other01{0.01};
  CHECK(objective_aware_score(0.51, other01) == doctest::Approx(0.0049).epsilon(1e-12));

  // All-ones product reduces to plain uncertainty.
  const std::vector<double> ones{1.0, 1.0, 1.0};
  for (double p : {0.1, 0.37, 0.5, 0.93}) {
    CHECK(objective_aware_score(p, ones) == doctest::Approx(uncertainty_score(p)).epsilon(1e-15));
  }
  // A zero factor annihilates the score.
  const std::vector<double> zero{0.8, 0.0};
  CHECK(objective_aware_score(0.5, zero) == 0.0);
  CHECK_THROWS_AS(objective_aware_score(0.5, std::vector<double>{1.5}), Error);
}

TEST_CASE("objective_aware_score is symmetric and monotone in other predicates") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const double target = rng.uniform01();
    std::vector<double> others;
    const std::size_t n = 1 + rng.below(4);
    for (std::size_t i = 0; i < n; ++i) others.push_back(rng.uniform01());

    const double base = objective_aware_score(target, others);
    auto permuted = others;
    rng.shuffle(permuted);
    CHECK(objective_aware_score(target, permuted) == doctest::Approx(base).epsilon(1e-12));

    auto raised = others;
    const std::size_t j = rng.below(n);
    raised[j] = std::min(1.0, raised[j] + rng.uniform01() * (1.0 - raised[j]));
    CHECK(objective_aware_score(target, raised) >= base - 1e-15);
  }
}

TEST_CASE("random_score is deterministic, uniform and in range") {
  Rng a(4), b(4);
  for (int i = 0; i < 100; ++i) CHECK(random_score(a) == random_score(b));

  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = random_score(rng);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("select_batch reproduces the paper's example selection") {
  const ProbTable table = paper_table1();
  const LabelStore labels;
  const auto batch = select_batch(all_pairs(table), table_objective_aware(table), 1, labels);
  REQUIRE(batch.size() == 1);
  CHECK(batch[0] == PairKey{"3", "p1"});
}

TEST_CASE("select_batch breaks score ties lexicographically") {
  ProbTable table{{"b", {{"p1", 0.3}}}, {"a", {{"p1", 0.7}}}};  // equal uncertainty 0.3
  const LabelStore labels;
  const auto batch = select_batch(all_pairs(table), table_uncertainty(table), 1, labels);
  REQUIRE(batch.size() == 1);
  CHECK(batch[0] == PairKey{"a", "p1"});
}

TEST_CASE("select_batch returns the whole pool when k exceeds it") {
  const ProbTable table = paper_table1();
  const LabelStore labels;
  const auto batch = select_batch(all_pairs(table), table_uncertainty(table), 100, labels);
  CHECK(batch.size() == 8);
  CHECK(select_batch({}, table_uncertainty(table), 3, labels).empty());
  CHECK_THROWS_AS(select_batch(all_pairs(table), table_uncertainty(table), 0, labels), Error);
}

TEST_CASE("select_batch drops labeled pairs and duplicates") {
  const ProbTable table = paper_table1();
  LabelStore labels;
  VoteRecord rec;
  rec.itemId = "3";
  rec.predicateId = "p1";
  rec.votes = {Label::In};
  rec.aggregated = Label::In;
  rec.votesCharged = 1;
  labels.insert(rec);

  auto pool = all_pairs(table);
  pool.push_back({"2", "p1"});  // duplicate
  const auto batch = select_batch(pool, table_objective_aware(table), 100, labels);
  CHECK(batch.size() == 7);
  CHECK(std::count(batch.begin(), batch.end(), PairKey{"3", "p1"}) == 0);
  std::map<PairKey, int> seen;
  for (const auto& p : batch) CHECK(++seen[p] == 1);
}

TEST_CASE("positive scaling of scores leaves selection unchanged") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    ProbTable table;
    const std::size_t items = 2 + rng.below(20);
    for (std::size_t i = 0; i < items; ++i) {
      auto& row = table["i" + std::to_string(i)];
      row["p1"] = rng.uniform01();
      row["p2"] = rng.uniform01();
    }
    const LabelStore labels;
    const std::size_t k = 1 + rng.below(5);
    const double c = 0.25 + rng.uniform01() * 10.0;

    const PairScorer base = table_objective_aware(table);
    const PairScorer scaled = [&](const PairKey& p) { return c * base(p); };
    CHECK(select_batch(all_pairs(table), base, k, labels) ==
          select_batch(all_pairs(table), scaled, k, labels));
  }
}

TEST_CASE("objective-aware equals uncertainty when other predicates are certain") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    ProbTable table;
    const std::size_t items = 1 + rng.below(30);
    const std::size_t npred = 2 + rng.below(3);
    for (std::size_t i = 0; i < items; ++i) {
      auto& row = table["i" + std::to_string(i)];
      const std::size_t target = rng.below(npred);
      for (std::size_t p = 0; p < npred; ++p) {
        row["p" + std::to_string(p)] = p == target ? rng.uniform01() : 1.0;
      }
    }
    const LabelStore labels;
    const std::size_t k = 1 + rng.below(8);
    CHECK(select_batch(all_pairs(table), table_objective_aware(table), k, labels) ==
          select_batch(all_pairs(table), table_uncertainty(table), k, labels));
  }
}

TEST_CASE("round-robin selection alternates predicates") {
  ProbTable table;
  for (int i = 0; i < 6; ++i) {
    auto& row = table["i" + std::to_string(i)];
    row["p1"] = 0.5 - 0.01 * i;  // p1 uncertainty dominates globally
    row["p2"] = 0.9 + 0.01 * i;
  }
  const LabelStore labels;
  const auto batch = select_batch_round_robin(all_pairs(table), table_uncertainty(table), 4,
                                              labels, {"p1", "p2"});
  REQUIRE(batch.size() == 4);
  int p1Count = 0, p2Count = 0;
  for (const auto& pair : batch) (pair.predicateId == "p1" ? p1Count : p2Count)++;
  CHECK(p1Count == 2);
  CHECK(p2Count == 2);

  // Global top-k would have taken all four from p1.
  const auto globalBatch = select_batch(all_pairs(table), table_uncertainty(table), 4, labels);
  int globalP1 = 0;
  for (const auto& pair : globalBatch) {
    if (pair.predicateId == "p1") ++globalP1;
  }
  CHECK(globalP1 == 4);
}

TEST_CASE("strategy names round-trip") {
  for (StrategyKind kind :
       {StrategyKind::Random, StrategyKind::Uncertainty, StrategyKind::ObjectiveAware}) {
    CHECK(parse_strategy(strategy_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_strategy("entropy"), ConfigError);
}

TEST_CASE("estimate_in_probability: crowd labels override the model") {
  ModelRegistry models;
  LinearModel m;
  m.weights = {2.0};
  m.bias = -1.0;
  models.models.emplace("p1", std::move(m));

  SparseVector x;
  x.indices = {0};
  x.values = {0.5};

  LabelStore labels;
  CHECK(estimate_in_probability({"d0", "p1"}, labels, models, x) ==
        doctest::Approx(0.5).epsilon(1e-12));

  VoteRecord inRec;
  inRec.itemId = "d0";
  inRec.predicateId = "p1";
  inRec.votes = {Label::In};
  inRec.aggregated = Label::In;
  inRec.votesCharged = 1;
  labels.insert(inRec);
  CHECK(estimate_in_probability({"d0", "p1"}, labels, models, x) == 1.0);

  VoteRecord outRec = inRec;
  outRec.itemId = "d1";
  outRec.aggregated = Label::Out;
  labels.insert(outRec);
  CHECK(estimate_in_probability({"d1", "p1"}, labels, models, x) == 0.0);

  CHECK_THROWS_AS(estimate_in_probability({"d0", "p9"}, labels, models, x), Error);
}
