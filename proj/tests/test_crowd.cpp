#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "screenal/crowd.hpp"
#include "screenal/errors.hpp"

using namespace screenal;

namespace {

// Closed-form probability that a majority of n votes is correct when each
// vote is independently correct with probability a. Odd n.
double majority_accuracy(double a, int n) {
  auto binom = [](int nn, int kk) {
    double r = 1.0;
    for (int i = 1; i <= kk; ++i) r = r * (nn - kk + i) / i;
    return r;
  };
  double acc = 0.0;
  for (int j = n / 2 + 1; j <= n; ++j) {
    acc += binom(n, j) * std::pow(a, j) * std::pow(1.0 - a, n - j);
  }
  return acc;
}

// Mean of Beta(alpha, beta) truncated to (0.5, 1], by Simpson quadrature on
// the unnormalized density.
double truncated_beta_mean(double alpha, double beta) {
  auto pdf = [&](double x) { return std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0); };
  const int steps = 20000;
  const double lo = 0.5, hi = 1.0, h = (hi - lo) / steps;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + h * i;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    num += w * x * pdf(x);
    den += w * pdf(x);
  }
  return num / den;
}

GoldOracle constant_gold(Label value) {
  return [value](const PairKey&) { return value; };
}

}  // namespace

TEST_CASE("draw_worker_accuracy: point models are constant") {
  Rng rng(1);
  const AccuracyModel point = PointAccuracy{0.94};
  for (int i = 0; i < 10; ++i) CHECK(draw_worker_accuracy(point, rng) == 0.94);
  const AccuracyModel perfect = PointAccuracy{1.0};
  CHECK(draw_worker_accuracy(perfect, rng) == 1.0);
}

TEST_CASE("draw_worker_accuracy: beta draws match the truncated mean") {
  Rng rng(42);
  const AccuracyModel model = BetaAccuracy{8.0, 2.0};
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = draw_worker_accuracy(model, rng);
    CHECK(a > 0.5);
    CHECK(a <= 1.0);
    sum += a;
  }
  const double expected = truncated_beta_mean(8.0, 2.0);
  CHECK(std::abs(sum / n - expected) < 0.01);
}

TEST_CASE("simulate_votes: perfect workers copy gold") {
  Rng rng(3);
  const AccuracyModel perfect = PointAccuracy{1.0};
  const auto votes = simulate_votes(Label::In, 5, perfect, rng);
  REQUIRE(votes.size() == 5);
  for (Label v : votes) CHECK(v == Label::In);
  CHECK_THROWS_AS(simulate_votes(Label::In, 0, perfect, rng), Error);
}

TEST_CASE("simulate_votes: same seed gives the same sequence") {
  const AccuracyModel model = PointAccuracy{0.7};
  Rng a(77), b(77);
  CHECK(simulate_votes(Label::Out, 9, model, a) == simulate_votes(Label::Out, 9, model, b));
}

TEST_CASE("majority aggregation with IN tie-break") {
  CHECK(aggregate_majority({Label::In, Label::In, Label::Out}) == Label::In);
  CHECK(aggregate_majority({Label::Out, Label::Out, Label::Out}) == Label::Out);
  CHECK(aggregate_majority({Label::In, Label::Out}) == Label::In);
  CHECK_THROWS_AS(aggregate_majority({}), Error);
}

TEST_CASE("aggregated accuracy matches the binomial closed form") {
  const AccuracyModel model = PointAccuracy{0.8};
  Rng rng(11);
  const int trials = 100000;
  int correct = 0;
  for (int t = 0; t < trials; ++t) {
    const auto votes = simulate_votes(Label::In, 3, model, rng);
    if (aggregate_majority(votes) == Label::In) ++correct;
  }
  CHECK(std::abs(static_cast<double>(correct) / trials - 0.896) < 0.005);
}

TEST_CASE("aggregated accuracy is nondecreasing in odd n (closed form)") {
  for (double a : {0.6, 0.7, 0.8, 0.94}) {
    double prev = 0.0;
    for (int n = 1; n <= 11; n += 2) {
      const double acc = majority_accuracy(a, n);
      CHECK(acc >= prev - 1e-12);
      prev = acc;
    }
  }
  CHECK(majority_accuracy(0.8, 3) == doctest::Approx(0.896).epsilon(1e-12));
  CHECK(majority_accuracy(0.8, 5) == doctest::Approx(0.94208).epsilon(1e-12));
}

TEST_CASE("budget ledger guards capacity") {
  BudgetLedger ledger(10);
  ledger.charge(4);
  CHECK(ledger.spent() == 4);
  CHECK(ledger.remaining() == 6);
  CHECK_THROWS_AS(ledger.charge(7), BudgetExhaustedError);
  CHECK(ledger.spent() == 4);
}

TEST_CASE("annotate_pairs charges votes and records aggregates") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{1.0};
  BudgetLedger ledger(100);
  LabelStore labels;
  Rng rng(5);
  std::vector<PairKey> pairs;
  for (int i = 0; i < 10; ++i) pairs.push_back({"d" + std::to_string(i), "p1"});

  annotate_pairs(pairs, 3, crowd, ledger, constant_gold(Label::In), rng, labels);
  CHECK(ledger.spent() == 30);
  CHECK(labels.size() == 10);
  const VoteRecord& rec = labels.at({"d0", "p1"});
  CHECK(rec.votesCharged == 3);
  CHECK(rec.aggregated == Label::In);
}

TEST_CASE("annotate_pairs is atomic on insufficient budget") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{1.0};
  BudgetLedger ledger(20);
  LabelStore labels;
  Rng rng(5);
  std::vector<PairKey> pairs;
  for (int i = 0; i < 10; ++i) pairs.push_back({"d" + std::to_string(i), "p1"});

  CHECK_THROWS_AS(
      annotate_pairs(pairs, 3, crowd, ledger, constant_gold(Label::In), rng, labels),
      BudgetExhaustedError);
  CHECK(ledger.spent() == 0);
  CHECK(labels.size() == 0);
}

TEST_CASE("annotate_pairs rejects already-labeled and duplicate pairs") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{1.0};
  BudgetLedger ledger(100);
  LabelStore labels;
  Rng rng(5);
  annotate_pairs({{"d0", "p1"}}, 1, crowd, ledger, constant_gold(Label::In), rng, labels);

  CHECK_THROWS_WITH_AS(
      annotate_pairs({{"d0", "p1"}}, 1, crowd, ledger, constant_gold(Label::In), rng, labels),
      doctest::Contains("already labeled"), Error);
  CHECK_THROWS_WITH_AS(
      annotate_pairs({{"d1", "p1"}, {"d1", "p1"}}, 1, crowd, ledger, constant_gold(Label::In),
                     rng, labels),
      doctest::Contains("duplicate"), Error);
  CHECK(ledger.spent() == 1);
}

TEST_CASE("replaying a seed reproduces the label store exactly") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{0.7};
  crowd.perPredicate["p2"] = BetaAccuracy{6.0, 2.0};
  std::vector<PairKey> pairs;
  for (int i = 0; i < 25; ++i) {
    pairs.push_back({"d" + std::to_string(i), i % 2 == 0 ? "p1" : "p2"});
  }
  const GoldOracle gold = [](const PairKey& p) {
    return p.itemId.size() % 2 == 0 ? Label::In : Label::Out;
  };

  auto play = [&] {
    BudgetLedger ledger(1000);
    LabelStore labels;
    Rng rng(909);
    annotate_pairs(pairs, 3, crowd, ledger, gold, rng, labels);
    return labels;
  };
  const LabelStore a = play();
  const LabelStore b = play();
  REQUIRE(a.size() == b.size());
  for (const auto& [key, rec] : a.records()) {
    const VoteRecord& other = b.at(key);
    CHECK(rec.votes == other.votes);
    CHECK(rec.aggregated == other.aggregated);
    CHECK(rec.votesCharged == other.votesCharged);
  }
}

TEST_CASE("ledger spending equals the sum of charged votes") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{0.9};
  BudgetLedger ledger(500);
  LabelStore labels;
  Rng rng(31);
  std::vector<PairKey> pairs;
  for (int i = 0; i < 40; ++i) pairs.push_back({"d" + std::to_string(i), "p1"});
  annotate_pairs(pairs, 5, crowd, ledger, constant_gold(Label::Out), rng, labels);

  std::size_t charged = 0;
  for (const auto& [key, rec] : labels.records()) {
    (void)key;
    charged += rec.votesCharged;
  }
  CHECK(charged == ledger.spent());
  CHECK(ledger.spent() == 200);
}

TEST_CASE("vote log export lists one row per vote") {
  CrowdModel crowd;
  crowd.perPredicate["p1"] = PointAccuracy{1.0};
  BudgetLedger ledger(10);
  LabelStore labels;
  Rng rng(2);
  annotate_pairs({{"d0", "p1"}, {"d1", "p1"}}, 3, crowd, ledger, constant_gold(Label::In), rng,
                 labels);
  const std::string path = "/tmp/screenal_votelog.csv";
  write_vote_log(labels, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "item_id,predicate_id,vote_index,vote,aggregated");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 6);
}
