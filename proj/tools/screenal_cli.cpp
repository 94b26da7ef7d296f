// Command-line front end: run experiment grids, generate synthetic screening
// corpora, and dump pair scores for inspection.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "screenal/config.hpp"
#include "screenal/harness.hpp"
#include "screenal/kernels.hpp"
#include "screenal/synth.hpp"

namespace {

int cmd_run(const std::string& configPath, const std::string& outPath,
            const std::string& voteLogPath, const std::string& decisionsPath) {
  const auto config = screenal::load_config(configPath);
  const auto data = screenal::prepare_data(config);
  const auto rows = screenal::run_grid(config, data);
  screenal::write_results(rows, outPath);
  std::printf("wrote %zu rows to %s\n", rows.size(), outPath.c_str());

  if (!voteLogPath.empty() || !decisionsPath.empty()) {
    // Exports come from the last cell's last run, re-executed deterministically.
    const screenal::CellKey cell{config.strategies.back(), config.votesPerPair.back(),
                                 config.annotationProportion.back()};
    const auto seed =
        config.baseRngSeed + static_cast<std::uint64_t>(config.numRuns - 1);
    const auto artifacts = screenal::run_single_detailed(config, data, cell, seed);
    if (!voteLogPath.empty()) {
      screenal::write_vote_log(artifacts.labels, voteLogPath);
      std::printf("wrote vote log to %s\n", voteLogPath.c_str());
    }
    if (!decisionsPath.empty()) {
      screenal::write_decisions(artifacts.decisions, config.predicate_set(), decisionsPath);
      std::printf("wrote decisions to %s\n", decisionsPath.c_str());
    }
  }
  return 0;
}

int cmd_gen_synth(const std::string& outPath, std::size_t items,
                  const std::string& selectivities, std::uint64_t seed) {
  screenal::SynthConfig config;
  config.items = items;
  config.seed = seed;
  config.selectivities.clear();
  std::size_t start = 0;
  while (start <= selectivities.size()) {
    const std::size_t comma = selectivities.find(',', start);
    const std::string tok = selectivities.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) config.selectivities.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  const auto corpus = screenal::generate_synthetic_corpus(config);
  screenal::write_corpus_csv(corpus, outPath);
  std::printf("wrote %zu items, %zu predicates to %s\n", corpus.size(),
              corpus.predicateIds.size(), outPath.c_str());
  for (const auto& p : corpus.predicateIds) {
    std::printf("  %s: selectivity %.4f\n", p.c_str(), corpus.selectivity(p));
  }
  return 0;
}

int cmd_score(const std::string& configPath, const std::string& outPath,
              const std::string& vocabOutPath, const std::string& modelsOutDir) {
  const auto config = screenal::load_config(configPath);
  const auto data = screenal::prepare_data(config);
  // First cell of the grid, base seed.
  const screenal::CellKey cell{config.strategies.front(), config.votesPerPair.front(),
                               config.annotationProportion.front()};
  const auto snap = screenal::score_snapshot(config, data, cell, config.baseRngSeed);

  std::FILE* out = outPath.empty() ? stdout : std::fopen(outPath.c_str(), "wb");
  if (out == nullptr) {
    std::fprintf(stderr, "error: cannot open '%s'\n", outPath.c_str());
    return 1;
  }
  std::fprintf(out, "item_id,predicate_id,score\n");
  for (const auto& ps : snap.scores) {
    std::fprintf(out, "%s,%s,%.9f\n", ps.pair.itemId.c_str(), ps.pair.predicateId.c_str(),
                 ps.score);
  }
  if (out != stdout) std::fclose(out);

  if (!vocabOutPath.empty()) {
    screenal::write_vocabulary_tsv(data.vocab, vocabOutPath);
    std::printf("wrote vocabulary to %s\n", vocabOutPath.c_str());
  }
  if (!modelsOutDir.empty()) {
    for (const auto& [pred, model] : snap.models.models) {
      const std::string path = modelsOutDir + "/" + pred + ".model.tsv";
      screenal::write_model_tsv(model, path);
      std::printf("wrote model to %s\n", path.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-predicate document screening with active learning"};
  app.require_subcommand(1);

  std::string configPath, outPath, voteLogPath, decisionsPath;
  auto* run = app.add_subcommand("run", "Execute a single-cell or grid experiment");
  run->add_option("--config", configPath, "Experiment config (JSON)")->required();
  run->add_option("--out", outPath, "Results CSV path")->required();
  run->add_option("--vote-log", voteLogPath, "Optional vote-log CSV (last cell, last seed)");
  run->add_option("--decisions", decisionsPath,
                  "Optional decision CSV (last cell, last seed)");

  std::string synthOut = "synth.csv", selectivities = "0.6,0.2";
  std::size_t items = 2000;
  std::uint64_t synthSeed = 7;
  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic screening corpus");
  gen->add_option("--out", synthOut, "Output CSV path")->required();
  gen->add_option("--items", items, "Number of documents");
  gen->add_option("--selectivities", selectivities, "Comma-separated per-predicate IN rates");
  gen->add_option("--seed", synthSeed, "Generator seed");

  std::string scoreConfig, scoreOut, vocabOut, modelsOut;
  auto* score = app.add_subcommand("score", "Dump pair scores after the seed phase");
  score->add_option("--config", scoreConfig, "Experiment config (JSON)")->required();
  score->add_option("--out", scoreOut, "Scores CSV path (default: stdout)");
  score->add_option("--vocab-out", vocabOut, "Optional vocabulary TSV dump");
  score->add_option("--models-out", modelsOut, "Optional directory for model dumps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(configPath, outPath, voteLogPath, decisionsPath);
    if (gen->parsed()) return cmd_gen_synth(synthOut, items, selectivities, synthSeed);
    if (score->parsed()) return cmd_score(scoreConfig, scoreOut, vocabOut, modelsOut);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
