#include "screenal/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "screenal/errors.hpp"

namespace screenal {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::set<std::string>& known,
                        const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (known.count(key) == 0) {
      throw ConfigError("config: unknown key '" + key + "'" +
                        (context.empty() ? "" : " in " + context));
    }
  }
}

template <typename T>
std::vector<T> scalar_or_list(const json& value, const std::string& key) {
  std::vector<T> out;
  if (value.is_array()) {
    for (const auto& v : value) out.push_back(v.get<T>());
  } else {
    out.push_back(value.get<T>());
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' must not be an empty list");
  return out;
}

AccuracyModel parse_accuracy(const json& obj, const std::string& context) {
  if (!obj.is_object()) throw ConfigError("config: 'accuracy' must be an object in " + context);
  const std::string kind = obj.value("kind", "");
  if (kind == "point") {
    require_known_keys(obj, {"kind", "a"}, context + ".accuracy");
    if (!obj.contains("a")) throw ConfigError("config: missing key 'a' in " + context);
    const double a = obj.at("a").get<double>();
    if (!(a > 0.0 && a <= 1.0)) {
      throw ConfigError("config: 'a' must be in (0, 1] in " + context);
    }
    return PointAccuracy{a};
  }
  if (kind == "beta") {
    require_known_keys(obj, {"kind", "alpha", "beta"}, context + ".accuracy");
    if (!obj.contains("alpha") || !obj.contains("beta")) {
      throw ConfigError("config: beta accuracy needs 'alpha' and 'beta' in " + context);
    }
    const double alpha = obj.at("alpha").get<double>();
    const double beta = obj.at("beta").get<double>();
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw ConfigError("config: 'alpha' and 'beta' must be positive in " + context);
    }
    return BetaAccuracy{alpha, beta};
  }
  throw ConfigError("config: 'accuracy.kind' must be 'point' or 'beta' in " + context);
}

}  // namespace

ExperimentConfig parse_config(const std::string& jsonText) {
  json root;
  try {
    root = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  require_known_keys(root,
                     {"datasetPath", "predicates", "strategy", "votesPerPair",
                      "annotationProportion", "batchSize", "seedFraction", "numRuns",
                      "baseRngSeed", "exclusionThreshold", "roundRobin", "classifier",
                      "vocabulary"},
                     "");

  ExperimentConfig cfg;
  if (!root.contains("datasetPath")) throw ConfigError("config: missing key 'datasetPath'");
  cfg.datasetPath = root.at("datasetPath").get<std::string>();

  if (!root.contains("predicates")) throw ConfigError("config: missing key 'predicates'");
  const json& preds = root.at("predicates");
  if (!preds.is_array() || preds.empty()) {
    throw ConfigError("config: 'predicates' must be a nonempty array");
  }
  std::set<std::string> ids;
  for (const auto& p : preds) {
    if (!p.is_object()) throw ConfigError("config: each predicate must be an object");
    const std::string id = p.value("id", "");
    if (id.empty()) throw ConfigError("config: predicate missing 'id'");
    require_known_keys(p, {"id", "text", "accuracy"}, "predicate '" + id + "'");
    if (!ids.insert(id).second) throw ConfigError("config: duplicate predicate id '" + id + "'");
    PredicateConfig pc;
    pc.id = id;
    pc.text = p.value("text", id);
    if (!p.contains("accuracy")) {
      throw ConfigError("config: predicate '" + id + "' missing 'accuracy'");
    }
    pc.accuracy = parse_accuracy(p.at("accuracy"), "predicate '" + id + "'");
    cfg.predicates.push_back(std::move(pc));
  }

  if (root.contains("strategy")) {
    cfg.strategies.clear();
    for (const auto& name : scalar_or_list<std::string>(root.at("strategy"), "strategy")) {
      cfg.strategies.push_back(parse_strategy(name));
    }
  }
  if (root.contains("votesPerPair")) {
    cfg.votesPerPair = scalar_or_list<int>(root.at("votesPerPair"), "votesPerPair");
  }
  for (int v : cfg.votesPerPair) {
    if (v < 1) throw ConfigError("config: 'votesPerPair' must be >= 1");
  }
  if (root.contains("annotationProportion")) {
    cfg.annotationProportion =
        scalar_or_list<double>(root.at("annotationProportion"), "annotationProportion");
  }
  for (double p : cfg.annotationProportion) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ConfigError("config: 'annotationProportion' must be in (0, 1]");
    }
  }

  if (root.contains("batchSize")) {
    const long long k = root.at("batchSize").get<long long>();
    if (k < 1) throw ConfigError("config: 'batchSize' must be >= 1");
    cfg.batchSize = static_cast<std::size_t>(k);
  }
  if (root.contains("seedFraction")) {
    cfg.seedFraction = root.at("seedFraction").get<double>();
    if (!(cfg.seedFraction > 0.0 && cfg.seedFraction < 1.0)) {
      throw ConfigError("config: 'seedFraction' must be in (0, 1)");
    }
  }
  if (root.contains("numRuns")) {
    cfg.numRuns = root.at("numRuns").get<int>();
    if (cfg.numRuns < 1) throw ConfigError("config: 'numRuns' must be >= 1");
  }
  if (root.contains("baseRngSeed")) {
    cfg.baseRngSeed = root.at("baseRngSeed").get<std::uint64_t>();
  }
  if (root.contains("exclusionThreshold")) {
    cfg.exclusionThreshold = root.at("exclusionThreshold").get<double>();
    if (!(cfg.exclusionThreshold >= 0.0 && cfg.exclusionThreshold <= 1.0)) {
      throw ConfigError("config: 'exclusionThreshold' must be in [0, 1]");
    }
  }
  if (root.contains("roundRobin")) cfg.roundRobin = root.at("roundRobin").get<bool>();

  if (root.contains("classifier")) {
    const json& c = root.at("classifier");
    require_known_keys(c, {"l2Lambda", "epochs", "learningRate"}, "'classifier'");
    if (c.contains("l2Lambda")) {
      cfg.classifier.l2Lambda = c.at("l2Lambda").get<double>();
      if (cfg.classifier.l2Lambda < 0.0) throw ConfigError("config: 'l2Lambda' must be >= 0");
    }
    if (c.contains("epochs")) {
      cfg.classifier.epochs = c.at("epochs").get<int>();
      if (cfg.classifier.epochs < 1) throw ConfigError("config: 'epochs' must be >= 1");
    }
    if (c.contains("learningRate")) {
      cfg.classifier.learningRate = c.at("learningRate").get<double>();
      if (!(cfg.classifier.learningRate > 0.0)) {
        throw ConfigError("config: 'learningRate' must be positive");
      }
    }
  }
  if (root.contains("vocabulary")) {
    const json& v = root.at("vocabulary");
    require_known_keys(v, {"minDf", "maxFeatures"}, "'vocabulary'");
    if (v.contains("minDf")) {
      const long long minDf = v.at("minDf").get<long long>();
      if (minDf < 1) throw ConfigError("config: 'minDf' must be >= 1");
      cfg.vocabulary.minDf = static_cast<std::size_t>(minDf);
    }
    if (v.contains("maxFeatures")) {
      const long long maxFeatures = v.at("maxFeatures").get<long long>();
      if (maxFeatures < 1) throw ConfigError("config: 'maxFeatures' must be >= 1");
      cfg.vocabulary.maxFeatures = static_cast<std::size_t>(maxFeatures);
    }
  }

  for (double proportion : cfg.annotationProportion) {
    if (cfg.seedFraction > proportion) {
      throw ConfigError("config: 'seedFraction' must not exceed any 'annotationProportion'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

PredicateSet ExperimentConfig::predicate_set() const {
  PredicateSet set;
  for (const auto& p : predicates) set.predicates.push_back({p.id, p.text});
  set.validate();
  return set;
}

CrowdModel ExperimentConfig::crowd_model() const {
  CrowdModel crowd;
  for (const auto& p : predicates) crowd.perPredicate.emplace(p.id, p.accuracy);
  return crowd;
}

}  // namespace screenal
