#include "carclass/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "carclass/error.hpp"
#include "json.hpp"

namespace carclass {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
}

}  // namespace

RunConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(j, {"corpus", "wordnet_dir", "freq_file", "output_dir", "strategy", "hyper_n", "hyperonymize_pos",
                   "sense_policy", "min_support", "min_confidence", "max_itemset_size", "format", "search"}, "");
    if (j.contains("corpus")) c.corpus_path = resolve(base_dir, j["corpus"].get<std::string>());
    if (j.contains("wordnet_dir")) c.wordnet_dir = resolve(base_dir, j["wordnet_dir"].get<std::string>());
    if (j.contains("freq_file")) c.freq_file = resolve(base_dir, j["freq_file"].get<std::string>());
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
    if (j.contains("hyper_n")) c.hyper_n = j["hyper_n"].get<std::size_t>();
    if (j.contains("hyperonymize_pos")) {
      c.hyperonymize.nouns = c.hyperonymize.verbs = false;
      for (const auto& p : j["hyperonymize_pos"]) {
        const auto s = p.get<std::string>();
        if (s == "noun") c.hyperonymize.nouns = true;
        else if (s == "verb") c.hyperonymize.verbs = true;
        else throw ConfigError("hyperonymize_pos entries must be 'noun' or 'verb'");
      }
    }
    if (j.contains("sense_policy")) {
      const auto s = j["sense_policy"].get<std::string>();
      if (s == "most_frequent") c.hyperonymize.policy = SensePolicy::most_frequent;
      else if (s == "context_overlap") c.hyperonymize.policy = SensePolicy::context_overlap;
      else throw ConfigError("sense_policy must be 'most_frequent' or 'context_overlap'");
    }
    if (j.contains("min_support")) c.mining.min_support = j["min_support"].get<double>();
    if (j.contains("min_confidence")) c.mining.min_confidence = j["min_confidence"].get<double>();
    if (j.contains("max_itemset_size")) c.mining.max_itemset_size = j["max_itemset_size"].get<std::size_t>();
    if (j.contains("format")) {
      const auto f = j["format"].get<std::string>();
      if (f == "tsv") c.format = OutputFormat::tsv;
      else if (f == "json") c.format = OutputFormat::json;
      else throw ConfigError("format must be 'tsv' or 'json'");
    }
    if (j.contains("search")) {
      const auto& s = j["search"];
      check_keys(s, {"sigma0", "kappa0", "rho0", "tolerance", "seed", "max_probes", "folds"}, "search.");
      if (s.contains("sigma0")) c.search.sigma0 = s["sigma0"].get<double>();
      if (s.contains("kappa0")) c.search.kappa0 = s["kappa0"].get<double>();
      if (s.contains("rho0")) c.search.rho0 = s["rho0"].get<double>();
      if (s.contains("tolerance")) c.search.tolerance = s["tolerance"].get<double>();
      if (s.contains("seed")) c.search.seed = s["seed"].get<std::uint64_t>();
      if (s.contains("max_probes")) c.search.max_probes = s["max_probes"].get<std::size_t>();
      if (s.contains("folds")) c.search.folds = s["folds"].get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str(), path.parent_path());
}

void validate_config(const RunConfig& c, bool need_corpus) {
  namespace fs = std::filesystem;
  if (need_corpus) {
    if (c.corpus_path.empty()) throw ConfigError("no corpus configured");
    if (!fs::exists(c.corpus_path)) throw ConfigError("corpus not found: " + c.corpus_path.string());
  }
  if (c.hyper_n > 0 && (c.wordnet_dir.empty() || c.freq_file.empty()))
    throw ConfigError("hyper_n > 0 requires wordnet_dir and freq_file");
  if (!c.wordnet_dir.empty() && !fs::is_directory(c.wordnet_dir))
    throw ConfigError("WordNet directory not found: " + c.wordnet_dir.string());
  if (!c.freq_file.empty() && !fs::exists(c.freq_file))
    throw ConfigError("frequency file not found: " + c.freq_file.string());
  const MiningParams& m = c.mining;
  if (!(m.min_support >= 0 && m.min_support <= 1) || !(m.min_confidence >= 0 && m.min_confidence <= 1))
    throw ConfigError("min_support and min_confidence must lie in [0, 1]");
  if (m.max_itemset_size == 0) throw ConfigError("max_itemset_size must be positive");
  if (c.search.rho0 < 1) throw ConfigError("search.rho0 must be at least 1");
  if (c.search.tolerance < 0) throw ConfigError("search.tolerance must be non-negative");
  if (c.search.folds == 0) throw ConfigError("search.folds must be positive");
}

TrainOptions train_options(const RunConfig& c, const Lexicon* lexicon) {
  return {c.strategy, c.hyper_n, lexicon, c.hyperonymize};
}

EvalOptions eval_options(const RunConfig& c, const Lexicon* lexicon) {
  return {train_options(c, lexicon), c.mining.max_itemset_size, c.search.folds, c.search.seed};
}

}  // namespace carclass
