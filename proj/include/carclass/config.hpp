#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "carclass/evaluation.hpp"
#include "carclass/mining.hpp"
#include "carclass/pruning.hpp"
#include "carclass/wordnet.hpp"

namespace carclass {

enum class OutputFormat { tsv, json };

/// Everything a CLI run needs; every experiment hyperparameter is a named key.
struct RunConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path wordnet_dir;
  std::filesystem::path freq_file;
  std::filesystem::path output_dir = ".";
  PruneStrategy strategy = DependencyStrategy{Constraint::nsubj_of_head()};
  std::size_t hyper_n = 0;
  HyperonymizeOptions hyperonymize;
  MiningParams mining{0.01, 0.6, 5};
  SearchConfig search;
  OutputFormat format = OutputFormat::tsv;
};

/// Reads a JSON config; unknown keys are rejected. Relative paths resolve
/// against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir = {});

/// Throws ConfigError on missing paths or hyper_n > 0 without WordNet data.
void validate_config(const RunConfig& config, bool need_corpus = true);

TrainOptions train_options(const RunConfig& config, const Lexicon* lexicon);
EvalOptions eval_options(const RunConfig& config, const Lexicon* lexicon);

}  // namespace carclass
