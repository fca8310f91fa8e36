// carclass: train, apply and evaluate class-association-rule text classifiers.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "carclass/classifier.hpp"
#include "carclass/config.hpp"
#include "carclass/corpus.hpp"
#include "carclass/error.hpp"
#include "carclass/evaluation.hpp"
#include "carclass/mining.hpp"
#include "carclass/wordnet.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace carclass;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kConfig = 2, kRuntime = 3 };

struct Overrides {
  std::string config;
  std::string corpus, wordnet_dir, freq_file, output_dir, strategy, format;
  std::optional<std::size_t> hyper_n, max_itemset_size, max_probes, folds;
  std::optional<double> min_support, min_confidence, sigma0, kappa0, rho0, tolerance;
  std::optional<std::uint64_t> seed;
};

RunConfig build_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (const char* env = std::getenv("CARCLASS_WORDNET_DIR"); env && *env) c.wordnet_dir = env;
  if (!o.corpus.empty()) c.corpus_path = o.corpus;
  if (!o.wordnet_dir.empty()) c.wordnet_dir = o.wordnet_dir;
  if (!o.freq_file.empty()) c.freq_file = o.freq_file;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.strategy.empty()) c.strategy = parse_strategy(o.strategy);
  if (!o.format.empty()) {
    if (o.format == "tsv") c.format = OutputFormat::tsv;
    else if (o.format == "json") c.format = OutputFormat::json;
    else throw ConfigError("--format must be tsv or json");
  }
  if (o.hyper_n) c.hyper_n = *o.hyper_n;
  if (o.max_itemset_size) c.mining.max_itemset_size = *o.max_itemset_size;
  if (o.min_support) c.mining.min_support = *o.min_support;
  if (o.min_confidence) c.mining.min_confidence = *o.min_confidence;
  if (o.sigma0) c.search.sigma0 = *o.sigma0;
  if (o.kappa0) c.search.kappa0 = *o.kappa0;
  if (o.rho0) c.search.rho0 = *o.rho0;
  if (o.tolerance) c.search.tolerance = *o.tolerance;
  if (o.max_probes) c.search.max_probes = *o.max_probes;
  if (o.folds) c.search.folds = *o.folds;
  if (o.seed) c.search.seed = *o.seed;
  return c;
}

std::optional<Lexicon> maybe_lexicon(const RunConfig& c) {
  if (c.hyper_n == 0 || c.wordnet_dir.empty()) return std::nullopt;
  return load_lexicon(c.wordnet_dir, c.freq_file);
}

void write_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string percent(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << 100.0 * v << '%';
  return s.str();
}

int cmd_validate(const RunConfig& c) {
  validate_config(c);
  const Corpus corpus = parse_corpus(c.corpus_path);
  const auto sentences = forgetful(corpus);
  std::size_t tokens = 0;
  for (const auto& ls : sentences) tokens += ls.sentence->tokens.size();
  std::cout << "documents: " << corpus.documents().size() << '\n'
            << "sentences: " << sentences.size() << '\n'
            << "tokens: " << tokens << '\n'
            << "classes: " << corpus.classes().size() << " (";
  bool first = true;
  for (const auto& cl : corpus.classes()) {
    std::cout << (first ? "" : ", ") << cl;
    first = false;
  }
  std::cout << ")\n";
  const std::pair<const char*, Constraint> coverage[] = {
      {"I0 head", Constraint::head_only()},
      {"I1 nsubj->root", Constraint::nsubj_of_head()},
      {"I1' ccomp->root", Constraint::ccomp_of_head()},
      {"I2 nouns at distance 1", Constraint::nouns_dist1()},
      {"I2' verbs at distance 1", Constraint::verbs_dist1()},
  };
  for (const auto& [name, constraint] : coverage)
    std::cout << "coverage " << name << ": " << percent(constraint_coverage(sentences, constraint)) << '\n';
  if (const auto* dep = std::get_if<DependencyStrategy>(&c.strategy)) {
    std::cout << "coverage configured (" << to_string(c.strategy)
              << "): " << percent(constraint_coverage(sentences, dep->constraint)) << '\n';
    for (const auto& w : constraint_warnings(dep->constraint)) std::cerr << "warning: " << w << '\n';
  }
  if (!c.wordnet_dir.empty()) {
    const Lexicon lex = load_lexicon(c.wordnet_dir, c.freq_file);
    std::size_t nouns = 0;
    for (const auto& s : lex.synsets()) nouns += s.pos == WordPos::noun;
    std::cout << "synsets: " << lex.size() << " (nouns " << nouns << ", verbs " << lex.size() - nouns << ")\n"
              << "noun sinks: " << lex.sinks(WordPos::noun).size() << '\n'
              << "verb sinks: " << lex.sinks(WordPos::verb).size() << '\n';
  }
  std::cout << "invariants: ok\n";
  return kOk;
}

int cmd_mine(const RunConfig& c) {
  validate_config(c);
  const Corpus corpus = parse_corpus(c.corpus_path);
  const auto lexicon = maybe_lexicon(c);
  const TrainOptions opts = train_options(c, lexicon ? &*lexicon : nullptr);
  const auto sentences = forgetful(corpus);
  const SentenceEncoder encoder(opts, sentences);
  const EncodedCorpus encoded = encoder.encode_all(sentences);

  RuleSet rs;
  rs.header = {to_string(c.strategy), c.hyper_n, c.mining.min_support, c.mining.min_confidence,
               c.mining.max_itemset_size, corpus_hash(corpus), encoded.transactions.size(),
               {corpus.classes().begin(), corpus.classes().end()}};
  if (!encoded.transactions.empty()) rs.rules = apriori(encoded.transactions, c.mining);
  if (rs.rules.empty()) std::cerr << "warning: no rule satisfies the thresholds\n";

  std::ostringstream body;
  fs::path out = c.output_dir;
  if (c.format == OutputFormat::json) {
    body << rules_to_json(rs);
    out /= "rules.json";
  } else {
    write_rules_tsv(rs, body);
    out /= "rules.tsv";
  }
  write_file(out, body.str());
  std::cout << "rules: " << rs.rules.size() << '\n';
  if (!encoded.transactions.empty())
    std::cout << "avg_transaction_size: " << average_transaction_size(encoded.pruned) << '\n';
  std::cout << "written: " << out.string() << '\n';
  return kOk;
}

RuleSet read_rule_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule file " + path.string());
  if (path.extension() == ".json") {
    std::stringstream buf;
    buf << in.rdbuf();
    return rules_from_json(buf.str());
  }
  return read_rules_tsv(in);
}

nlohmann::json result_json(const Document& doc, const ClassificationResult& r) {
  nlohmann::json j;
  j["document"] = doc.id;
  j["predicted_class"] = r.predicted_class ? nlohmann::json(*r.predicted_class) : nlohmann::json(nullptr);
  j["variety"] = r.variety;
  j["dispersion"] = r.dispersion;
  j["class_scores"] = r.class_scores;
  auto verdicts = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    nlohmann::json vj{{"sentence", v.sentence_id}, {"matched", v.matched()}};
    if (v.rule) {
      vj["items"] = v.rule->itemset.items();
      vj["class"] = v.rule->class_label;
      vj["confidence"] = v.rule->confidence();
    }
    verdicts.push_back(vj);
  }
  j["verdicts"] = verdicts;
  return j;
}

int cmd_classify(const RunConfig& c, const std::string& rules_path, const std::string& docs_path) {
  validate_config(c, false);
  const RuleSet rs = read_rule_file(rules_path);
  if (rs.header.strategy != to_string(c.strategy))
    throw ConfigError("rule file was mined with strategy " + rs.header.strategy + ", config says " + to_string(c.strategy));
  if (rs.header.hyper_n != c.hyper_n)
    throw ConfigError("rule file was mined with hyper_n " + std::to_string(rs.header.hyper_n) + ", config says " +
                      std::to_string(c.hyper_n));

  // tfidf needs the training sentence frequencies, so the training corpus must
  // be the one the rules were mined from.
  std::optional<Corpus> training;
  if (!c.corpus_path.empty()) {
    training = parse_corpus(c.corpus_path);
    if (corpus_hash(*training) != rs.header.corpus_hash)
      throw ConfigError("configured corpus does not match the rule file's corpus hash");
  } else if (std::holds_alternative<TfidfStrategy>(c.strategy)) {
    throw ConfigError("tfidf rule files need the training corpus (--corpus) to rebuild sentence frequencies");
  }

  const auto lexicon = maybe_lexicon(c);
  const TrainOptions opts = train_options(c, lexicon ? &*lexicon : nullptr);
  const auto sentences = training ? forgetful(*training) : std::vector<LabeledSentence>{};
  ParseOptions popts;
  popts.require_class = false;
  const Corpus docs = parse_corpus(fs::path(docs_path), popts);
  const Classifier classifier(rs.rules, SentenceEncoder(opts, sentences),
                              {rs.header.classes.begin(), rs.header.classes.end()});
  for (const Document& d : docs.documents()) std::cout << result_json(d, classifier.classify(d)).dump() << '\n';
  return kOk;
}

int cmd_evaluate(const RunConfig& c) {
  validate_config(c);
  const Corpus corpus = parse_corpus(c.corpus_path);
  const auto lexicon = maybe_lexicon(c);
  const EvalReport report = evaluate(corpus, c.search, eval_options(c, lexicon ? &*lexicon : nullptr));
  write_file(c.output_dir / "report.json", report_to_json(report));
  write_file(c.output_dir / "report.tsv", report_to_tsv(report));
  std::cout << report_to_tsv(report);
  if (report.out_of_window)
    std::cerr << "warning: no probe reached the rule-count window; reporting the closest (rho = " << report.rho << ")\n";
  return kOk;
}

int cmd_sweep(const RunConfig& c, const std::string& axis_name, std::size_t from, std::size_t to) {
  validate_config(c);
  SweepAxis axis;
  if (axis_name == "tfidf_n") axis = SweepAxis::tfidf_n;
  else if (axis_name == "hyper_order") axis = SweepAxis::hyper_order;
  else throw ConfigError("--axis must be tfidf_n or hyper_order");
  if (from > to) throw ConfigError("--from must not exceed --to");
  if (axis == SweepAxis::hyper_order && (c.wordnet_dir.empty() || c.freq_file.empty()) && to > 0)
    throw ConfigError("hyper_order sweeps need wordnet_dir and freq_file");

  const Corpus corpus = parse_corpus(c.corpus_path);
  std::optional<Lexicon> lexicon;
  if (axis == SweepAxis::hyper_order) lexicon = load_lexicon(c.wordnet_dir, c.freq_file);
  else if (c.hyper_n > 0) lexicon = maybe_lexicon(c);
  std::vector<std::size_t> values;
  for (std::size_t x = from; x <= to; ++x) values.push_back(x);
  const auto rows = sweep(corpus, c.search, eval_options(c, lexicon ? &*lexicon : nullptr), axis, values);
  const std::string tsv = curve_to_tsv(rows, axis);
  write_file(c.output_dir / ("curve_" + axis_name + ".tsv"), tsv);
  std::cout << tsv;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-association-rule text classification over dependency-parsed corpora"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Overrides o;
  app.add_option("-c,--config", o.config, "JSON config file");
  app.add_option("--corpus", o.corpus, "Corpus file (CoNLL-style)");
  app.add_option("--wordnet-dir", o.wordnet_dir, "WordNet dict directory (env CARCLASS_WORDNET_DIR)");
  app.add_option("--freq-file", o.freq_file, "Synset frequency file");
  app.add_option("--output-dir", o.output_dir, "Directory for output files");
  app.add_option("--strategy", o.strategy, "tfidf:N=10 | dep:I0 | dep:I1 | dep:I1' | dep:I2 | dep:I2' | dep:custom(...)");
  app.add_option("--format", o.format, "Rule file format: tsv or json");
  app.add_option("--hyper-n", o.hyper_n, "Hyperonymic order (0 = none)");
  app.add_option("--min-support", o.min_support, "Minimum support");
  app.add_option("--min-confidence", o.min_confidence, "Minimum confidence");
  app.add_option("--max-itemset-size", o.max_itemset_size, "Largest itemset mined");
  app.add_option("--sigma0", o.sigma0, "Initial support for the threshold search");
  app.add_option("--kappa0", o.kappa0, "Initial confidence for the threshold search");
  app.add_option("--rho0", o.rho0, "Target rule count");
  app.add_option("--tolerance", o.tolerance, "Allowed distance from the target rule count");
  app.add_option("--max-probes", o.max_probes, "Cross-validation runs allowed in the search");
  app.add_option("--folds", o.folds, "Cross-validation folds");
  app.add_option("--seed", o.seed, "Fold shuffling seed");

  auto* validate = app.add_subcommand("validate", "Check corpus (and lexicon) invariants and print statistics");
  auto* mine = app.add_subcommand("mine", "Mine class association rules");
  auto* classify = app.add_subcommand("classify", "Classify documents with a rule file");
  std::string rules_path, docs_path;
  classify->add_option("--rules", rules_path, "Rule file (.tsv or .json)")->required();
  classify->add_option("--docs", docs_path, "Documents to classify")->required();
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Tune (sigma, kappa) to the rule budget and cross-validate");
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate along tfidf N or hyperonymic order");
  std::string axis;
  std::size_t from = 1, to = 12;
  sweep_cmd->add_option("--axis", axis, "tfidf_n or hyper_order")->required();
  sweep_cmd->add_option("--from", from, "First axis value");
  sweep_cmd->add_option("--to", to, "Last axis value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    const RunConfig config = build_config(o);
    if (validate->parsed()) return cmd_validate(config);
    if (mine->parsed()) return cmd_mine(config);
    if (classify->parsed()) return cmd_classify(config, rules_path, docs_path);
    if (evaluate_cmd->parsed()) return cmd_evaluate(config);
    if (sweep_cmd->parsed()) return cmd_sweep(config, axis, from, to);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const SchemaError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const TreeError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
