#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "carclass/corpus.hpp"
#include "carclass/itemset.hpp"
#include "carclass/pruning.hpp"
#include "carclass/wordnet.hpp"

namespace carclass {

struct Transaction {
  Itemset itemset;
  std::string class_label;
  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Exact non-negative fraction; comparisons never round.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    const auto l = static_cast<unsigned __int128>(a.num) * b.den;
    const auto r = static_cast<unsigned __int128>(b.num) * a.den;
    return l <=> r;
  }
};

/// Class association rule itemset ⇒ class_label with exact counts:
/// `itemset_count` transactions contain the itemset, `rule_count` of those
/// carry the class, out of `db_size` transactions.
struct CAR {
  Itemset itemset;
  std::string class_label;
  std::uint64_t rule_count = 0;
  std::uint64_t itemset_count = 0;
  std::uint64_t db_size = 0;

  Ratio support_ratio() const noexcept { return {itemset_count, db_size}; }
  Ratio confidence_ratio() const noexcept { return {rule_count, itemset_count}; }
  double support() const noexcept { return support_ratio().value(); }
  double confidence() const noexcept { return confidence_ratio().value(); }

  friend bool operator==(const CAR&, const CAR&) = default;
};

/// The documented total rule order: confidence desc, support desc, itemset
/// ascending, class ascending. `rule_before(a, b)` is true when a ranks first.
bool rule_before(const CAR& a, const CAR& b);
void sort_rules(std::vector<CAR>& rules);

struct MiningParams {
  double min_support = 0.0;
  double min_confidence = 0.0;
  std::size_t max_itemset_size = 5;
};

/// Fraction meets a real threshold: num/den ≥ threshold.
bool meets_threshold(std::uint64_t num, std::uint64_t den, double threshold);

Ratio support_ratio(const Itemset& itemset, const std::vector<Transaction>& db);
double support(const Itemset& itemset, const std::vector<Transaction>& db);
Ratio confidence_ratio(const Itemset& itemset, const std::string& class_label, const std::vector<Transaction>& db);
double confidence(const Itemset& itemset, const std::string& class_label, const std::vector<Transaction>& db);

/// Level-wise apriori restricted to class consequents. Output is sorted by
/// rule_before. Frequent itemsets are those with support ≥ min_support over
/// the whole db; each class with ≥1 covering transaction and confidence ≥
/// min_confidence yields a rule.
std::vector<CAR> apriori(const std::vector<Transaction>& db, const MiningParams& params);

/// Non-empty hyperonymized transactions, ready for mining.
std::vector<Transaction> to_transactions(const std::vector<PrunedTransaction>& pruned);

/// Prune + hyperonymize a sentence stream using a strategy fitted on it.
struct EncodedCorpus {
  std::vector<PrunedTransaction> pruned;  // one per sentence, possibly empty
  std::vector<Transaction> transactions;  // non-empty only
};

struct TrainOptions {
  PruneStrategy strategy = DependencyStrategy{Constraint::head_only()};
  std::size_t hyper_n = 0;
  const Lexicon* lexicon = nullptr;
  HyperonymizeOptions hyperonymize;
};

/// Turns sentences into itemsets the same way for training and classification.
class SentenceEncoder {
 public:
  SentenceEncoder(const TrainOptions& options, const std::vector<LabeledSentence>& training);

  PrunedTransaction encode(const Sentence& s, const std::string& class_label = {}) const;
  EncodedCorpus encode_all(const std::vector<LabeledSentence>& sentences) const;
  const TrainOptions& options() const noexcept { return options_; }

 private:
  TrainOptions options_;
  Pruner pruner_;
};

std::vector<CAR> train(const std::vector<LabeledSentence>& sentences, const MiningParams& params,
                       const TrainOptions& options);
std::vector<CAR> train(const Corpus& corpus, const MiningParams& params, const TrainOptions& options);

/// Self-describing metadata stored in rule files.
struct RuleSetHeader {
  std::string strategy;
  std::size_t hyper_n = 0;
  double min_support = 0.0;
  double min_confidence = 0.0;
  std::size_t max_itemset_size = 5;
  std::string corpus_hash;
  std::uint64_t transactions = 0;
  std::vector<std::string> classes;
  friend bool operator==(const RuleSetHeader&, const RuleSetHeader&) = default;
};

struct RuleSet {
  RuleSetHeader header;
  std::vector<CAR> rules;
  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// TSV: `# key = value` header lines, then ITEMS CLASS SUPPORT CONFIDENCE rows
/// with comma-joined, backslash-escaped items.
void write_rules_tsv(const RuleSet& rules, std::ostream& out);
RuleSet read_rules_tsv(std::istream& in);
/// JSON form carrying exact counts.
std::string rules_to_json(const RuleSet& rules);
RuleSet rules_from_json(const std::string& text);

}  // namespace carclass
