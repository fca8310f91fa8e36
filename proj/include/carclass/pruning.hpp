#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "carclass/corpus.hpp"
#include "carclass/itemset.hpp"

namespace carclass {

/// A morphosyntactic constraint on the words of a sentence.
///
/// A word is kept when it is the root and `include_head` is set, or when it
/// depends directly on the root through one of `dep_labels` (any label if the
/// set is empty) and its POS starts with `pos_prefix`. The dependent branch is
/// active only when at least one of `dep_labels` / `pos_prefix` is given. The
/// POS prefix, when present, applies to every selected word.
struct Constraint {
  enum class Builtin { head_only, nsubj_of_head, ccomp_of_head, nouns_dist1, verbs_dist1, custom };

  Builtin kind = Builtin::custom;
  std::set<std::string> dep_labels;
  std::optional<std::string> pos_prefix;
  bool include_head = false;

  static Constraint head_only();      // I0
  static Constraint nsubj_of_head();  // I1
  static Constraint ccomp_of_head();  // I1'
  static Constraint nouns_dist1();    // I2
  static Constraint verbs_dist1();    // I2'
  /// Throws ConfigError when nothing would be selected.
  static Constraint custom(std::set<std::string> dep_labels, std::optional<std::string> pos_prefix, bool include_head);

  bool satisfied_by(const Sentence& s, std::size_t token_index /* 1-based */) const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct TfidfStrategy {
  std::size_t n = 1;
  friend bool operator==(const TfidfStrategy&, const TfidfStrategy&) = default;
};

struct DependencyStrategy {
  Constraint constraint;
  friend bool operator==(const DependencyStrategy&, const DependencyStrategy&) = default;
};

using PruneStrategy = std::variant<TfidfStrategy, DependencyStrategy>;

/// Parses `tfidf:N=10`, `dep:I0`, `dep:I1`, `dep:I1'`, `dep:I2`, `dep:I2'` and
/// `dep:custom(labels=nsubj|dobj,pos=N,head=false)`.
PruneStrategy parse_strategy(std::string_view text);
/// Canonical text form; parse_strategy(to_string(s)) == s.
std::string to_string(const PruneStrategy& strategy);

/// Labels outside the Stanford typed-dependency inventory; informational only.
std::vector<std::string> constraint_warnings(const Constraint& c);

/// Sentence frequencies of lemmas over a training sentence set.
class SentenceFrequencies {
 public:
  SentenceFrequencies() = default;
  explicit SentenceFrequencies(const std::vector<const Sentence*>& sentences);

  std::size_t sentence_count() const noexcept { return total_; }
  std::size_t frequency(const std::string& lemma) const;
  /// freq_S(lemma) · ln(#sentences / #sentences containing lemma). Lemmas never
  /// seen in the training set score 0. Throws DomainError if lemma ∉ s.
  double score(const Sentence& s, const std::string& lemma) const;

 private:
  std::unordered_map<std::string, std::size_t> df_;
  std::size_t total_ = 0;
};

double tfidf_score(const std::vector<const Sentence*>& sentences, const Sentence& s, const std::string& lemma);

/// Top-n distinct lemmas of `s` by descending score, earliest position on ties.
std::vector<Item> select_tfidf(const SentenceFrequencies& table, const Sentence& s, std::size_t n);
std::vector<Item> select_dependency(const Sentence& s, const Constraint& c);

std::vector<PrunedTransaction> prune_tfidf(const std::vector<LabeledSentence>& sentences, std::size_t n);
std::vector<PrunedTransaction> prune_dependency(const std::vector<LabeledSentence>& sentences, const Constraint& c);

/// Mean cardinality over the non-empty itemsets; DomainError if there are none.
double average_transaction_size(const std::vector<Itemset>& itemsets);
double average_transaction_size(const std::vector<PrunedTransaction>& transactions);

/// A pruning strategy with its training-time state (the tfidf table), usable
/// on training sentences and on unseen documents alike.
class Pruner {
 public:
  Pruner(PruneStrategy strategy, const std::vector<LabeledSentence>& training);

  const PruneStrategy& strategy() const noexcept { return strategy_; }
  std::vector<Item> prune(const Sentence& s) const;

 private:
  PruneStrategy strategy_;
  SentenceFrequencies table_;
};

/// Fraction of sentences with at least one word satisfying `c`.
double constraint_coverage(const std::vector<LabeledSentence>& sentences, const Constraint& c);

}  // namespace carclass
