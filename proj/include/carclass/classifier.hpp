#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "carclass/corpus.hpp"
#include "carclass/mining.hpp"

namespace carclass {

struct SentenceVerdict {
  std::string sentence_id;
  std::optional<CAR> rule;  // R_S
  bool matched() const noexcept { return rule.has_value(); }
};

struct ClassificationResult {
  std::optional<std::string> predicted_class;  // empty: abstain
  std::size_t variety = 0;                     // β
  double dispersion = 0.0;                     // Δ
  std::map<std::string, double> class_scores;  // every class of the model, 0 if unmatched
  std::vector<SentenceVerdict> verdicts;
};

/// Highest-ranked rule (rule_before order) whose itemset ⊆ `itemset`.
/// `rules` must already be sorted by sort_rules.
std::optional<CAR> match_sentence(const std::vector<CAR>& rules, const Itemset& itemset);

/// One encoded sentence of a document.
struct EncodedSentence {
  std::string sentence_id;
  Itemset itemset;
};

/// Sums the confidence of each sentence's best rule per class and derives
/// predclass, β and Δ over `classes`. Ties go to the smallest label.
ClassificationResult classify_itemsets(const std::vector<CAR>& rules, const std::vector<EncodedSentence>& sentences,
                                       const std::set<std::string>& classes);

/// A trained rule set together with the encoder that produced its transactions.
class Classifier {
 public:
  Classifier(std::vector<CAR> rules, SentenceEncoder encoder, std::set<std::string> classes);

  ClassificationResult classify(const Document& doc) const;
  const std::vector<CAR>& rules() const noexcept { return rules_; }
  const std::set<std::string>& classes() const noexcept { return classes_; }
  const SentenceEncoder& encoder() const noexcept { return encoder_; }

 private:
  std::vector<CAR> rules_;
  SentenceEncoder encoder_;
  std::set<std::string> classes_;
};

/// Convenience: classify with a strategy fitted on `training` (for tfidf the
/// sentence frequencies come from the training sentences, not the document).
ClassificationResult classify(const std::vector<CAR>& rules, const Document& doc, const TrainOptions& options,
                              const std::vector<LabeledSentence>& training, const std::set<std::string>& classes);

}  // namespace carclass
