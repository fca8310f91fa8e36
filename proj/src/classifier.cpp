#include "carclass/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "carclass/error.hpp"

namespace carclass {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

std::optional<CAR> match_sentence(const std::vector<CAR>& rules, const Itemset& itemset) {
  for (const CAR& r : rules)
    if (r.itemset.subset_of(itemset)) return r;
  return std::nullopt;
}

ClassificationResult classify_itemsets(const std::vector<CAR>& rules, const std::vector<EncodedSentence>& sentences,
                                       const std::set<std::string>& classes) {
  ClassificationResult result;
  std::map<std::string, CompensatedSum> sums;
  for (const std::string& c : classes) sums[c];
  for (const EncodedSentence& s : sentences) {
    SentenceVerdict v{s.sentence_id, match_sentence(rules, s.itemset)};
    if (v.rule) sums[v.rule->class_label].add(v.rule->confidence());
    result.verdicts.push_back(std::move(v));
  }
  for (const auto& [c, sum] : sums) result.class_scores[c] = sum.value();

  double best = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& [c, score] : result.class_scores) {
    if (score > 0.0) ++result.variety;
    // std::map iterates labels in ascending order, so strict '>' keeps the smallest label on ties.
    if (score > best) {
      best = score;
      result.predicted_class = c;
    }
    lo = first ? score : std::min(lo, score);
    hi = first ? score : std::max(hi, score);
    first = false;
  }
  result.dispersion = hi - lo;
  return result;
}

Classifier::Classifier(std::vector<CAR> rules, SentenceEncoder encoder, std::set<std::string> classes)
    : rules_(std::move(rules)), encoder_(std::move(encoder)), classes_(std::move(classes)) {
  if (!std::is_sorted(rules_.begin(), rules_.end(), rule_before)) sort_rules(rules_);
}

ClassificationResult Classifier::classify(const Document& doc) const {
  std::vector<EncodedSentence> encoded;
  encoded.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) encoded.push_back({s.id, encoder_.encode(s).itemset()});
  return classify_itemsets(rules_, encoded, classes_);
}

ClassificationResult classify(const std::vector<CAR>& rules, const Document& doc, const TrainOptions& options,
                              const std::vector<LabeledSentence>& training, const std::set<std::string>& classes) {
  return Classifier(rules, SentenceEncoder(options, training), classes).classify(doc);
}

}  // namespace carclass
