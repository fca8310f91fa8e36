#include "carclass/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "carclass/error.hpp"
#include "text_util.hpp"

namespace carclass {

Constraint Constraint::head_only() { return {Builtin::head_only, {}, std::nullopt, true}; }
Constraint Constraint::nsubj_of_head() { return {Builtin::nsubj_of_head, {"nsubj"}, std::nullopt, false}; }
Constraint Constraint::ccomp_of_head() { return {Builtin::ccomp_of_head, {"ccomp"}, std::nullopt, false}; }
Constraint Constraint::nouns_dist1() { return {Builtin::nouns_dist1, {}, std::string("N"), false}; }
Constraint Constraint::verbs_dist1() { return {Builtin::verbs_dist1, {}, std::string("V"), false}; }

Constraint Constraint::custom(std::set<std::string> dep_labels, std::optional<std::string> pos_prefix, bool include_head) {
  if (pos_prefix && pos_prefix->empty()) pos_prefix.reset();
  if (dep_labels.empty() && !pos_prefix && !include_head)
    throw ConfigError("custom constraint needs labels, a POS prefix or head=true");
  return {Builtin::custom, std::move(dep_labels), std::move(pos_prefix), include_head};
}

bool Constraint::satisfied_by(const Sentence& s, std::size_t token_index) const {
  const Token& t = s.tokens.at(token_index - 1);
  if (pos_prefix && !t.pos.starts_with(*pos_prefix)) return false;
  if (t.is_root()) return include_head;
  if (dep_labels.empty() && !pos_prefix) return false;
  if (s.tokens[t.head - 1].head != 0) return false;  // not a direct dependent of the root
  return dep_labels.empty() || dep_labels.contains(t.dep_label);
}

namespace {

const std::unordered_set<std::string>& stanford_labels() {
  static const std::unordered_set<std::string> labels{
      "abbrev", "acomp",    "advcl",     "advmod",    "agent",   "amod",     "appos",     "attr",     "aux",
      "auxpass", "cc",      "ccomp",     "complm",    "conj",    "cop",      "csubj",     "csubjpass", "dep",
      "det",    "discourse", "dobj",     "expl",      "goeswith", "iobj",    "mark",      "mwe",      "neg",
      "nn",     "npadvmod", "nsubj",     "nsubjpass", "num",     "number",   "parataxis", "partmod",  "pcomp",
      "pobj",   "poss",     "possessive", "preconj",  "predet",  "prep",     "prepc",     "prt",      "punct",
      "purpcl", "quantmod", "rcmod",     "ref",       "rel",     "root",     "tmod",      "vmod",     "xcomp",
      "xsubj"};
  return labels;
}

bool known_label(const std::string& l) {
  if (stanford_labels().contains(l)) return true;
  // collapsed dependencies carry the preposition or conjunction: prep_of, conj_and
  for (const char* p : {"prep_", "prepc_", "conj_"})
    if (l.starts_with(p) && l.size() > std::char_traits<char>::length(p)) return true;
  return false;
}

std::string strategy_error(std::string_view text, const std::string& why) {
  return "invalid strategy '" + std::string(text) + "': " + why;
}

Constraint parse_custom(std::string_view text, std::string_view args) {
  std::set<std::string> labels;
  std::optional<std::string> pos;
  bool head = false;
  if (!detail::trim(args).empty()) {
    for (std::string_view kv : detail::split(args, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw ConfigError(strategy_error(text, "expected key=value"));
      const std::string_view key = detail::trim(kv.substr(0, eq));
      const std::string_view value = detail::trim(kv.substr(eq + 1));
      if (key == "labels") {
        if (!value.empty())
          for (std::string_view l : detail::split(value, '|'))
            if (!detail::trim(l).empty()) labels.emplace(detail::trim(l));
      } else if (key == "pos") {
        if (!value.empty()) pos = std::string(value);
      } else if (key == "head") {
        if (value == "true") head = true;
        else if (value == "false") head = false;
        else throw ConfigError(strategy_error(text, "head must be true or false"));
      } else {
        throw ConfigError(strategy_error(text, "unknown key '" + std::string(key) + "'"));
      }
    }
  }
  try {
    return Constraint::custom(std::move(labels), std::move(pos), head);
  } catch (const ConfigError& e) {
    throw ConfigError(strategy_error(text, e.what()));
  }
}

}  // namespace

PruneStrategy parse_strategy(std::string_view text) {
  const std::string_view t = detail::trim(text);
  if (t.starts_with("tfidf:")) {
    std::string_view rest = t.substr(6);
    if (!rest.starts_with("N=")) throw ConfigError(strategy_error(text, "expected tfidf:N=<positive integer>"));
    rest.remove_prefix(2);
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(std::string(rest), &used);
      if (used != rest.size() || v < 1) throw std::invalid_argument("range");
      n = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError(strategy_error(text, "N must be a positive integer"));
    }
    return TfidfStrategy{n};
  }
  if (t.starts_with("dep:")) {
    const std::string_view name = t.substr(4);
    if (name == "I0") return DependencyStrategy{Constraint::head_only()};
    if (name == "I1") return DependencyStrategy{Constraint::nsubj_of_head()};
    if (name == "I1'") return DependencyStrategy{Constraint::ccomp_of_head()};
    if (name == "I2") return DependencyStrategy{Constraint::nouns_dist1()};
    if (name == "I2'") return DependencyStrategy{Constraint::verbs_dist1()};
    if (name.starts_with("custom(") && name.ends_with(")"))
      return DependencyStrategy{parse_custom(text, name.substr(7, name.size() - 8))};
    throw ConfigError(strategy_error(text, "unknown dependency constraint"));
  }
  throw ConfigError(strategy_error(text, "expected 'tfidf:' or 'dep:' prefix"));
}

std::string to_string(const PruneStrategy& strategy) {
  if (const auto* tf = std::get_if<TfidfStrategy>(&strategy)) return "tfidf:N=" + std::to_string(tf->n);
  const Constraint& c = std::get<DependencyStrategy>(strategy).constraint;
  using B = Constraint::Builtin;
  switch (c.kind) {
    case B::head_only: return "dep:I0";
    case B::nsubj_of_head: return "dep:I1";
    case B::ccomp_of_head: return "dep:I1'";
    case B::nouns_dist1: return "dep:I2";
    case B::verbs_dist1: return "dep:I2'";
    case B::custom: break;
  }
  std::string labels;
  for (const std::string& l : c.dep_labels) {
    if (!labels.empty()) labels += '|';
    labels += l;
  }
  return "dep:custom(labels=" + labels + ",pos=" + c.pos_prefix.value_or("") +
         ",head=" + (c.include_head ? "true" : "false") + ")";
}

std::vector<std::string> constraint_warnings(const Constraint& c) {
  std::vector<std::string> out;
  for (const std::string& l : c.dep_labels)
    if (!known_label(l)) out.push_back("unknown dependency label '" + l + "'");
  return out;
}

SentenceFrequencies::SentenceFrequencies(const std::vector<const Sentence*>& sentences) : total_(sentences.size()) {
  std::unordered_set<std::string> seen;
  for (const Sentence* s : sentences) {
    seen.clear();
    for (const Token& t : s->tokens)
      if (seen.insert(t.lemma).second) ++df_[t.lemma];
  }
}

std::size_t SentenceFrequencies::frequency(const std::string& lemma) const {
  auto it = df_.find(lemma);
  return it == df_.end() ? 0 : it->second;
}

double SentenceFrequencies::score(const Sentence& s, const std::string& lemma) const {
  const auto tf = std::count_if(s.tokens.begin(), s.tokens.end(), [&](const Token& t) { return t.lemma == lemma; });
  if (tf == 0) throw DomainError("lemma '" + lemma + "' does not occur in sentence " + s.id);
  const std::size_t df = frequency(lemma);
  if (df == 0) return 0.0;
  return static_cast<double>(tf) * std::log(static_cast<double>(total_) / static_cast<double>(df));
}

double tfidf_score(const std::vector<const Sentence*>& sentences, const Sentence& s, const std::string& lemma) {
  return SentenceFrequencies(sentences).score(s, lemma);
}

std::vector<Item> select_tfidf(const SentenceFrequencies& table, const Sentence& s, std::size_t n) {
  struct Candidate {
    Item item;
    double score;
    std::size_t position;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    auto same = [&](const Candidate& c) { return c.item.lemma == t.lemma; };
    if (std::any_of(candidates.begin(), candidates.end(), same)) continue;
    candidates.push_back({{t.lemma, t.pos}, table.score(s, t.lemma), i});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  if (candidates.size() > n) candidates.resize(n);
  std::vector<Item> out;
  out.reserve(candidates.size());
  for (Candidate& c : candidates) out.push_back(std::move(c.item));
  return out;
}

std::vector<Item> select_dependency(const Sentence& s, const Constraint& c) {
  std::vector<Item> out;
  for (std::size_t i = 1; i <= s.tokens.size(); ++i) {
    if (!c.satisfied_by(s, i)) continue;
    const Token& t = s.tokens[i - 1];
    auto same = [&](const Item& it) { return it.lemma == t.lemma; };
    if (std::none_of(out.begin(), out.end(), same)) out.push_back({t.lemma, t.pos});
  }
  return out;
}

namespace {

std::vector<const Sentence*> sentence_pointers(const std::vector<LabeledSentence>& sentences) {
  std::vector<const Sentence*> out;
  out.reserve(sentences.size());
  for (const LabeledSentence& ls : sentences) out.push_back(ls.sentence);
  return out;
}

}  // namespace

std::vector<PrunedTransaction> prune_tfidf(const std::vector<LabeledSentence>& sentences, std::size_t n) {
  const Pruner pruner(TfidfStrategy{n}, sentences);
  std::vector<PrunedTransaction> out;
  out.reserve(sentences.size());
  for (const LabeledSentence& ls : sentences) out.push_back({pruner.prune(*ls.sentence), ls.class_label});
  return out;
}

std::vector<PrunedTransaction> prune_dependency(const std::vector<LabeledSentence>& sentences, const Constraint& c) {
  std::vector<PrunedTransaction> out;
  out.reserve(sentences.size());
  for (const LabeledSentence& ls : sentences) out.push_back({select_dependency(*ls.sentence, c), ls.class_label});
  return out;
}

double average_transaction_size(const std::vector<Itemset>& itemsets) {
  std::size_t total = 0;
  std::size_t count = 0;
  for (const Itemset& i : itemsets) {
    if (i.empty()) continue;
    total += i.size();
    ++count;
  }
  if (count == 0) throw DomainError("average transaction size of an empty transaction set");
  return static_cast<double>(total) / static_cast<double>(count);
}

double average_transaction_size(const std::vector<PrunedTransaction>& transactions) {
  std::vector<Itemset> itemsets;
  itemsets.reserve(transactions.size());
  for (const PrunedTransaction& t : transactions) itemsets.push_back(t.itemset());
  return average_transaction_size(itemsets);
}

Pruner::Pruner(PruneStrategy strategy, const std::vector<LabeledSentence>& training) : strategy_(std::move(strategy)) {
  if (const auto* tf = std::get_if<TfidfStrategy>(&strategy_)) {
    if (tf->n == 0) throw ConfigError("tfidf N must be at least 1");
    table_ = SentenceFrequencies(sentence_pointers(training));
  }
}

std::vector<Item> Pruner::prune(const Sentence& s) const {
  if (const auto* tf = std::get_if<TfidfStrategy>(&strategy_)) return select_tfidf(table_, s, tf->n);
  return select_dependency(s, std::get<DependencyStrategy>(strategy_).constraint);
}

double constraint_coverage(const std::vector<LabeledSentence>& sentences, const Constraint& c) {
  if (sentences.empty()) return 0.0;
  const auto hits = std::count_if(sentences.begin(), sentences.end(), [&](const LabeledSentence& ls) {
    for (std::size_t i = 1; i <= ls.sentence->tokens.size(); ++i)
      if (c.satisfied_by(*ls.sentence, i)) return true;
    return false;
  });
  return static_cast<double>(hits) / static_cast<double>(sentences.size());
}

}  // namespace carclass
