#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "carclass/itemset.hpp"

namespace carclass {

enum class WordPos { noun, verb };

char pos_letter(WordPos pos) noexcept;
/// Nouns are tags starting with 'N', verbs tags starting with 'V'.
std::optional<WordPos> word_pos_from_tag(std::string_view tag) noexcept;

struct Synset {
  std::string id;  // "00001740-n"
  WordPos pos = WordPos::noun;
  std::vector<std::string> lemmas;  // first = most frequent word
  std::vector<std::string> hypernyms;
  std::vector<std::string> instance_hypernyms;
};

/// Strict total order on synsets: log-frequency first, then synset id.
struct OrderKey {
  double log_frequency = 0.0;
  std::string id;

  friend std::partial_ordering operator<=>(const OrderKey& a, const OrderKey& b) {
    if (auto c = a.log_frequency <=> b.log_frequency; c != 0) return c;
    return a.id <=> b.id;
  }
  friend bool operator==(const OrderKey& a, const OrderKey& b) = default;
};

struct HyperonymicChain {
  std::vector<std::string> synsets;  // s0 first, sink last
  std::size_t size() const noexcept { return synsets.size(); }
  friend bool operator==(const HyperonymicChain&, const HyperonymicChain&) = default;
};

enum class SensePolicy {
  most_frequent,    // maximal order key
  context_overlap,  // most context lemmas in the synset, ties by order key
};

/// Immutable WordNet graph (nouns and verbs) with a frequency-derived total order.
class Lexicon {
 public:
  Lexicon() = default;
  /// Validates pointers and acyclicity. `counts` maps synset ids to raw
  /// frequencies; missing synsets count 0.
  Lexicon(std::vector<Synset> synsets, const std::unordered_map<std::string, double>& counts);

  bool contains(std::string_view id) const;
  const Synset& synset(std::string_view id) const;
  const std::vector<Synset>& synsets() const noexcept { return synsets_; }
  std::size_t size() const noexcept { return synsets_.size(); }

  /// Synsets containing (lemma, pos), in index order. Empty when unknown.
  const std::vector<std::string>& senses(std::string_view lemma, WordPos pos) const;
  double raw_count(std::string_view id) const;
  OrderKey order_key(std::string_view id) const;
  /// Dense rank consistent with order_key (higher = more significant).
  std::size_t rank(std::string_view id) const;

  /// Installs the (lemma, pos) → synset index; ids must exist.
  void set_index(std::unordered_map<std::string, std::vector<std::string>> index);

  /// Synsets of the given POS without outgoing hypernym edges.
  std::vector<std::string> sinks(WordPos pos) const;

 private:
  std::size_t position(std::string_view id) const;

  std::vector<Synset> synsets_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<double> counts_;
  std::vector<std::size_t> rank_;
  std::unordered_map<std::string, std::vector<std::string>> lemma_index_;  // "lemma\tn"
};

/// Reads data.noun/data.verb/index.noun/index.verb from `wordnet_dir` and a
/// `SYNSET_ID<TAB>COUNT` frequency file (an empty path means no frequencies).
Lexicon load_lexicon(const std::filesystem::path& wordnet_dir, const std::filesystem::path& freq_file);

/// Parses the frequency file; accepts "00001740-n", "00001740n" and "1740n" ids.
std::unordered_map<std::string, double> load_frequencies(const std::filesystem::path& freq_file);

OrderKey total_order_key(const Lexicon& lexicon, std::string_view id);
HyperonymicChain msch(const Lexicon& lexicon, std::string_view id);

std::optional<std::string> disambiguate(const Lexicon& lexicon, std::string_view lemma, WordPos pos,
                                        const std::set<std::string>& context,
                                        SensePolicy policy = SensePolicy::most_frequent);

/// n-th order hyperonym of `lemma`, or `lemma` itself when none exists.
std::string hyperonymize_word(const Lexicon& lexicon, std::string_view lemma, WordPos pos,
                              const std::set<std::string>& context, std::size_t n,
                              SensePolicy policy = SensePolicy::most_frequent);

struct HyperonymizeOptions {
  SensePolicy policy = SensePolicy::most_frequent;
  bool nouns = true;
  bool verbs = true;
};

/// Maps every noun/verb item through hyperonymize_word and merges duplicates.
/// Order 0 is the identity and needs no lexicon.
PrunedTransaction hyperonymize_transaction(const Lexicon* lexicon, const PrunedTransaction& t, std::size_t n,
                                           const HyperonymizeOptions& options = {});
std::vector<PrunedTransaction> hyperonymize_corpus(const Lexicon* lexicon, const std::vector<PrunedTransaction>& pruned,
                                                   std::size_t n, const HyperonymizeOptions& options = {});

/// WordNet stores multiword lemmas with underscores and lowercase in the index.
std::string normalize_lemma(std::string_view lemma);

}  // namespace carclass
