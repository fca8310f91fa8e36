#include "carclass/mining.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "carclass/error.hpp"

namespace carclass {

bool rule_before(const CAR& a, const CAR& b) {
  if (auto c = a.confidence_ratio() <=> b.confidence_ratio(); c != 0) return c > 0;
  if (auto c = a.support_ratio() <=> b.support_ratio(); c != 0) return c > 0;
  if (auto c = a.itemset <=> b.itemset; c != 0) return c < 0;
  return a.class_label < b.class_label;
}

void sort_rules(std::vector<CAR>& rules) { std::sort(rules.begin(), rules.end(), rule_before); }

bool meets_threshold(std::uint64_t num, std::uint64_t den, double threshold) {
  return static_cast<double>(num) / static_cast<double>(den) >= threshold;
}

Ratio support_ratio(const Itemset& itemset, const std::vector<Transaction>& db) {
  if (db.empty()) throw DomainError("support over an empty transaction database");
  const auto n = std::count_if(db.begin(), db.end(), [&](const Transaction& t) { return itemset.subset_of(t.itemset); });
  return {static_cast<std::uint64_t>(n), db.size()};
}

double support(const Itemset& itemset, const std::vector<Transaction>& db) { return support_ratio(itemset, db).value(); }

Ratio confidence_ratio(const Itemset& itemset, const std::string& class_label, const std::vector<Transaction>& db) {
  std::uint64_t covering = 0;
  std::uint64_t hits = 0;
  for (const Transaction& t : db) {
    if (!itemset.subset_of(t.itemset)) continue;
    ++covering;
    if (t.class_label == class_label) ++hits;
  }
  if (covering == 0) throw DomainError("confidence undefined: no transaction contains the itemset");
  return {hits, covering};
}

double confidence(const Itemset& itemset, const std::string& class_label, const std::vector<Transaction>& db) {
  return confidence_ratio(itemset, class_label, db).value();
}

namespace {

using ItemId = std::uint32_t;
using TidList = std::vector<std::uint32_t>;

struct Frequent {
  std::vector<ItemId> items;
  TidList tids;
};

TidList intersect(const TidList& a, const TidList& b) {
  TidList out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct VectorHash {
  std::size_t operator()(const std::vector<ItemId>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (ItemId x : v) h = (h ^ x) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace

std::vector<CAR> apriori(const std::vector<Transaction>& db, const MiningParams& params) {
  if (db.empty()) throw DomainError("apriori over an empty transaction database");
  if (!(params.min_support >= 0.0 && params.min_support <= 1.0) ||
      !(params.min_confidence >= 0.0 && params.min_confidence <= 1.0))
    throw ConfigError("minimum support and confidence must lie in [0, 1]");

  // Item ids follow lexicographic order, so id vectors sort like Itemsets.
  std::map<std::string, ItemId> item_ids;
  std::map<std::string, std::uint32_t> class_ids;
  for (const Transaction& t : db) {
    for (const std::string& i : t.itemset) item_ids.emplace(i, 0);
    class_ids.emplace(t.class_label, 0);
  }
  std::vector<std::string> item_names;
  for (auto& [name, id] : item_ids) {
    id = static_cast<ItemId>(item_names.size());
    item_names.push_back(name);
  }
  std::vector<std::string> class_names;
  for (auto& [name, id] : class_ids) {
    id = static_cast<std::uint32_t>(class_names.size());
    class_names.push_back(name);
  }
  std::vector<std::uint32_t> tx_class(db.size());
  std::vector<TidList> item_tids(item_names.size());
  for (std::uint32_t tid = 0; tid < db.size(); ++tid) {
    tx_class[tid] = class_ids.at(db[tid].class_label);
    for (const std::string& i : db[tid].itemset) item_tids[item_ids.at(i)].push_back(tid);
  }

  const std::uint64_t n = db.size();
  auto frequent = [&](const TidList& tids) { return !tids.empty() && meets_threshold(tids.size(), n, params.min_support); };

  std::vector<CAR> rules;
  std::vector<std::uint64_t> per_class(class_names.size());
  auto emit_rules = [&](const Frequent& f) {
    std::fill(per_class.begin(), per_class.end(), 0);
    for (std::uint32_t tid : f.tids) ++per_class[tx_class[tid]];
    std::vector<std::string> names;
    names.reserve(f.items.size());
    for (ItemId id : f.items) names.push_back(item_names[id]);
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      if (per_class[c] == 0 || !meets_threshold(per_class[c], f.tids.size(), params.min_confidence)) continue;
      rules.push_back({Itemset(names), class_names[c], per_class[c], f.tids.size(), n});
    }
  };

  std::vector<Frequent> level;
  for (ItemId id = 0; id < item_names.size(); ++id)
    if (frequent(item_tids[id])) level.push_back({{id}, std::move(item_tids[id])});

  for (std::size_t k = 1; !level.empty(); ++k) {
    for (const Frequent& f : level) emit_rules(f);
    if (k >= params.max_itemset_size) break;

    std::unordered_map<std::vector<ItemId>, std::size_t, VectorHash> lookup;
    for (std::size_t i = 0; i < level.size(); ++i) lookup.emplace(level[i].items, i);

    std::vector<Frequent> next;
    // `level` is sorted lexicographically, so itemsets sharing a (k-1)-prefix are contiguous.
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        const auto& a = level[i].items;
        const auto& b = level[j].items;
        if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
        std::vector<ItemId> cand = a;
        cand.push_back(b.back());
        // Anti-monotone prune: every k-subset must itself be frequent.
        bool all_frequent = true;
        std::vector<ItemId> sub;
        for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
          sub.assign(cand.begin(), cand.end());
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          all_frequent = lookup.contains(sub);
        }
        if (!all_frequent) continue;
        TidList tids = intersect(level[i].tids, level[j].tids);
        if (frequent(tids)) next.push_back({std::move(cand), std::move(tids)});
      }
    }
    level = std::move(next);
  }

  sort_rules(rules);
  return rules;
}

std::vector<Transaction> to_transactions(const std::vector<PrunedTransaction>& pruned) {
  std::vector<Transaction> out;
  out.reserve(pruned.size());
  for (const PrunedTransaction& p : pruned)
    if (!p.items.empty()) out.push_back({p.itemset(), p.class_label});
  return out;
}

SentenceEncoder::SentenceEncoder(const TrainOptions& options, const std::vector<LabeledSentence>& training)
    : options_(options), pruner_(options.strategy, training) {
  if (options_.hyper_n > 0 && options_.lexicon == nullptr)
    throw ConfigError("hyperonymic order > 0 requires a lexicon");
}

PrunedTransaction SentenceEncoder::encode(const Sentence& s, const std::string& class_label) const {
  PrunedTransaction t{pruner_.prune(s), class_label};
  return hyperonymize_transaction(options_.lexicon, t, options_.hyper_n, options_.hyperonymize);
}

EncodedCorpus SentenceEncoder::encode_all(const std::vector<LabeledSentence>& sentences) const {
  EncodedCorpus out;
  out.pruned.reserve(sentences.size());
  for (const LabeledSentence& ls : sentences) out.pruned.push_back(encode(*ls.sentence, ls.class_label));
  out.transactions = to_transactions(out.pruned);
  return out;
}

std::vector<CAR> train(const std::vector<LabeledSentence>& sentences, const MiningParams& params,
                       const TrainOptions& options) {
  const SentenceEncoder encoder(options, sentences);
  const EncodedCorpus encoded = encoder.encode_all(sentences);
  if (encoded.transactions.empty()) return {};
  return apriori(encoded.transactions, params);
}

std::vector<CAR> train(const Corpus& corpus, const MiningParams& params, const TrainOptions& options) {
  return train(forgetful(corpus), params, options);
}

}  // namespace carclass
