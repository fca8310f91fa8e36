#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace carclass {

/// Sorted, duplicate-free set of items (lemmas).
class Itemset {
 public:
  Itemset() = default;
  Itemset(std::initializer_list<std::string> items) : Itemset(std::vector<std::string>(items)) {}
  explicit Itemset(std::vector<std::string> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  const std::vector<std::string>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  bool contains(const std::string& item) const { return std::binary_search(items_.begin(), items_.end(), item); }
  /// this ⊆ other
  bool subset_of(const Itemset& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }

  friend bool operator==(const Itemset&, const Itemset&) = default;
  friend auto operator<=>(const Itemset& a, const Itemset& b) { return a.items_ <=> b.items_; }

 private:
  std::vector<std::string> items_;
};

/// A pruned word: the lemma is the item, the POS tag travels as metadata.
struct Item {
  std::string lemma;
  std::string pos;
  friend bool operator==(const Item&, const Item&) = default;
};

/// Pruner output: items unique by lemma, in order of first selection.
struct PrunedTransaction {
  std::vector<Item> items;
  std::string class_label;

  Itemset itemset() const {
    std::vector<std::string> lemmas;
    lemmas.reserve(items.size());
    for (const Item& i : items) lemmas.push_back(i.lemma);
    return Itemset(std::move(lemmas));
  }
  friend bool operator==(const PrunedTransaction&, const PrunedTransaction&) = default;
};

}  // namespace carclass
