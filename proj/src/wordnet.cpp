#include "carclass/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "carclass/error.hpp"
#include "text_util.hpp"

namespace carclass {

char pos_letter(WordPos pos) noexcept { return pos == WordPos::noun ? 'n' : 'v'; }

std::optional<WordPos> word_pos_from_tag(std::string_view tag) noexcept {
  if (tag.starts_with('N')) return WordPos::noun;
  if (tag.starts_with('V')) return WordPos::verb;
  return std::nullopt;
}

std::string normalize_lemma(std::string_view lemma) {
  std::string out(lemma);
  for (char& c : out) {
    if (c == ' ') c = '_';
    else if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

std::string index_key(std::string_view lemma, WordPos pos) {
  std::string k = normalize_lemma(lemma);
  k += '\t';
  k += pos_letter(pos);
  return k;
}

const std::vector<std::string> kNoSenses;

// Canonical "%08d-x" id from "00001740-n", "00001740n" or "1740n".
std::optional<std::string> canonical_id(std::string_view raw) {
  if (raw.size() < 2) return std::nullopt;
  char pos = raw.back();
  std::string_view digits = raw.substr(0, raw.size() - 1);
  if (!digits.empty() && digits.back() == '-') digits.remove_suffix(1);
  if (digits.empty() || digits.size() > 8) return std::nullopt;
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return std::nullopt;
  if (pos != 'n' && pos != 'v' && pos != 'a' && pos != 'r' && pos != 's') return std::nullopt;
  std::string id(8 - digits.size(), '0');
  id += digits;
  id += '-';
  id += pos;
  return id;
}

std::size_t parse_number(std::string_view f, int base, std::size_t line, const std::string& file) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v, base);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw ParseError(line, file + ": invalid number '" + std::string(f) + "'");
  return v;
}

void read_data_file(const std::filesystem::path& path, WordPos pos, std::vector<Synset>& out) {
  std::ifstream in(path);
  if (!in) throw Error("missing WordNet data file " + path.string());
  const std::string file = path.filename().string();
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty() || raw.front() == ' ') continue;  // license header
    std::string_view line = raw;
    if (auto bar = line.find(" | "); bar != std::string_view::npos) line = line.substr(0, bar);
    auto f = detail::split_ws(line);
    if (f.size() < 6) throw ParseError(lineno, file + ": truncated synset record");
    Synset s;
    s.id = std::string(f[0]) + '-' + pos_letter(pos);
    s.pos = pos;
    std::size_t i = 3;
    const std::size_t words = parse_number(f[i++], 16, lineno, file);
    if (f.size() < i + 2 * words + 1) throw ParseError(lineno, file + ": truncated word list");
    for (std::size_t w = 0; w < words; ++w, i += 2) s.lemmas.emplace_back(f[i]);
    const std::size_t pointers = parse_number(f[i++], 10, lineno, file);
    if (f.size() < i + 4 * pointers) throw ParseError(lineno, file + ": truncated pointer list");
    for (std::size_t p = 0; p < pointers; ++p, i += 4) {
      const std::string_view symbol = f[i];
      if (symbol != "@" && symbol != "@i") continue;
      auto target = canonical_id(std::string(f[i + 1]) + std::string(f[i + 2]));
      if (!target) throw ParseError(lineno, file + ": bad pointer target");
      (symbol == "@" ? s.hypernyms : s.instance_hypernyms).push_back(*target);
    }
    if (s.lemmas.empty()) throw ParseError(lineno, file + ": synset without words");
    out.push_back(std::move(s));
  }
}

void read_index_file(const std::filesystem::path& path, WordPos pos,
                     std::unordered_map<std::string, std::vector<std::string>>& index) {
  std::ifstream in(path);
  if (!in) throw Error("missing WordNet index file " + path.string());
  const std::string file = path.filename().string();
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty() || raw.front() == ' ') continue;
    auto f = detail::split_ws(raw);
    if (f.size() < 4) throw ParseError(lineno, file + ": truncated index record");
    const std::size_t synsets = parse_number(f[2], 10, lineno, file);
    const std::size_t pointers = parse_number(f[3], 10, lineno, file);
    const std::size_t first = 4 + pointers + 2;
    if (f.size() < first + synsets) throw ParseError(lineno, file + ": truncated offset list");
    auto& ids = index[index_key(f[0], pos)];
    for (std::size_t k = 0; k < synsets; ++k) ids.push_back(std::string(f[first + k]) + '-' + pos_letter(pos));
  }
}

}  // namespace

Lexicon::Lexicon(std::vector<Synset> synsets, const std::unordered_map<std::string, double>& counts)
    : synsets_(std::move(synsets)) {
  for (std::size_t i = 0; i < synsets_.size(); ++i) {
    if (synsets_[i].lemmas.empty()) throw SchemaError("synset " + synsets_[i].id + " has no lemmas");
    if (!by_id_.emplace(synsets_[i].id, i).second) throw SchemaError("duplicate synset id " + synsets_[i].id);
  }
  for (const Synset& s : synsets_) {
    for (const auto* edges : {&s.hypernyms, &s.instance_hypernyms})
      for (const std::string& h : *edges)
        if (!by_id_.contains(h)) throw SchemaError("synset " + s.id + " points to unknown hypernym " + h);
  }

  // Iterative three-colour DFS over hypernym edges.
  std::vector<int> colour(synsets_.size(), 0);
  for (std::size_t start = 0; start < synsets_.size(); ++start) {
    if (colour[start] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const Synset& s = synsets_[node];
      const std::size_t degree = s.hypernyms.size() + s.instance_hypernyms.size();
      if (next == degree) {
        colour[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& target =
          next < s.hypernyms.size() ? s.hypernyms[next] : s.instance_hypernyms[next - s.hypernyms.size()];
      ++next;
      const std::size_t t = by_id_.at(target);
      if (colour[t] == 1) throw SchemaError("hypernym cycle through synset " + target);
      if (colour[t] == 0) {
        colour[t] = 1;
        stack.emplace_back(t, 0);
      }
    }
  }

  counts_.assign(synsets_.size(), 0.0);
  for (const auto& [id, c] : counts)
    if (auto it = by_id_.find(id); it != by_id_.end()) counts_[it->second] = c;

  std::vector<std::size_t> order(synsets_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<OrderKey> keys;
  keys.reserve(synsets_.size());
  for (std::size_t i = 0; i < synsets_.size(); ++i) keys.push_back({std::log1p(counts_[i]), synsets_[i].id});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  rank_.assign(synsets_.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
}

std::size_t Lexicon::position(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) throw DomainError("unknown synset " + std::string(id));
  return it->second;
}

bool Lexicon::contains(std::string_view id) const { return by_id_.contains(std::string(id)); }
const Synset& Lexicon::synset(std::string_view id) const { return synsets_[position(id)]; }
double Lexicon::raw_count(std::string_view id) const { return counts_[position(id)]; }
std::size_t Lexicon::rank(std::string_view id) const { return rank_[position(id)]; }

OrderKey Lexicon::order_key(std::string_view id) const {
  const std::size_t i = position(id);
  return {std::log1p(counts_[i]), synsets_[i].id};
}

const std::vector<std::string>& Lexicon::senses(std::string_view lemma, WordPos pos) const {
  auto it = lemma_index_.find(index_key(lemma, pos));
  return it == lemma_index_.end() ? kNoSenses : it->second;
}

void Lexicon::set_index(std::unordered_map<std::string, std::vector<std::string>> index) {
  for (const auto& [key, ids] : index)
    for (const std::string& id : ids)
      if (!contains(id)) throw SchemaError("index entry '" + key.substr(0, key.find('\t')) + "' points to unknown synset " + id);
  lemma_index_ = std::move(index);
}

std::vector<std::string> Lexicon::sinks(WordPos pos) const {
  std::vector<std::string> out;
  for (const Synset& s : synsets_)
    if (s.pos == pos && s.hypernyms.empty() && s.instance_hypernyms.empty()) out.push_back(s.id);
  return out;
}

std::unordered_map<std::string, double> load_frequencies(const std::filesystem::path& freq_file) {
  std::unordered_map<std::string, double> counts;
  if (freq_file.empty()) return counts;
  std::ifstream in(freq_file);
  if (!in) throw Error("missing frequency file " + freq_file.string());
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto f = detail::split_ws(raw);
    if (f.empty() || f[0].starts_with('#') || f[0].starts_with("wnver")) continue;
    if (f.size() < 2) throw ParseError(lineno, "frequency file: expected SYNSET_ID and COUNT");
    auto id = canonical_id(f[0]);
    if (!id) throw ParseError(lineno, "frequency file: bad synset id '" + std::string(f[0]) + "'");
    double count = 0.0;
    try {
      std::size_t used = 0;
      count = std::stod(std::string(f[1]), &used);
      if (used != f[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(lineno, "frequency file: bad count '" + std::string(f[1]) + "'");
    }
    if (!(count >= 0.0)) throw ParseError(lineno, "frequency file: negative count");
    counts[*id] += count;
  }
  return counts;
}

Lexicon load_lexicon(const std::filesystem::path& wordnet_dir, const std::filesystem::path& freq_file) {
  std::vector<Synset> synsets;
  read_data_file(wordnet_dir / "data.noun", WordPos::noun, synsets);
  read_data_file(wordnet_dir / "data.verb", WordPos::verb, synsets);
  std::unordered_map<std::string, std::vector<std::string>> index;
  read_index_file(wordnet_dir / "index.noun", WordPos::noun, index);
  read_index_file(wordnet_dir / "index.verb", WordPos::verb, index);
  Lexicon lexicon(std::move(synsets), load_frequencies(freq_file));
  lexicon.set_index(std::move(index));
  return lexicon;
}

OrderKey total_order_key(const Lexicon& lexicon, std::string_view id) { return lexicon.order_key(id); }

HyperonymicChain msch(const Lexicon& lexicon, std::string_view id) {
  HyperonymicChain chain;
  const Synset* cur = &lexicon.synset(id);
  chain.synsets.push_back(cur->id);
  while (true) {
    const std::string* best = nullptr;
    std::size_t best_rank = 0;
    for (const auto* edges : {&cur->hypernyms, &cur->instance_hypernyms}) {
      for (const std::string& h : *edges) {
        const std::size_t r = lexicon.rank(h);
        if (best == nullptr || r > best_rank) {
          best = &h;
          best_rank = r;
        }
      }
    }
    if (best == nullptr) break;
    cur = &lexicon.synset(*best);
    chain.synsets.push_back(cur->id);
  }
  return chain;
}

std::optional<std::string> disambiguate(const Lexicon& lexicon, std::string_view lemma, WordPos pos,
                                        const std::set<std::string>& context, SensePolicy policy) {
  const auto& candidates = lexicon.senses(lemma, pos);
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1) return candidates.front();

  std::set<std::string> normalized_context;
  if (policy == SensePolicy::context_overlap)
    for (const std::string& c : context) normalized_context.insert(normalize_lemma(c));

  auto overlap = [&](const std::string& id) {
    std::size_t n = 0;
    for (const std::string& l : lexicon.synset(id).lemmas) n += normalized_context.count(normalize_lemma(l));
    return n;
  };

  const std::string* best = &candidates.front();
  std::size_t best_overlap = policy == SensePolicy::context_overlap ? overlap(*best) : 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const std::string& id = candidates[i];
    const std::size_t o = policy == SensePolicy::context_overlap ? overlap(id) : 0;
    if (o > best_overlap || (o == best_overlap && lexicon.rank(id) > lexicon.rank(*best))) {
      best = &id;
      best_overlap = o;
    }
  }
  return *best;
}

std::string hyperonymize_word(const Lexicon& lexicon, std::string_view lemma, WordPos pos,
                              const std::set<std::string>& context, std::size_t n, SensePolicy policy) {
  if (n == 0) return std::string(lemma);
  auto sense = disambiguate(lexicon, lemma, pos, context, policy);
  if (!sense) return std::string(lemma);
  const HyperonymicChain chain = msch(lexicon, *sense);
  if (chain.size() <= n) return std::string(lemma);
  return lexicon.synset(chain.synsets[n]).lemmas.front();
}

PrunedTransaction hyperonymize_transaction(const Lexicon* lexicon, const PrunedTransaction& t, std::size_t n,
                                           const HyperonymizeOptions& options) {
  if (n == 0) return t;
  if (lexicon == nullptr) throw ConfigError("hyperonymic order > 0 requires a lexicon");
  std::set<std::string> context;
  for (const Item& i : t.items) context.insert(i.lemma);

  PrunedTransaction out;
  out.class_label = t.class_label;
  for (const Item& item : t.items) {
    Item mapped = item;
    if (auto pos = word_pos_from_tag(item.pos);
        pos && ((*pos == WordPos::noun && options.nouns) || (*pos == WordPos::verb && options.verbs)))
      mapped.lemma = hyperonymize_word(*lexicon, item.lemma, *pos, context, n, options.policy);
    auto same = [&](const Item& o) { return o.lemma == mapped.lemma; };
    if (std::none_of(out.items.begin(), out.items.end(), same)) out.items.push_back(std::move(mapped));
  }
  return out;
}

std::vector<PrunedTransaction> hyperonymize_corpus(const Lexicon* lexicon, const std::vector<PrunedTransaction>& pruned,
                                                   std::size_t n, const HyperonymizeOptions& options) {
  if (n == 0) return pruned;
  std::vector<PrunedTransaction> out;
  out.reserve(pruned.size());
  for (const PrunedTransaction& t : pruned) out.push_back(hyperonymize_transaction(lexicon, t, n, options));
  return out;
}

}  // namespace carclass
