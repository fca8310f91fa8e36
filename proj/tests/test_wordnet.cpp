#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "carclass/error.hpp"
#include "carclass/wordnet.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace carclass;

namespace {

const Lexicon& fixture() {
  static const Lexicon lex = load_lexicon(testing::data("wordnet"), testing::data("wordnet/freq.tsv"));
  return lex;
}

std::vector<std::string> chain_lemmas(const Lexicon& lex, const std::string& id) {
  std::vector<std::string> out;
  for (const auto& s : msch(lex, id).synsets) out.push_back(lex.synset(s).lemmas.front());
  return out;
}

Synset noun(std::string id, std::string lemma, std::vector<std::string> hyper = {}) {
  return {std::move(id), WordPos::noun, {std::move(lemma)}, std::move(hyper), {}};
}

PrunedTransaction tx(std::vector<Item> items) { return {std::move(items), "c"}; }

}  // namespace

TEST_CASE("fixture lexicon loads") {
  const Lexicon& lex = fixture();
  CHECK(lex.size() == 24);
  CHECK(lex.synset("02084071-n").lemmas == std::vector<std::string>{"dog", "domestic_dog", "Canis_familiaris"});
  CHECK(lex.synset("02084071-n").hypernyms == std::vector<std::string>{"02083346-n", "01317541-n"});
  CHECK(lex.synset("11083064-n").instance_hypernyms == std::vector<std::string>{"10560637-n"});
  CHECK(lex.raw_count("02083346-n") == 12);
  CHECK(lex.raw_count("10560637-n") == 0);
  CHECK(lex.sinks(WordPos::noun) == std::vector<std::string>{"00001740-n"});
  CHECK(lex.sinks(WordPos::verb).size() == 3);
}

TEST_CASE("order key is log(1+f) with id tiebreak") {
  const Lexicon& lex = fixture();
  CHECK(total_order_key(lex, "02083346-n").log_frequency == doctest::Approx(std::log(13.0)));
  // zero frequency floors at 0
  CHECK(total_order_key(lex, "10560637-n").log_frequency == 0.0);
  // equal frequencies (both 0) still differ
  CHECK(total_order_key(lex, "10560637-n") != total_order_key(lex, "11083064-n"));
  CHECK(total_order_key(lex, "10560637-n") < total_order_key(lex, "11083064-n"));
  CHECK(total_order_key(lex, "01317541-n") < total_order_key(lex, "02083346-n"));
  CHECK(lex.rank("01317541-n") < lex.rank("02083346-n"));
}

TEST_CASE("rank agrees with the order key on every pair") {
  const Lexicon& lex = fixture();
  for (const auto& a : lex.synsets())
    for (const auto& b : lex.synsets()) {
      const auto ka = total_order_key(lex, a.id), kb = total_order_key(lex, b.id);
      CHECK((ka < kb) == (lex.rank(a.id) < lex.rank(b.id)));
      CHECK((ka == kb) == (a.id == b.id));
    }
}

TEST_CASE("empty frequency file keeps the order total") {
  const auto dir = std::filesystem::temp_directory_path() / "carclass_wn_empty_freq";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "freq.tsv") << "";
  const Lexicon lex = load_lexicon(testing::data("wordnet"), dir / "freq.tsv");
  for (const auto& s : lex.synsets()) CHECK(lex.raw_count(s.id) == 0);
  CHECK(total_order_key(lex, "00001740-n") < total_order_key(lex, "00001930-n"));
}

TEST_CASE("frequency ids in several spellings") {
  const auto path = std::filesystem::temp_directory_path() / "carclass_freq_forms.tsv";
  std::ofstream(path) << "wnver::eOS9lXC6GvMWznF1wkZofDdtbBU\n# comment\n1740n\t5\n00001930n\t3\n00002684-n\t2\n1740n\t1\n2199590v\t4\n";
  const auto f = load_frequencies(path);
  CHECK(f.at("00001740-n") == 6);
  CHECK(f.at("00001930-n") == 3);
  CHECK(f.at("00002684-n") == 2);
  CHECK(f.at("02199590-v") == 4);
}

TEST_CASE("msch on the fixture") {
  const Lexicon& lex = fixture();
  SUBCASE("sink has a chain of length one") { CHECK(msch(lex, "00001740-n").synsets == std::vector<std::string>{"00001740-n"}); }
  SUBCASE("unique path") {
    CHECK(chain_lemmas(lex, "02075296-n") ==
          std::vector<std::string>{"carnivore", "animal", "organism", "object", "physical_entity", "entity"});
  }
  SUBCASE("two hypernyms: the more frequent one wins") {
    const auto c = msch(lex, "02084071-n");
    REQUIRE(c.size() > 1);
    CHECK(c.synsets[1] == "02083346-n");
  }
  SUBCASE("instance hypernyms are followed") {
    CHECK(chain_lemmas(lex, "11083064-n") ==
          std::vector<std::string>{"Einstein", "physicist", "person", "organism", "object", "physical_entity", "entity"});
  }
  SUBCASE("every noun chain ends at entity, every verb chain at a verb sink") {
    const auto verb_sinks = lex.sinks(WordPos::verb);
    for (const auto& s : lex.synsets()) {
      const auto c = msch(lex, s.id);
      CHECK(c.synsets.front() == s.id);
      if (s.pos == WordPos::noun) CHECK(c.synsets.back() == "00001740-n");
      else CHECK(std::find(verb_sinks.begin(), verb_sinks.end(), c.synsets.back()) != verb_sinks.end());
      CHECK(msch(lex, s.id) == c);
    }
  }
}

TEST_CASE("two-hypernym choice against both enumerated chains") {
  // a → {b (12), c (7)}, b → r, c → r
  std::vector<Synset> s{noun("00000001-n", "r"), noun("00000002-n", "b", {"00000001-n"}),
                        noun("00000003-n", "c", {"00000001-n"}), noun("00000004-n", "a", {"00000003-n", "00000002-n"})};
  const Lexicon lex(s, {{"00000002-n", 12}, {"00000003-n", 7}});
  // Enumerate every chain, keep the one whose second synset has the larger key.
  std::vector<std::vector<std::string>> chains;
  std::function<void(std::vector<std::string>)> walk = [&](std::vector<std::string> path) {
    const auto& hs = lex.synset(path.back()).hypernyms;
    if (hs.empty()) return chains.push_back(path);
    for (const auto& h : hs) {
      auto next = path;
      next.push_back(h);
      walk(next);
    }
  };
  walk({"00000004-n"});
  REQUIRE(chains.size() == 2);
  const std::map<std::string, double> freq{{"00000002-n", 12}, {"00000003-n", 7}};
  auto second_key = [&](const std::vector<std::string>& c) { return std::log1p(freq.at(c[1])); };
  const auto& best = second_key(chains[0]) > second_key(chains[1]) ? chains[0] : chains[1];
  CHECK(msch(lex, "00000004-n").synsets == best);
  CHECK(best[1] == "00000002-n");
}

TEST_CASE("lexicon rejects cycles and dangling pointers") {
  CHECK_THROWS_AS(Lexicon({noun("00000001-n", "a", {"00000002-n"}), noun("00000002-n", "b", {"00000001-n"})}, {}),
                  SchemaError);
  CHECK_THROWS_AS(Lexicon({noun("00000001-n", "a", {"00000009-n"})}, {}), SchemaError);
  CHECK_THROWS_AS(Lexicon({noun("00000001-n", "a"), noun("00000001-n", "b")}, {}), SchemaError);
}

TEST_CASE("disambiguation") {
  const Lexicon& lex = fixture();
  CHECK(disambiguate(lex, "poodle", WordPos::noun, {}) == "02113335-n");
  CHECK(disambiguate(lex, "poodle", WordPos::noun, {"frump"}) == "02113335-n");
  CHECK_FALSE(disambiguate(lex, "zyzzyva", WordPos::noun, {}).has_value());
  CHECK_FALSE(disambiguate(lex, "poodle", WordPos::verb, {}).has_value());
  // index lists the river bank first; frequency 30 beats 5
  CHECK(lex.senses("bank", WordPos::noun).front() == "09213565-n");
  CHECK(disambiguate(lex, "bank", WordPos::noun, {}) == "08420278-n");
  CHECK(disambiguate(lex, "dog", WordPos::noun, {}) == "02084071-n");
  // context overlap can override frequency
  CHECK(disambiguate(lex, "dog", WordPos::noun, {"frump"}, SensePolicy::context_overlap) == "10114209-n");
  CHECK(disambiguate(lex, "dog", WordPos::noun, {"frump"}, SensePolicy::most_frequent) == "02084071-n");
}

TEST_CASE("hyperonymize_word") {
  const Lexicon& lex = fixture();
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 1) == "dog");
  CHECK(hyperonymize_word(lex, "poodle", WordPos::noun, {}, 1) == "dog");
  CHECK(hyperonymize_word(lex, "dog", WordPos::noun, {}, 1) == "canid");
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 2) == "canid");
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 0) == "dalmatian");
  CHECK(hyperonymize_word(lex, "zyzzyva", WordPos::noun, {}, 3) == "zyzzyva");
  // chain has 9 synsets: orders 1..8 exist, 9 and beyond fall back
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 8) == "entity");
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 9) == "dalmatian");
  CHECK(hyperonymize_word(lex, "dalmatian", WordPos::noun, {}, 50) == "dalmatian");
  CHECK(hyperonymize_word(lex, "give", WordPos::verb, {}, 1) == "transfer");
  CHECK(hyperonymize_word(lex, "entity", WordPos::noun, {}, 1) == "entity");
}

TEST_CASE("hyperonymize_transaction merges and preserves order") {
  const Lexicon& lex = fixture();
  const auto t = tx({{"dalmatian", "NN"}, {"poodle", "NNS"}, {"give", "VVD"}, {"the", "DT"}});
  const auto h = hyperonymize_transaction(&lex, t, 1);
  CHECK(h.itemset() == Itemset{"dog", "transfer", "the"});
  CHECK(h.items.front().lemma == "dog");
  CHECK(h.class_label == "c");

  CHECK(hyperonymize_transaction(&lex, t, 0) == t);
  CHECK(hyperonymize_transaction(nullptr, t, 0) == t);
  CHECK_THROWS_AS(hyperonymize_transaction(nullptr, t, 1), ConfigError);

  HyperonymizeOptions nouns_only;
  nouns_only.verbs = false;
  CHECK(hyperonymize_transaction(&lex, t, 1, nouns_only).itemset() == Itemset{"dog", "give", "the"});

  const auto absent = tx({{"zyzzyva", "NN"}, {"frobnicate", "VV"}});
  for (std::size_t n = 0; n < 15; ++n) CHECK(hyperonymize_transaction(&lex, absent, n) == absent);
}

TEST_CASE("lemma normalization") {
  CHECK(normalize_lemma("Canis familiaris") == "canis_familiaris");
  const Lexicon& lex = fixture();
  CHECK(hyperonymize_word(lex, "Dalmatian", WordPos::noun, {}, 1) == "dog");
}

TEST_CASE("pos tags") {
  CHECK(word_pos_from_tag("NNS") == WordPos::noun);
  CHECK(word_pos_from_tag("NP") == WordPos::noun);
  CHECK(word_pos_from_tag("VVD") == WordPos::verb);
  CHECK_FALSE(word_pos_from_tag("DT").has_value());
  CHECK_FALSE(word_pos_from_tag("").has_value());
}
