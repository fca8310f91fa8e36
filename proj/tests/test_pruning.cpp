#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "carclass/error.hpp"
#include "carclass/pruning.hpp"
#include "carclass/synthetic.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace carclass;

namespace {

std::vector<std::string> lemmas(const std::vector<Item>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(i.lemma);
  return out;
}

// Four flat sentences: every token hangs off the first one.
Corpus four_sentences() {
  const std::vector<std::vector<std::string>> words{
      {"x", "x", "y", "z"}, {"y", "z", "w"}, {"z", "w", "w", "v"}, {"z", "u", "y"}};
  std::string text = "# newdoc id = d\n# class = C\n";
  for (std::size_t s = 0; s < words.size(); ++s) {
    text += "# sent_id = s" + std::to_string(s + 1) + "\n";
    for (std::size_t i = 0; i < words[s].size(); ++i)
      text += std::to_string(i + 1) + "\t" + words[s][i] + "\t" + words[s][i] + "\tNN\t" + (i == 0 ? "0" : "1") +
              "\t" + (i == 0 ? "root" : "dep") + "\n";
    text += "\n";
  }
  return parse_corpus_string(text);
}

std::vector<const Sentence*> pointers(const Corpus& c) {
  std::vector<const Sentence*> out;
  for (const auto& d : c.documents())
    for (const auto& s : d.sentences) out.push_back(&s);
  return out;
}

}  // namespace

TEST_CASE("dependency pruning on the john sentence") {
  const Corpus c = parse_corpus(testing::data("john.conllu"));
  const Sentence& s = testing::only_sentence(c);
  CHECK(lemmas(select_dependency(s, Constraint::head_only())) == std::vector<std::string>{"give"});
  CHECK(lemmas(select_dependency(s, Constraint::nsubj_of_head())) == std::vector<std::string>{"John"});
  CHECK(lemmas(select_dependency(s, Constraint::nouns_dist1())) == std::vector<std::string>{"John", "Mary", "apple"});
  CHECK(select_dependency(s, Constraint::ccomp_of_head()).empty());
  CHECK(select_dependency(s, Constraint::verbs_dist1()).empty());
  // "an" depends on "apple", not on the root
  CHECK(lemmas(select_dependency(s, Constraint::custom({"det"}, std::nullopt, false))).empty());
  CHECK(lemmas(select_dependency(s, Constraint::custom({"nsubj", "dobj"}, std::nullopt, true))) ==
        std::vector<std::string>{"John", "give", "apple"});
  // a POS prefix filters the root as well
  CHECK(lemmas(select_dependency(s, Constraint::custom({}, std::string("N"), true))) ==
        std::vector<std::string>{"John", "Mary", "apple"});
  CHECK(select_dependency(s, Constraint::head_only()).front().pos == "VVZ");
}

TEST_CASE("custom constraint must select something") {
  CHECK_THROWS_AS(Constraint::custom({}, std::nullopt, false), ConfigError);
  CHECK_THROWS_AS(Constraint::custom({}, std::string(""), false), ConfigError);
}

TEST_CASE("strategy strings round-trip") {
  for (const char* text : {"tfidf:N=1", "tfidf:N=13", "dep:I0", "dep:I1", "dep:I1'", "dep:I2", "dep:I2'",
                           "dep:custom(labels=dobj|nsubj,pos=N,head=true)", "dep:custom(labels=,pos=V,head=false)"}) {
    const PruneStrategy s = parse_strategy(text);
    CHECK(to_string(s) == text);
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(to_string(parse_strategy("dep:custom(head=true, labels=nsubj)")) == "dep:custom(labels=nsubj,pos=,head=true)");
  for (const char* bad : {"", "tfidf", "tfidf:N=0", "tfidf:N=-2", "tfidf:N=x", "dep:I3", "dep:custom()",
                          "dep:custom(color=red)", "dep:custom(head=maybe)", "bag"})
    CHECK_THROWS_AS(parse_strategy(bad), ConfigError);
}

TEST_CASE("constraint warnings flag unknown labels only") {
  CHECK(constraint_warnings(Constraint::nsubj_of_head()).empty());
  CHECK(constraint_warnings(Constraint::custom({"prep_of", "conj_and", "dobj"}, std::nullopt, false)).empty());
  CHECK(constraint_warnings(Constraint::custom({"subject", "dobj"}, std::nullopt, false)).size() == 1);
}

TEST_CASE("tfidf scores") {
  const Corpus c = four_sentences();
  const auto ss = pointers(c);
  // x occurs twice in s1 and nowhere else
  CHECK(tfidf_score(ss, *ss[0], "x") == doctest::Approx(2 * std::log(4.0)).epsilon(1e-15));
  CHECK(tfidf_score(ss, *ss[0], "z") == 0.0);  // in every sentence
  // y and w both once in their sentence; y in 3 sentences, w in 2 → w scores higher in s2
  CHECK(tfidf_score(ss, *ss[1], "w") > tfidf_score(ss, *ss[1], "y"));
  CHECK_THROWS_AS(tfidf_score(ss, *ss[0], "w"), DomainError);
  const SentenceFrequencies table(ss);
  CHECK(table.sentence_count() == 4);
  CHECK(table.frequency("z") == 4);
  CHECK(table.frequency("nothing") == 0);
}

TEST_CASE("tfidf selection matches a full sort") {
  const Corpus c = four_sentences();
  const auto ss = pointers(c);
  const SentenceFrequencies table(ss);
  for (const Sentence* s : ss) {
    // oracle: hand-counted tf and df, stable sort on (-score, first position)
    std::map<std::string, int> tf, first;
    for (std::size_t i = 0; i < s->tokens.size(); ++i) {
      ++tf[s->tokens[i].lemma];
      first.emplace(s->tokens[i].lemma, static_cast<int>(i));
    }
    std::vector<std::pair<double, std::string>> scored;
    for (const auto& [lemma, f] : tf) {
      int df = 0;
      for (const Sentence* o : ss)
        df += std::any_of(o->tokens.begin(), o->tokens.end(), [&](const Token& t) { return t.lemma == lemma; });
      scored.push_back({f * std::log(4.0 / df), lemma});
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return first[a.second] < first[b.second];
    });
    for (std::size_t n = 1; n <= 5; ++n) {
      std::vector<std::string> expect;
      for (std::size_t k = 0; k < std::min(n, scored.size()); ++k) expect.push_back(scored[k].second);
      CHECK(lemmas(select_tfidf(table, *s, n)) == expect);
    }
  }
  // n beyond length keeps every distinct lemma
  CHECK(select_tfidf(table, *ss[2], 99).size() == 3);
}

TEST_CASE("tfidf ties resolve to the earlier position") {
  const Corpus c = parse_corpus_string(
      "# newdoc id = d\n# class = C\n# sent_id = a\n1\tp\tp\tNN\t0\troot\n2\tq\tq\tNN\t1\tdep\n\n"
      "# sent_id = b\n1\tr\tr\tNN\t0\troot\n");
  const SentenceFrequencies table(pointers(c));
  CHECK(lemmas(select_tfidf(table, c.documents()[0].sentences[0], 1)) == std::vector<std::string>{"p"});
}

TEST_CASE("unseen lemmas score zero at classification time") {
  const Corpus train = four_sentences();
  const SentenceFrequencies table(pointers(train));
  const Corpus doc = parse_corpus_string("# newdoc id = e\n# sent_id = e1\n1\tnew\tnew\tNN\t0\troot\n2\tx\tx\tNN\t1\tdep\n",
                                         {false});
  const Sentence& s = testing::only_sentence(doc);
  CHECK(table.score(s, "new") == 0.0);
  CHECK(lemmas(select_tfidf(table, s, 1)) == std::vector<std::string>{"x"});
}

TEST_CASE("average transaction size") {
  CHECK(average_transaction_size(std::vector<Itemset>{{"a"}, {"b"}, {"c"}}) == 1.0);
  CHECK(average_transaction_size(std::vector<Itemset>{{"a"}, {"b"}, {"c"}, {"d"}, {"e", "f"}}) == doctest::Approx(1.2));
  CHECK(average_transaction_size(std::vector<Itemset>{{"a"}, {}, {"b", "c"}, {}}) == 1.5);
  CHECK_THROWS_AS(average_transaction_size(std::vector<Itemset>{{}, {}}), DomainError);
  CHECK_THROWS_AS(average_transaction_size(std::vector<Itemset>{}), DomainError);
}

TEST_CASE("tfidf N=1 keeps single-word transactions") {
  const Corpus c = make_synthetic_corpus({.documents = 40});
  const auto pruned = prune_tfidf(forgetful(c), 1);
  CHECK(pruned.size() == c.sentence_count());
  CHECK(average_transaction_size(pruned) == 1.0);
}

TEST_CASE("prune_dependency yields one transaction per sentence") {
  const Corpus c = parse_corpus(testing::data("coverage.conllu"));
  const auto pruned = prune_dependency(forgetful(c), Constraint::nsubj_of_head());
  REQUIRE(pruned.size() == 5);
  CHECK(pruned[2].items.empty());
  CHECK(pruned[3].class_label == "Y");
  CHECK(average_transaction_size(pruned) == 1.0);
  CHECK(constraint_coverage(forgetful(c), Constraint::nsubj_of_head()) == doctest::Approx(0.8));
  CHECK(constraint_coverage(forgetful(c), Constraint::head_only()) == 1.0);
}

TEST_CASE("pruned items are a subset of the sentence lemmas and unique") {
  const Corpus c = make_synthetic_corpus({.documents = 60});
  const auto sentences = forgetful(c);
  std::vector<PruneStrategy> strategies{TfidfStrategy{1}, TfidfStrategy{3}, parse_strategy("dep:I0"),
                                        parse_strategy("dep:I1"), parse_strategy("dep:I2"), parse_strategy("dep:I2'")};
  for (const auto& strategy : strategies) {
    const Pruner p(strategy, sentences);
    for (const auto& ls : sentences) {
      const auto items = p.prune(*ls.sentence);
      std::set<std::string> seen;
      for (const auto& i : items) {
        CHECK(seen.insert(i.lemma).second);
        CHECK(std::any_of(ls.sentence->tokens.begin(), ls.sentence->tokens.end(),
                          [&](const Token& t) { return t.lemma == i.lemma && t.pos == i.pos; }));
      }
    }
  }
}
