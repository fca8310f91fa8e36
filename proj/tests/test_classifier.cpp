#include <random>

#include "carclass/classifier.hpp"
#include "carclass/synthetic.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace carclass;

namespace {

// conf = hit/covered, support = covered/100
CAR rule(Itemset items, std::string cls, std::uint64_t hit, std::uint64_t covered) {
  return {std::move(items), std::move(cls), hit, covered, 100};
}

std::vector<EncodedSentence> doc(std::vector<Itemset> sentences) {
  std::vector<EncodedSentence> out;
  for (std::size_t i = 0; i < sentences.size(); ++i) out.push_back({"s" + std::to_string(i + 1), sentences[i]});
  return out;
}

}  // namespace

TEST_CASE("sentence matching picks the highest-ranked applicable rule") {
  std::vector<CAR> rules{rule({"a"}, "c1", 9, 10), rule({"a", "b"}, "c2", 8, 10)};
  sort_rules(rules);
  CHECK(match_sentence(rules, {"a", "b", "c"})->class_label == "c1");
  CHECK_FALSE(match_sentence(rules, {"z"}).has_value());
  CHECK(match_sentence(rules, {"b"}) == std::nullopt);

  std::vector<CAR> tied{rule({"a"}, "c1", 6, 10), rule({"b"}, "c2", 12, 20)};
  sort_rules(tied);
  CHECK(match_sentence(tied, {"a", "b"})->class_label == "c2");
}

TEST_CASE("aggregation examples") {
  const std::set<std::string> classes{"c1", "c2"};
  SUBCASE("one matching rule") {
    const auto r = classify_itemsets({rule({"a"}, "c1", 7, 10)}, doc({{"a"}}), classes);
    CHECK(r.predicted_class == "c1");
    CHECK(r.variety == 1);
    CHECK(r.dispersion == doctest::Approx(0.7));
    CHECK(r.class_scores.at("c1") == doctest::Approx(0.7));
    CHECK(r.class_scores.at("c2") == 0.0);
  }
  SUBCASE("two sentences, two classes") {
    std::vector<CAR> rules{rule({"a"}, "c1", 6, 10), rule({"b"}, "c2", 9, 10)};
    sort_rules(rules);
    const auto r = classify_itemsets(rules, doc({{"a"}, {"b"}}), classes);
    CHECK(r.predicted_class == "c2");
    CHECK(r.variety == 2);
    // .9 − .6 over the two classes
    CHECK(r.dispersion == doctest::Approx(0.3));
    REQUIRE(r.verdicts.size() == 2);
    CHECK(r.verdicts[0].rule->class_label == "c1");
  }
  SUBCASE("nothing matches") {
    const auto r = classify_itemsets({rule({"a"}, "c1", 7, 10)}, doc({{"x"}, {}}), classes);
    CHECK_FALSE(r.predicted_class.has_value());
    CHECK(r.variety == 0);
    CHECK(r.dispersion == 0.0);
    CHECK_FALSE(r.verdicts[0].matched());
  }
  SUBCASE("ties go to the smallest label") {
    std::vector<CAR> rules{rule({"a"}, "c2", 5, 10), rule({"b"}, "c1", 5, 10)};
    sort_rules(rules);
    CHECK(classify_itemsets(rules, doc({{"a"}, {"b"}}), classes).predicted_class == "c1");
  }
}

TEST_CASE("aggregation agrees with the straight-line oracle") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 300; ++round) {
    const auto c = oracle::random_classifier_case(rng);
    std::vector<EncodedSentence> sentences;
    for (const auto& s : c.sentences) sentences.push_back({"s", Itemset(std::vector<std::string>(s.begin(), s.end()))});
    const auto got = classify_itemsets(c.rules, sentences, c.classes);
    const auto want = oracle::classify(c.rules, c.sentences, c.classes);
    CHECK(got.predicted_class == want.predicted);
    CHECK(got.variety == want.beta);
    CHECK(got.dispersion == doctest::Approx(want.delta).epsilon(1e-12));

    const auto scaled = classify_itemsets(oracle::scale_confidences(c.rules, 2, 3), sentences, c.classes);
    CHECK(scaled.predicted_class == got.predicted_class);
    CHECK(scaled.variety == got.variety);
  }
}

TEST_CASE("classifying documents end to end") {
  const Corpus c = make_synthetic_corpus({.documents = 40});
  const auto training = forgetful(c);
  const TrainOptions opts;  // head only
  const auto rules = train(c, {0.01, 0.6, 5}, opts);
  const Classifier clf(rules, SentenceEncoder(opts, training), c.classes());
  for (const auto& d : c.documents()) {
    const auto r = clf.classify(d);
    CHECK(r.predicted_class == d.class_label);
    CHECK(r.variety == 1);
    CHECK(r.verdicts.size() == d.sentences.size());
    CHECK(r.dispersion == doctest::Approx(static_cast<double>(d.sentences.size())));
  }
  CHECK(classify(rules, c.documents()[0], opts, training, c.classes()).predicted_class == c.documents()[0].class_label);

  SUBCASE("unsorted rules are sorted on construction") {
    auto reversed = rules;
    std::reverse(reversed.begin(), reversed.end());
    const Classifier again(reversed, SentenceEncoder(opts, training), c.classes());
    CHECK(again.rules() == rules);
  }
}
