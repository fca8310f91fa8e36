#include "carclass/synthetic.hpp"

#include <array>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "carclass/error.hpp"

namespace carclass {

namespace {

struct Verb {
  const char* lemma;
  const char* past;
};

struct ClassVocabulary {
  const char* label;
  std::array<Verb, 3> verbs;
  std::array<const char*, 3> subjects;
  std::array<const char*, 3> objects;
};

constexpr std::array<ClassVocabulary, 4> kClasses{{
    {"E12", {{{"lend", "lent"}, {"borrow", "borrowed"}, {"devalue", "devalued"}}}, {"bank", "treasury", "economist"}, {"rate", "bond", "currency"}},
    {"GPOL", {{{"elect", "elected"}, {"veto", "vetoed"}, {"legislate", "legislated"}}}, {"senator", "party", "governor"}, {"bill", "election", "seat"}},
    {"GSPO", {{{"win", "won"}, {"score", "scored"}, {"defeat", "defeated"}}}, {"team", "striker", "coach"}, {"match", "goal", "title"}},
    {"GVIO", {{{"attack", "attacked"}, {"bomb", "bombed"}, {"shell", "shelled"}}}, {"rebel", "army", "militant"}, {"village", "convoy", "base"}},
}};

constexpr std::array<Verb, 4> kSharedVerbs{{{"say", "said"}, {"see", "saw"}, {"make", "made"}, {"report", "reported"}}};
constexpr std::array<const char*, 5> kSharedSubjects{"official", "spokesman", "dog", "dalmatian", "poodle"};
constexpr std::array<const char*, 4> kSharedObjects{"statement", "week", "plan", "poodle"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    while (true) {
      const std::uint64_t x = engine_();
      if (x < limit) return static_cast<std::size_t>(x % n);
    }
  }
  bool chance(double p) { return static_cast<double>(below(1000000)) < p * 1000000.0; }

 private:
  std::mt19937_64 engine_;
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticOptions& o) {
  if (o.classes == 0 || o.classes > kClasses.size()) throw ConfigError("synthetic corpus supports 1 to 4 classes");
  if (o.min_sentences == 0 || o.max_sentences < o.min_sentences) throw ConfigError("invalid sentence range");
  Rng rng(o.seed);
  std::vector<Document> docs;
  for (std::size_t d = 0; d < o.documents; ++d) {
    const ClassVocabulary& cls = kClasses[d % o.classes];
    Document doc;
    doc.id = "d" + std::to_string(d + 1);
    doc.class_label = cls.label;
    const std::size_t n_sent = o.min_sentences + rng.below(o.max_sentences - o.min_sentences + 1);
    for (std::size_t k = 0; k < n_sent; ++k) {
      Sentence s;
      s.id = doc.id + ".s" + std::to_string(k + 1);
      s.doc_id = doc.id;
      const Verb verb = o.head_discriminative ? cls.verbs[rng.below(3)] : kSharedVerbs[rng.below(kSharedVerbs.size())];
      const bool has_subject = rng.chance(o.nsubj_rate);
      const char* subject = nullptr;
      if (has_subject) {
        const bool own = o.subject_discriminative && !rng.chance(o.subject_noise);
        subject = own ? cls.subjects[rng.below(3)] : kSharedSubjects[rng.below(kSharedSubjects.size())];
      }
      const char* object = rng.chance(0.5) ? cls.objects[rng.below(3)] : kSharedObjects[rng.below(kSharedObjects.size())];

      // Token layout: [The subject] verb the object .
      std::vector<Token>& t = s.tokens;
      const std::size_t verb_at = has_subject ? 3 : 1;
      if (has_subject) {
        t.push_back({"The", "the", "DT", 2, "det"});
        t.push_back({subject, subject, "NN", verb_at, "nsubj"});
      }
      t.push_back({has_subject ? verb.past : capitalize(verb.past), verb.lemma, "VVD", 0, ""});
      t.push_back({"the", "the", "DT", verb_at + 2, "det"});
      t.push_back({object, object, "NN", verb_at, "dobj"});
      t.push_back({".", ".", "SENT", verb_at, "punct"});
      doc.sentences.push_back(std::move(s));
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus make_staircase_corpus(std::size_t items, std::size_t base, std::size_t classes) {
  if (classes == 0 || classes > kClasses.size()) throw ConfigError("staircase corpus supports 1 to 4 classes");
  std::vector<Document> docs;
  for (std::size_t j = 1; j <= items; ++j) {
    const std::string item = "w" + std::to_string(j);
    for (std::size_t r = 0; r < base + j; ++r) {
      Document doc;
      doc.id = item + "_" + std::to_string(r);
      doc.class_label = kClasses[j % classes].label;
      Sentence s{doc.id + ".s1", doc.id, {{item, item, "NN", 0, ""}}};
      doc.sentences.push_back(std::move(s));
      docs.push_back(std::move(doc));
    }
  }
  return Corpus(std::move(docs));
}

}  // namespace carclass
