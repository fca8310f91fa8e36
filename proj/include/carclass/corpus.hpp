#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace carclass {

/// One word of a lemmatized, POS-tagged, dependency-parsed sentence.
///
/// `head` is the 1-based index of the governing token, or 0 for the sentence
/// root. Unknown lemmas are encoded by repeating the surface form.
struct Token {
  std::string surface;
  std::string lemma;
  std::string pos;
  std::size_t head = 0;
  std::string dep_label;  // empty for the root

  bool is_root() const noexcept { return head == 0; }
  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::string id;
  std::string doc_id;
  std::vector<Token> tokens;

  /// Token governing `t` (t must not be the root).
  const Token& governor(const Token& t) const { return tokens.at(t.head - 1); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::string class_label;
  std::vector<Sentence> sentences;
  friend bool operator==(const Document&, const Document&) = default;
};

/// A dependency triple (dependent, governor, label).
struct Dependency {
  std::size_t dependent;  // 1-based
  std::size_t governor;   // 1-based
  std::string label;
};

/// A sentence paired with the class of the document it came from.
struct LabeledSentence {
  const Sentence* sentence;
  std::string class_label;
};

/// An immutable, validated collection of class-annotated documents.
class Corpus {
 public:
  Corpus() = default;
  /// Validates every invariant; throws SchemaError or TreeError.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::set<std::string>& classes() const noexcept { return classes_; }
  std::size_t sentence_count() const noexcept;
  const Document& document(std::string_view id) const;
  bool empty() const noexcept { return documents_.empty(); }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.documents_ == b.documents_; }

 private:
  std::vector<Document> documents_;
  std::set<std::string> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ParseOptions {
  /// Classification inputs may omit `# class = ...`.
  bool require_class = true;
};

Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});
Corpus parse_corpus(const std::filesystem::path& path, const ParseOptions& options = {});
Corpus parse_corpus_string(std::string_view text, const ParseOptions& options = {});

void serialize_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus(const Corpus& corpus);

/// 64-bit FNV-1a digest of the canonical serialization, as 16 hex digits.
std::string corpus_hash(const Corpus& corpus);

/// Every sentence exactly once, paired with the class of its document.
std::vector<LabeledSentence> forgetful(const Corpus& corpus);
std::vector<LabeledSentence> forgetful(const std::vector<const Document*>& documents);

const Token& sentence_root(const Sentence& s);
std::size_t sentence_root_index(const Sentence& s);  // 1-based
std::vector<Dependency> dependencies(const Sentence& s);

/// Throws TreeError unless heads form a tree rooted at a unique token.
void validate_tree(const Sentence& s);

}  // namespace carclass
