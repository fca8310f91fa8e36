#include "carclass/corpus.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "carclass/error.hpp"
#include "text_util.hpp"

namespace carclass {

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::unordered_set<std::string> sentence_ids;
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (d.id.empty()) throw SchemaError("document without id");
    if (!index_.emplace(d.id, i).second) throw SchemaError("duplicate document id " + d.id);
    if (d.sentences.empty()) throw SchemaError("document " + d.id + " has no sentences");
    if (!d.class_label.empty()) classes_.insert(d.class_label);
    for (const Sentence& s : d.sentences) {
      if (s.id.empty()) throw SchemaError("sentence without id in document " + d.id);
      if (!sentence_ids.insert(s.id).second) throw SchemaError("duplicate sentence id " + s.id);
      if (s.doc_id != d.id) throw SchemaError("sentence " + s.id + " does not belong to document " + d.id);
      validate_tree(s);
    }
  }
}

std::size_t Corpus::sentence_count() const noexcept {
  return std::accumulate(documents_.begin(), documents_.end(), std::size_t{0},
                         [](std::size_t n, const Document& d) { return n + d.sentences.size(); });
}

const Document& Corpus::document(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw DomainError("unknown document " + std::string(id));
  return documents_[it->second];
}

void validate_tree(const Sentence& s) {
  const std::size_t n = s.tokens.size();
  if (n == 0) throw TreeError(s.id, "empty sentence");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = s.tokens[i];
    if (t.lemma.empty() || t.surface.empty()) throw TreeError(s.id, "token " + std::to_string(i + 1) + " has an empty form");
    if (t.head > n) throw TreeError(s.id, "head index " + std::to_string(t.head) + " out of range");
    if (t.head == i + 1) throw TreeError(s.id, "token " + std::to_string(i + 1) + " is its own head");
    if (t.head == 0) ++roots;
  }
  if (roots != 1) throw TreeError(s.id, "expected exactly one root, found " + std::to_string(roots));
  // Walking up from any token must reach the root within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cur = i + 1;
    std::size_t steps = 0;
    while (cur != 0) {
      cur = s.tokens[cur - 1].head;
      if (++steps > n) throw TreeError(s.id, "dependency cycle through token " + std::to_string(i + 1));
    }
  }
}

namespace {

struct PendingDoc {
  Document doc;
  bool has_class = false;
  std::size_t line = 0;
};

// "# key = value" or "# key=value"; returns false for other comments.
bool split_meta(std::string_view body, std::string_view& key, std::string_view& value) {
  auto eq = body.find('=');
  if (eq == std::string_view::npos) return false;
  key = detail::trim(body.substr(0, eq));
  value = detail::trim(body.substr(eq + 1));
  return true;
}

std::size_t parse_index(std::string_view field, std::size_t line, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  return v;
}

std::string field_value(std::string_view f) { return f == "_" ? std::string() : std::string(f); }

}  // namespace

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
  std::vector<Document> docs;
  PendingDoc cur;
  bool in_doc = false;
  Sentence sent;
  bool in_sent = false;
  std::size_t lineno = 0;

  auto close_sentence = [&](std::size_t line) {
    if (!in_sent) return;
    if (sent.tokens.empty()) throw ParseError(line, "sentence " + sent.id + " has no tokens");
    cur.doc.sentences.push_back(std::move(sent));
    sent = Sentence{};
    in_sent = false;
  };
  auto close_document = [&](std::size_t line) {
    close_sentence(line);
    if (!in_doc) return;
    if (options.require_class && !cur.has_class)
      throw SchemaError("document " + cur.doc.id + " (line " + std::to_string(cur.line) + ") has no class annotation");
    docs.push_back(std::move(cur.doc));
    cur = PendingDoc{};
    in_doc = false;
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) {
      close_sentence(lineno);
      continue;
    }
    if (line.front() == '#') {
      std::string_view key, value;
      std::string_view body = detail::trim(line.substr(1));
      if (body.starts_with("newdoc")) {
        close_document(lineno);
        std::string_view rest = detail::trim(body.substr(6));
        if (!split_meta(rest, key, value) || key != "id" || value.empty())
          throw ParseError(lineno, "expected '# newdoc id = <id>'");
        cur.doc.id = std::string(value);
        cur.line = lineno;
        in_doc = true;
        continue;
      }
      if (!split_meta(body, key, value)) continue;  // free-text comment
      if (key == "class") {
        if (!in_doc) throw ParseError(lineno, "class annotation outside a document");
        if (cur.has_class) throw SchemaError("document " + cur.doc.id + " has more than one class annotation");
        if (value.empty()) throw ParseError(lineno, "empty class label");
        cur.doc.class_label = std::string(value);
        cur.has_class = true;
      } else if (key == "sent_id") {
        if (!in_doc) throw ParseError(lineno, "sentence outside a document");
        close_sentence(lineno);
        sent.id = std::string(value);
        sent.doc_id = cur.doc.id;
        in_sent = true;
      }
      continue;
    }

    auto fields = detail::split(line, '\t');
    if (fields.size() < 6) throw ParseError(lineno, "expected 6 tab-separated columns, found " + std::to_string(fields.size()));
    if (!in_doc) throw ParseError(lineno, "token outside a document");
    if (!in_sent) throw ParseError(lineno, "token line before '# sent_id = ...'");
    const std::size_t index = parse_index(fields[0], lineno, "token index");
    if (index != sent.tokens.size() + 1)
      throw ParseError(lineno, "token index " + std::to_string(index) + " out of sequence");
    Token t;
    t.surface = std::string(fields[1]);
    t.lemma = field_value(fields[2]);
    if (t.lemma.empty()) t.lemma = t.surface;
    t.pos = field_value(fields[3]);
    t.head = parse_index(fields[4], lineno, "head index");
    t.dep_label = t.head == 0 ? std::string() : field_value(fields[5]);
    if (t.surface.empty()) throw ParseError(lineno, "empty surface form");
    sent.tokens.push_back(std::move(t));
  }
  close_document(lineno + 1);
  if (docs.empty()) throw ParseError(lineno, "no documents found");
  return Corpus(std::move(docs));
}

Corpus parse_corpus(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return parse_corpus(in, options);
}

Corpus parse_corpus_string(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in, options);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents()) {
    out << "# newdoc id = " << d.id << '\n';
    if (!d.class_label.empty()) out << "# class = " << d.class_label << '\n';
    for (const Sentence& s : d.sentences) {
      out << "# sent_id = " << s.id << '\n';
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        out << i + 1 << '\t' << t.surface << '\t' << t.lemma << '\t' << (t.pos.empty() ? "_" : t.pos) << '\t'
            << t.head << '\t' << (t.head == 0 ? "root" : (t.dep_label.empty() ? "_" : t.dep_label)) << '\n';
      }
      out << '\n';
    }
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

std::string corpus_hash(const Corpus& corpus) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize_corpus(corpus)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::vector<LabeledSentence> forgetful(const Corpus& corpus) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents().size());
  for (const Document& d : corpus.documents()) docs.push_back(&d);
  return forgetful(docs);
}

std::vector<LabeledSentence> forgetful(const std::vector<const Document*>& documents) {
  std::vector<LabeledSentence> out;
  for (const Document* d : documents)
    for (const Sentence& s : d->sentences) out.push_back({&s, d->class_label});
  return out;
}

std::size_t sentence_root_index(const Sentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (s.tokens[i].head == 0) return i + 1;
  throw TreeError(s.id, "no root token");
}

const Token& sentence_root(const Sentence& s) { return s.tokens[sentence_root_index(s) - 1]; }

std::vector<Dependency> dependencies(const Sentence& s) {
  std::vector<Dependency> deps;
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (s.tokens[i].head != 0) deps.push_back({i + 1, s.tokens[i].head, s.tokens[i].dep_label});
  return deps;
}

}  // namespace carclass
