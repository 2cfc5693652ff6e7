#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace toipol {

using Date = std::chrono::year_month_day;

/// Strict `YYYY-MM-DD`; nullopt on anything else, including impossible days.
std::optional<Date> parse_date(std::string_view s);
std::string format_date(Date d);

enum class Scope { national, regional };

std::optional<Scope> parse_scope(std::string_view s);
std::string_view to_string(Scope s);

struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string surface;
  std::string lemma;  // lowercased at ingestion
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  // 1-based access, matching Token::index and Token::head.
  const Token& at(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }

  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::string doc_id;
  Date date{};
  std::string outlet;
  Scope scope = Scope::national;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

struct Violation {
  std::optional<std::size_t> sentence;  // 0-based; empty for document-level problems
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Structural problems of one sentence (root count, cycles, index/head ranges).
std::vector<std::string> sentence_violations(const Sentence& s);

/// Every invariant of the document model; empty means valid.
std::vector<Violation> validate_document(const Document& doc);

struct Rejection {
  std::string doc_id;
  std::size_t line = 0;  // line of the `# newdoc` comment
  std::vector<std::string> reasons;
};

struct CorpusParse {
  std::vector<Document> documents;
  std::vector<Rejection> rejected;

  std::size_t documents_read() const noexcept { return documents.size() + rejected.size(); }
};

/// Incremental reader: yields each document (or its rejection) as soon as it
/// is complete, so corpora need not fit in memory.
class CorpusStream {
 public:
  using Item = std::variant<Document, Rejection>;

  CorpusStream(std::istream& in, std::string_view source);
  ~CorpusStream();
  CorpusStream(CorpusStream&&) noexcept;
  CorpusStream& operator=(CorpusStream&&) noexcept;

  /// Next document or rejection; nullopt once the input is exhausted.
  /// Throws ParseError on malformed token lines.
  std::optional<Item> next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reads CoNLL-U with `# newdoc id = ...` document breaks and `# meta::key = value`
/// metadata. Malformed token lines throw ParseError; documents with missing
/// metadata or broken trees land in `rejected` and parsing continues.
CorpusParse parse_corpus(std::istream& in, std::string_view source = "<stream>");
CorpusParse parse_corpus_file(const std::filesystem::path& path);

/// Canonical 10-column subset; parse_corpus(write_conllu(d)) reproduces d.
void write_conllu(std::ostream& out, const Document& doc);
std::string to_conllu(const std::vector<Document>& docs);

}  // namespace toipol
