#include "toipol/corpus.hpp"

#include <charconv>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "toipol/error.hpp"
#include "toipol/text.hpp"

namespace toipol {

namespace {

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!is_digits(s.substr(0, 4)) || !is_digits(s.substr(5, 2)) || !is_digits(s.substr(8, 2))) return std::nullopt;
  const Date d{std::chrono::year{*to_int(s.substr(0, 4))},
               std::chrono::month{static_cast<unsigned>(*to_int(s.substr(5, 2)))},
               std::chrono::day{static_cast<unsigned>(*to_int(s.substr(8, 2)))}};
  if (!d.ok()) return std::nullopt;
  return d;
}

std::string format_date(Date d) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                     static_cast<unsigned>(d.day()));
}

std::optional<Scope> parse_scope(std::string_view s) {
  if (s == "national") return Scope::national;
  if (s == "regional") return Scope::regional;
  return std::nullopt;
}

std::string_view to_string(Scope s) { return s == Scope::national ? "national" : "regional"; }

std::vector<std::string> sentence_violations(const Sentence& s) {
  std::vector<std::string> out;
  const int n = static_cast<int>(s.size());
  if (n == 0) {
    out.emplace_back("empty sentence");
    return out;
  }
  int roots = 0;
  bool ranges_ok = true;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) {
      out.push_back(fmt::format("token {} has index {}", i + 1, t.index));
      ranges_ok = false;
    }
    if (t.head < 0 || t.head > n) {
      out.push_back(fmt::format("token {} head {} out of range", t.index, t.head));
      ranges_ok = false;
    }
    if (t.head == t.index) {
      out.push_back(fmt::format("token {} is its own head", t.index));
      ranges_ok = false;
    }
    if (t.lemma.empty()) out.push_back(fmt::format("token {} has empty lemma", t.index));
    if (t.upos.empty()) out.push_back(fmt::format("token {} has empty upos", t.index));
    if (t.head == 0) ++roots;
  }
  if (roots != 1) out.push_back(fmt::format("{} roots", roots));
  if (!ranges_ok) return out;

  // Every token must reach the root within n steps.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (cur != 0 && steps <= n) {
      cur = s.at(cur).head;
      ++steps;
    }
    if (cur != 0) {
      out.push_back(fmt::format("token {} does not reach the root (cycle)", i));
      break;
    }
  }
  return out;
}

std::vector<Violation> validate_document(const Document& doc) {
  std::vector<Violation> out;
  if (doc.doc_id.empty()) out.push_back({std::nullopt, "empty doc_id"});
  if (!doc.date.ok()) out.push_back({std::nullopt, "invalid date"});
  if (doc.sentences.empty()) out.push_back({std::nullopt, "no sentences"});
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    for (auto& m : sentence_violations(doc.sentences[i])) out.push_back({i, fmt::format("sentence {}: {}", i, m)});
  }
  return out;
}

namespace {

struct PendingDoc {
  std::string id;
  std::size_t line = 0;
  std::map<std::string, std::string, std::less<>> meta;
  std::vector<Sentence> sentences;
  Sentence current;

  void close_sentence() {
    if (!current.tokens.empty()) sentences.push_back(std::move(current));
    current = {};
  }
};

class CorpusReader {
 public:
  explicit CorpusReader(std::string_view source) : source_(source) {}

  void line(std::string_view raw, std::size_t lineno) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (text::trim(raw).empty()) {
      if (doc_) doc_->close_sentence();
      return;
    }
    if (raw.front() == '#') {
      comment(raw.substr(1), lineno);
      return;
    }
    token(raw, lineno);
  }

  void finish() { flush(); }

  bool has_item() const { return !ready_.empty(); }
  CorpusStream::Item pop() {
    auto item = std::move(ready_.front());
    ready_.pop_front();
    return item;
  }

 private:
  void comment(std::string_view body, std::size_t lineno) {
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) return;
    const auto key = text::trim(body.substr(0, eq));
    const auto value = std::string(text::trim(body.substr(eq + 1)));
    if (key == "newdoc id") {
      flush();
      doc_.emplace();
      doc_->id = value;
      doc_->line = lineno;
    } else if (key.starts_with("meta::")) {
      if (!doc_) throw ParseError(source_, lineno, "metadata outside of a document");
      doc_->meta[std::string(key.substr(6))] = value;
    }
  }

  void token(std::string_view raw, std::size_t lineno) {
    const auto cols = text::split(raw, '\t');
    if (cols.size() != 10) throw ParseError(source_, lineno, fmt::format("expected 10 columns, found {}", cols.size()));
    if (!doc_) throw ParseError(source_, lineno, "token line before `# newdoc id`");
    // Multiword ranges (1-2) and empty nodes (1.1) carry no tree position.
    if (cols[0].find_first_of("-.") != std::string_view::npos) return;
    const auto index = to_int(cols[0]);
    const auto head = to_int(cols[6]);
    if (!index) throw ParseError(source_, lineno, fmt::format("bad token index '{}'", cols[0]));
    if (!head) throw ParseError(source_, lineno, fmt::format("bad head '{}'", cols[6]));
    doc_->current.tokens.push_back(Token{*index, std::string(cols[1]), text::lower(cols[2]), std::string(cols[3]),
                                         *head, std::string(cols[7])});
  }

  void flush() {
    if (!doc_) return;
    PendingDoc p = std::move(*doc_);
    doc_.reset();
    p.close_sentence();

    Rejection rej{p.id, p.line, {}};
    std::vector<std::string> missing;
    for (const char* key : {"date", "outlet", "scope"})
      if (!p.meta.contains(key)) missing.emplace_back(key);
    if (!missing.empty()) rej.reasons.push_back("missing metadata: " + text::join(missing, ", "));

    Document doc;
    doc.doc_id = p.id;
    doc.sentences = std::move(p.sentences);
    if (auto it = p.meta.find("date"); it != p.meta.end()) {
      if (auto d = parse_date(it->second))
        doc.date = *d;
      else
        rej.reasons.push_back("unparseable date '" + it->second + "'");
    }
    if (auto it = p.meta.find("outlet"); it != p.meta.end()) doc.outlet = it->second;
    if (auto it = p.meta.find("scope"); it != p.meta.end()) {
      if (auto s = parse_scope(it->second))
        doc.scope = *s;
      else
        rej.reasons.push_back("unknown scope '" + it->second + "'");
    }
    if (!seen_.insert(p.id).second) rej.reasons.push_back("duplicate doc_id");
    if (rej.reasons.empty()) {
      for (auto& v : validate_document(doc)) rej.reasons.push_back(v.message);
    } else if (doc.sentences.empty()) {
      rej.reasons.emplace_back("no sentences");
    }

    if (rej.reasons.empty())
      ready_.emplace_back(std::move(doc));
    else
      ready_.emplace_back(std::move(rej));
  }

  std::string source_;
  std::optional<PendingDoc> doc_;
  std::set<std::string, std::less<>> seen_;
  std::deque<CorpusStream::Item> ready_;
};

}  // namespace

struct CorpusStream::Impl {
  Impl(std::istream& s, std::string_view source) : in(s), reader(source) {}

  std::istream& in;
  CorpusReader reader;
  std::string buf;
  std::size_t lineno = 0;
  bool done = false;
};

CorpusStream::CorpusStream(std::istream& in, std::string_view source)
    : impl_(std::make_unique<Impl>(in, source)) {}
CorpusStream::~CorpusStream() = default;
CorpusStream::CorpusStream(CorpusStream&&) noexcept = default;
CorpusStream& CorpusStream::operator=(CorpusStream&&) noexcept = default;

std::optional<CorpusStream::Item> CorpusStream::next() {
  auto& s = *impl_;
  while (!s.reader.has_item() && !s.done) {
    if (std::getline(s.in, s.buf)) {
      s.reader.line(s.buf, ++s.lineno);
    } else {
      s.reader.finish();
      s.done = true;
    }
  }
  if (!s.reader.has_item()) return std::nullopt;
  return s.reader.pop();
}

CorpusParse parse_corpus(std::istream& in, std::string_view source) {
  CorpusParse out;
  CorpusStream stream(in, source);
  while (auto item = stream.next()) {
    if (auto* doc = std::get_if<Document>(&*item))
      out.documents.push_back(std::move(*doc));
    else
      out.rejected.push_back(std::get<Rejection>(std::move(*item)));
  }
  return out;
}

CorpusParse parse_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_corpus(in, path.string());
}

void write_conllu(std::ostream& out, const Document& doc) {
  out << "# newdoc id = " << doc.doc_id << '\n'
      << "# meta::date = " << format_date(doc.date) << '\n'
      << "# meta::outlet = " << doc.outlet << '\n'
      << "# meta::scope = " << to_string(doc.scope) << '\n';
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t" << t.head << '\t'
          << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
}

std::string to_conllu(const std::vector<Document>& docs) {
  std::ostringstream out;
  for (const auto& d : docs) write_conllu(out, d);
  return out.str();
}

}  // namespace toipol
