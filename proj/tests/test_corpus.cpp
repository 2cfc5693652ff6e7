#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "toipol/corpus.hpp"
#include "toipol/error.hpp"

using namespace toipol;
using testing::fixture;

namespace {

const char* kHeader =
    "# newdoc id = d1\n"
    "# meta::date = 2019-02-03\n"
    "# meta::outlet = ABC\n"
    "# meta::scope = national\n";

CorpusParse parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, "test");
}

}  // namespace

TEST_CASE("dates") {
  CHECK(parse_date("2008-10-27") == Date{std::chrono::year{2008}, std::chrono::month{10}, std::chrono::day{27}});
  CHECK(format_date(*parse_date("2020-03-05")) == "2020-03-05");
  CHECK_FALSE(parse_date("2021-02-29"));
  CHECK_FALSE(parse_date("2021-2-03"));
  CHECK_FALSE(parse_date("2021-02-03T00:00"));
  CHECK_FALSE(parse_date(""));
  CHECK(parse_date("2020-02-29"));
}

TEST_CASE("a one-token document parses to one sentence with one token") {
  const auto r = parse(std::string(kHeader) + "1\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n\n");
  REQUIRE(r.documents.size() == 1);
  CHECK(r.rejected.empty());
  const auto& doc = r.documents[0];
  CHECK(doc.doc_id == "d1");
  CHECK(doc.outlet == "ABC");
  CHECK(doc.scope == Scope::national);
  REQUIRE(doc.sentences.size() == 1);
  REQUIRE(doc.sentences[0].size() == 1);
  const auto& t = doc.sentences[0].at(1);
  CHECK(t.surface == "works");
  CHECK(t.lemma == "work");
  CHECK(t.head == 0);
  CHECK(t.deprel == "root");
}

TEST_CASE("a self-loop is a sentence validation error and only its document is rejected") {
  const std::string bad = std::string(kHeader) +
                          "1\tStrikes\tstrike\tNOUN\t_\t_\t0\troot\t_\t_\n"
                          "2\tspread\tspread\tVERB\t_\t_\t2\tconj\t_\t_\n\n";
  const std::string good =
      "# newdoc id = d2\n# meta::date = 2019-02-04\n# meta::outlet = ABC\n# meta::scope = regional\n"
      "1\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n\n";
  const auto r = parse(bad + good);
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].doc_id == "d1");
  CHECK(r.rejected[0].line == 1);
  REQUIRE(r.rejected[0].reasons.size() == 1);
  CHECK(r.rejected[0].reasons[0] == "sentence 0: token 2 is its own head");
  REQUIRE(r.documents.size() == 1);
  CHECK(r.documents[0].doc_id == "d2");
  CHECK(r.documents[0].scope == Scope::regional);
  CHECK(r.documents_read() == 2);
}

TEST_CASE("the excerpt fixture holds three documents with their dates") {
  const auto r = parse_corpus_file(fixture("excerpts.conllu"));
  CHECK(r.rejected.empty());
  REQUIRE(r.documents.size() == 3);
  CHECK(format_date(r.documents[0].date) == "2008-10-27");
  CHECK(format_date(r.documents[1].date) == "2020-03-15");
  CHECK(format_date(r.documents[2].date) == "2012-07-01");
  CHECK(r.documents[0].sentences.size() == 2);
  CHECK(r.documents[1].sentences.size() == 4);
  CHECK(r.documents[2].sentences.size() == 1);
  CHECK(r.documents[2].outlet == "El Correo");
  for (const auto& d : r.documents) CHECK(validate_document(d).empty());
}

TEST_CASE("lemmas are lowercased at ingestion") {
  const auto r = parse_corpus_file(fixture("excerpts.conllu"));
  const auto& catalonia = r.documents[0].sentences[1].at(20);
  CHECK(catalonia.surface == "Catalonia");
  CHECK(catalonia.lemma == "catalonia");
}

TEST_CASE("column count errors carry the line number") {
  const std::string text = std::string(kHeader) + "1\tworks\twork\tVERB\t_\t_\t0\troot\t_\n\n";
  try {
    parse(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("expected 10 columns, found 9") != std::string::npos);
  }
}

TEST_CASE("non-integer index or head is a parse error") {
  CHECK_THROWS_AS(parse(std::string(kHeader) + "x\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n"), ParseError);
  CHECK_THROWS_AS(parse(std::string(kHeader) + "1\tworks\twork\tVERB\t_\t_\tr\troot\t_\t_\n"), ParseError);
}

TEST_CASE("multiword and empty-node lines are skipped") {
  const auto r = parse(std::string(kHeader) +
                       "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
                       "1\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n"
                       "1.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n\n");
  REQUIRE(r.documents.size() == 1);
  CHECK(r.documents[0].sentences[0].size() == 1);
}

TEST_CASE("missing metadata lists every missing key") {
  const auto r = parse("# newdoc id = m\n# meta::outlet = X\n1\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n\n");
  REQUIRE(r.rejected.size() == 1);
  REQUIRE(r.rejected[0].reasons.size() == 1);
  CHECK(r.rejected[0].reasons[0] == "missing metadata: date, scope");
}

TEST_CASE("bad metadata values and duplicate ids reject documents") {
  const std::string body = "1\tworks\twork\tVERB\t_\t_\t0\troot\t_\t_\n\n";
  const auto r = parse("# newdoc id = a\n# meta::date = 2020-13-01\n# meta::outlet = X\n# meta::scope = national\n" +
                       body + "# newdoc id = b\n# meta::date = 2020-01-01\n# meta::outlet = X\n# meta::scope = local\n" +
                       body + std::string(kHeader) + body + std::string(kHeader) + body);
  REQUIRE(r.rejected.size() == 3);
  CHECK(r.rejected[0].reasons[0] == "unparseable date '2020-13-01'");
  CHECK(r.rejected[1].reasons[0] == "unknown scope 'local'");
  CHECK(r.rejected[2].reasons[0] == "duplicate doc_id");
  CHECK(r.documents.size() == 1);
  CHECK(r.documents_read() == 4);
}

TEST_CASE("validate_document") {
  const auto parsed = parse_corpus_file(fixture("excerpts.conllu"));

  SUBCASE("valid fixture document") { CHECK(validate_document(parsed.documents[0]).empty()); }

  SUBCASE("no sentences") {
    auto d = parsed.documents[0];
    d.sentences.clear();
    const auto v = validate_document(d);
    REQUIRE(v.size() == 1);
    CHECK(v[0].message == "no sentences");
    CHECK_FALSE(v[0].sentence);
  }

  SUBCASE("two roots name the sentence") {
    auto d = parsed.documents[0];
    d.sentences[1].tokens[1].head = 0;  // "report" becomes a second root
    const auto v = validate_document(d);
    REQUIRE(v.size() == 1);
    REQUIRE(v[0].sentence);
    CHECK(*v[0].sentence == 1);
    CHECK(v[0].message == "sentence 1: 2 roots");
  }

  SUBCASE("cycle") {
    auto s = testing::sentence({{"a", "a", "X", 0, "root"}, {"b", "b", "X", 3, "dep"}, {"c", "c", "X", 2, "dep"}});
    const auto v = sentence_violations(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "token 2 does not reach the root (cycle)");
  }

  SUBCASE("ranges and empties") {
    auto s = testing::sentence({{"a", "a", "X", 0, "root"}, {"b", "", "", 7, "dep"}});
    const auto v = sentence_violations(s);
    CHECK(std::find(v.begin(), v.end(), "token 2 head 7 out of range") != v.end());
    CHECK(std::find(v.begin(), v.end(), "token 2 has empty lemma") != v.end());
    CHECK(std::find(v.begin(), v.end(), "token 2 has empty upos") != v.end());
  }
}

TEST_CASE("round trip through the canonical subset") {
  for (const char* name : {"excerpts.conllu", "fallback.conllu", "unlocated40.conllu"}) {
    const auto first = parse_corpus_file(fixture(name));
    const auto text = to_conllu(first.documents);
    std::istringstream in(text);
    const auto second = parse_corpus(in);
    CHECK(second.rejected.empty());
    CHECK(second.documents == first.documents);
    CHECK(to_conllu(second.documents) == text);
  }
}

TEST_CASE("documents parse the same alone as concatenated") {
  const auto whole = parse_corpus_file(fixture("unlocated40.conllu"));
  std::vector<Document> one_by_one;
  for (const auto& d : whole.documents) {
    std::istringstream in(to_conllu({d}));
    auto r = parse_corpus(in);
    REQUIRE(r.documents.size() == 1);
    one_by_one.push_back(std::move(r.documents[0]));
  }
  CHECK(one_by_one == whole.documents);
}

TEST_CASE("the stream yields items in input order") {
  std::ifstream in(fixture("fallback.conllu"));
  CorpusStream stream(in, "fallback");
  std::vector<std::string> ids;
  while (auto item = stream.next()) ids.push_back(std::get<Document>(*item).doc_id);
  CHECK(ids == std::vector<std::string>{"valencia-brief", "no-toi"});
}

TEST_CASE("document count in equals accepted plus rejected") {
  // Corrupt a random subset of documents by adding a second root and count.
  auto docs = parse_corpus_file(fixture("unlocated40.conllu")).documents;
  std::mt19937 rng(7);
  std::size_t broken = 0;
  for (auto& d : docs) {
    if (rng() % 4 == 0) {
      d.sentences[0].tokens[0].head = 0;
      d.sentences[0].tokens[1].head = 0;
      ++broken;
    }
  }
  std::istringstream in(to_conllu(docs));
  const auto r = parse_corpus(in);
  CHECK(r.documents_read() == docs.size());
  CHECK(r.rejected.size() == broken);
  CHECK(r.documents.size() == docs.size() - broken);
}
