#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "toipol/error.hpp"
#include "toipol/lexicon.hpp"

using namespace toipol;
namespace fs = std::filesystem;
using testing::bundled_lexicons;
using testing::lexicon_dir;
using testing::ScratchDir;
using testing::slurp;
using testing::spit;

namespace {

// Copies the bundled lexicons so a test can corrupt one file.
fs::path copy_lexicons(const ScratchDir& dir) {
  const auto target = dir / "lexicons";
  fs::copy(lexicon_dir(), target, fs::copy_options::recursive);
  return target;
}

std::string load_error_message(const fs::path& dir) {
  try {
    load_lexicons(LexiconPaths::in_directory(dir));
  } catch (const LoadError& e) {
    return e.what();
  }
  return {};
}

LemmaSeq seq(std::string_view s) { return text::words(s); }

}  // namespace

TEST_CASE("moral valence rescale") {
  CHECK(rescale_moral_valence(5.0) == 0.0);
  CHECK(rescale_moral_valence(1.0) == -1.0);
  CHECK(rescale_moral_valence(9.0) == 1.0);
  CHECK(rescale_moral_valence(7.0) == 0.5);
  CHECK_THROWS_AS(rescale_moral_valence(0.99), std::domain_error);
  CHECK_THROWS_AS(rescale_moral_valence(9.01), std::domain_error);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1.0, 9.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(rescale_moral_valence(a) - rescale_moral_valence(b) == doctest::Approx((a - b) / 4).epsilon(1e-12));
    if (a < b) CHECK(rescale_moral_valence(a) < rescale_moral_valence(b));
  }
}

TEST_CASE("bundled lexicons load") {
  const auto& b = bundled_lexicons();
  CHECK(b.lexicon(Dimension::sentiment).score("insecurity") == -0.62);
  CHECK(token_polarity(b, "insecurity", Dimension::sentiment) == -0.62);
  CHECK(token_polarity(b, "right", Dimension::fairness) == 0.75);
  for (auto d : kDimensions) CHECK(token_polarity(b, "zyzzyva", d) == 0.0);
  CHECK(b.modifiers.negators == std::set<std::string>{"no", "not", "never", "without", "prevent", "lack"});
  CHECK(b.modifiers.intensifiers == std::set<std::string>{"very", "greater", "strongly", "significantly", "highly"});
  CHECK(b.modifiers.female_terms ==
        std::set<std::string>{"female", "woman", "girl", "she", "her", "maternal", "maternity", "mother"});
  CHECK(b.gazetteer.nuts2_of("ES300") == "ES30");
  CHECK_FALSE(b.gazetteer.nuts2_of("ES"));
  CHECK(b.gazetteer.nationality_code("spanish") == "ES");
}

TEST_CASE("every lexicon score lies in [-1, 1]") {
  const auto& b = bundled_lexicons();
  for (auto d : kDimensions)
    for (const auto& [lemma, score] : b.lexicon(d).entries) {
      CHECK(score >= -1.0);
      CHECK(score <= 1.0);
    }
}

TEST_CASE("loading twice yields equal bundles") {
  const auto again = load_lexicons(LexiconPaths::in_directory(lexicon_dir()));
  CHECK(again == bundled_lexicons());
}

TEST_CASE("row order does not matter") {
  ScratchDir dir("lexorder");
  const auto copy = copy_lexicons(dir);
  std::mt19937 rng(3);
  for (const auto& entry : fs::directory_iterator(copy)) {
    auto text = slurp(entry.path());
    std::vector<std::string> lines;
    for (auto l : text::split(text, '\n'))
      if (!l.empty()) lines.emplace_back(l);
    // Header lines (comments, CSV column names) stay on top in their order.
    const bool csv = entry.path().extension() == ".csv";
    auto body = lines.begin() + (csv ? 1 : 0);
    body = std::stable_partition(body, lines.end(), [](const std::string& l) { return l[0] == '#'; });
    std::shuffle(body, lines.end(), rng);
    spit(entry.path(), text::join(lines, "\n") + "\n");
  }
  CHECK(load_lexicons(LexiconPaths::in_directory(copy)) == bundled_lexicons());
}

TEST_CASE("ToI expansion") {
  SUBCASE("single seed") {
    const ToILexicon seeds({seq("unemployment")});
    const SimilarityTable table{{{seq("unemployment"), seq("joblessness"), 0.82},
                                 {seq("unemployment"), seq("holiday"), 0.31}}};
    CHECK(expand_toi(seeds, table).terms() == std::set<LemmaSeq>{seq("unemployment"), seq("joblessness")});
  }

  SUBCASE("threshold 1 keeps the seeds") {
    const ToILexicon seeds({seq("unemployment"), seq("wage")});
    const SimilarityTable table{{{seq("unemployment"), seq("joblessness"), 0.99}, {seq("wage"), seq("pay"), 0.5}}};
    CHECK(expand_toi(seeds, table, 1.0) == seeds);
  }

  SUBCASE("threshold is inclusive") {
    const ToILexicon seeds({seq("wage")});
    const SimilarityTable table{{{seq("wage"), seq("pay"), 0.7}}};
    CHECK(expand_toi(seeds, table, 0.7).size() == 2);
    CHECK(expand_toi(seeds, table, 0.7000001).size() == 1);
  }

  SUBCASE("bad threshold") {
    const ToILexicon seeds({seq("wage")});
    CHECK_THROWS_AS(expand_toi(seeds, {}, 1.5), std::invalid_argument);
  }

  SUBCASE("the bundled table yields 19 terms, matching a brute-force filter") {
    const auto seeds = load_toi(lexicon_dir() / "toi.tsv");
    const auto table = load_similarity(lexicon_dir() / "similarity.tsv");
    CHECK(seeds.size() == 12);

    std::set<LemmaSeq> oracle = seeds.terms();
    for (const auto& row : table.rows)
      if (seeds.terms().count(row.seed) && row.score >= 0.7) oracle.insert(row.neighbor);
    const auto expanded = expand_toi(seeds, table, 0.7);
    CHECK(expanded.size() == 19);
    CHECK(expanded.terms() == oracle);
    CHECK(bundled_lexicons().toi == expanded);
    CHECK(expanded.contains(seq("precariousness")));
    CHECK_FALSE(expanded.contains(seq("job growth")));
    CHECK_FALSE(expanded.contains(seq("idleness")));
  }

  SUBCASE("single pass: neighbors of neighbors are not followed") {
    const ToILexicon seeds({seq("a")});
    const SimilarityTable table{{{seq("a"), seq("b"), 0.9}, {seq("b"), seq("c"), 0.9}}};
    const auto once = expand_toi(seeds, table);
    CHECK(once.terms() == std::set<LemmaSeq>{seq("a"), seq("b")});
    // A second pass reaches c: the expansion is deliberately not a closure.
    CHECK(expand_toi(once, table).terms() == std::set<LemmaSeq>{seq("a"), seq("b"), seq("c")});
  }

  SUBCASE("idempotent when no neighbor is itself a seed row") {
    const auto seeds = load_toi(lexicon_dir() / "toi.tsv");
    auto table = load_similarity(lexicon_dir() / "similarity.tsv");
    const auto once = expand_toi(seeds, table);
    std::erase_if(table.rows, [&](const SimilarityRow& r) { return !seeds.terms().count(r.seed); });
    CHECK(expand_toi(expand_toi(seeds, table), table) == expand_toi(seeds, table));
    CHECK(expand_toi(seeds, table) == once);
  }
}

TEST_CASE("ToI lexicon invariants") {
  CHECK_THROWS_AS(ToILexicon(std::vector<LemmaSeq>{}), std::invalid_argument);
  CHECK_THROWS_AS(ToILexicon({LemmaSeq{}}), std::invalid_argument);
  CHECK_THROWS_AS(ToILexicon({seq("a b c d e")}), std::invalid_argument);
  CHECK_THROWS_AS(ToILexicon({seq("Labour market")}), std::invalid_argument);
  const ToILexicon dup({seq("wage"), seq("wage")});
  CHECK(dup.size() == 1);
}

TEST_CASE("load errors") {
  ScratchDir dir("lexerr");
  const auto copy = copy_lexicons(dir);

  SUBCASE("sentiment score out of range") {
    spit(copy / "sentiment.tsv", "#scale=[-1,1]\ngood\t0.5\nsuper\t1.5\n");
    const auto msg = load_error_message(copy);
    CHECK(msg.find("sentiment.tsv:3") != std::string::npos);
    CHECK(msg.find("score 1.5 outside [-1, 1]") != std::string::npos);
  }

  SUBCASE("raw moral valence out of range") {
    spit(copy / "care.tsv", "#scale=[1,9]\nhelp\t9.5\n");
    CHECK(load_error_message(copy).find("care.tsv:2: score outside [1, 9]") != std::string::npos);
  }

  SUBCASE("raw moral valence is rescaled at load") {
    spit(copy / "care.tsv", "#scale=[1,9]\nhelp\t7\nharm\t1\n");
    const auto b = load_lexicons(LexiconPaths::in_directory(copy));
    CHECK(b.lexicon(Dimension::care).score("help") == 0.5);
    CHECK(b.lexicon(Dimension::care).score("harm") == -1.0);
  }

  SUBCASE("missing scale header") {
    spit(copy / "loyalty.tsv", "loyal\t0.5\n");
    CHECK(load_error_message(copy).find("expected '#scale=[-1,1]' or '#scale=[1,9]'") != std::string::npos);
  }

  SUBCASE("duplicate lemma") {
    spit(copy / "purity.tsv", "#scale=[-1,1]\nclean\t0.5\nclean\t0.4\n");
    CHECK(load_error_message(copy).find("purity.tsv:3: duplicate lemma 'clean'") != std::string::npos);
  }

  SUBCASE("NUTS3 without rollup") {
    auto rollup = slurp(copy / "rollup.csv");
    rollup.erase(rollup.find("ES300,ES30\n"), 11);
    spit(copy / "rollup.csv", rollup);
    const auto msg = load_error_message(copy);
    CHECK(msg.find("NUTS3 ES300 has no rollup entry") != std::string::npos);
  }

  SUBCASE("rollup target without region") {
    spit(copy / "rollup.csv", slurp(copy / "rollup.csv") + "ES999,ES99\n");
    CHECK(load_error_message(copy).find("NUTS2 ES99 has no entry in regions.csv") != std::string::npos);
  }

  SUBCASE("similarity score out of range") {
    spit(copy / "similarity.tsv", "wage\tpay\t1.2\n");
    CHECK(load_error_message(copy).find("similarity.tsv:1: similarity score outside [0, 1]") != std::string::npos);
  }

  SUBCASE("overlapping modifier lists") {
    spit(copy / "intensifiers.tsv", "very\nnot\n");
    CHECK(load_error_message(copy).find("lemma 'not' appears in more than one modifier list") != std::string::npos);
  }

  SUBCASE("missing file") {
    fs::remove(copy / "negators.tsv");
    CHECK(load_error_message(copy).find("cannot open file") != std::string::npos);
  }

  SUBCASE("similarity table is optional") {
    fs::remove(copy / "similarity.tsv");
    CHECK(load_lexicons(LexiconPaths::in_directory(copy)).toi.size() == 12);
  }
}

TEST_CASE("gazetteer lookups are case-insensitive over words") {
  const auto& g = bundled_lexicons().gazetteer;
  const std::vector<std::string> basque{"basque", "country"};
  CHECK(g.place_code(basque) == "ES213");
  const std::vector<std::string> madrid{"madrid"};
  CHECK(g.place_code(madrid) == "ES300");
  const std::vector<std::string> nowhere{"atlantis"};
  CHECK_FALSE(g.place_code(nowhere));
  CHECK(g.max_name_length() >= 2);
}
