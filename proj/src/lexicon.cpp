#include "toipol/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "toipol/error.hpp"
#include "toipol/text.hpp"

namespace toipol {

namespace {

constexpr std::array<std::string_view, kDimensionCount> kDimensionNames = {
    "sentiment", "care", "fairness", "loyalty", "authority", "purity", "liberty"};

bool is_lower(const std::string& s) { return text::lower(s) == s; }

std::optional<double> to_double(std::string_view s) {
  s = text::trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Non-blank, non-comment lines with their 1-based line numbers.
struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(const std::filesystem::path& path, bool keep_comments = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::vector<Line> out;
  std::string buf;
  std::size_t n = 0;
  while (std::getline(in, buf)) {
    ++n;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    const auto t = text::trim(buf);
    if (t.empty()) continue;
    if (t.front() == '#' && !keep_comments) continue;
    out.push_back({n, buf});
  }
  return out;
}

LemmaSeq parse_term(const std::filesystem::path& path, const Line& line, std::string_view field) {
  auto seq = text::words(field);
  if (seq.empty() || seq.size() > ToILexicon::kMaxTermLength)
    throw LoadError(path.string(), line.number, fmt::format("term must have 1 to {} lemmas", ToILexicon::kMaxTermLength));
  for (auto& l : seq) l = text::lower(l);
  return seq;
}

/// Rows of a headed CSV; the header must equal `header` exactly.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(const std::filesystem::path& path,
                                                                        std::string_view header) {
  auto lines = read_lines(path);
  if (lines.empty() || text::trim(lines.front().text) != header)
    throw LoadError(path.string(), lines.empty() ? 0 : lines.front().number,
                    fmt::format("expected header '{}'", header));
  const std::size_t width = text::split(header, ',').size();
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cols = text::split(lines[i].text, ',');
    if (cols.size() != width)
      throw LoadError(path.string(), lines[i].number, fmt::format("expected {} columns, found {}", width, cols.size()));
    std::vector<std::string> fields;
    for (auto c : cols) {
      c = text::trim(c);
      if (c.empty()) throw LoadError(path.string(), lines[i].number, "empty field");
      fields.emplace_back(c);
    }
    rows.emplace_back(lines[i].number, std::move(fields));
  }
  return rows;
}

}  // namespace

std::string_view to_string(Dimension d) { return kDimensionNames[index_of(d)]; }

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (auto d : kDimensions)
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::string seq_key(std::span<const std::string> seq) {
  std::string key;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) key += '\x1f';
    key += seq[i];
  }
  return key;
}

ToILexicon::ToILexicon(const std::vector<LemmaSeq>& terms) {
  if (terms.empty()) throw std::invalid_argument("ToI lexicon is empty");
  for (const auto& t : terms) {
    if (t.empty() || t.size() > kMaxTermLength) throw std::invalid_argument("ToI term must have 1 to 4 lemmas");
    for (const auto& l : t)
      if (l.empty() || !is_lower(l)) throw std::invalid_argument("ToI lemma '" + l + "' is not lowercase");
    if (terms_.insert(t).second) {
      keys_.insert(seq_key(t));
      max_length_ = std::max(max_length_, t.size());
    }
  }
}

bool ToILexicon::contains(std::span<const std::string> lemmas) const {
  if (lemmas.empty() || lemmas.size() > max_length_) return false;
  return keys_.contains(seq_key(lemmas));
}

ToILexicon expand_toi(const ToILexicon& seeds, const SimilarityTable& table, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  std::vector<LemmaSeq> terms(seeds.terms().begin(), seeds.terms().end());
  for (const auto& row : table.rows) {
    if (row.score >= threshold && seeds.terms().contains(row.seed)) terms.push_back(row.neighbor);
  }
  return ToILexicon(terms);
}

double rescale_moral_valence(double raw) {
  if (!(raw >= 1.0 && raw <= 9.0)) throw std::domain_error(fmt::format("moral valence {} outside [1, 9]", raw));
  return (raw - 5.0) / 4.0;
}

double PolarityLexicon::score(std::string_view lemma) const {
  auto it = entries.find(std::string(lemma));
  return it == entries.end() ? 0.0 : it->second;
}

double token_polarity(const LexiconBundle& bundle, std::string_view lemma, Dimension d) {
  return bundle.lexicon(d).score(lemma);
}

void Gazetteer::reindex() {
  index_.clear();
  max_name_length_ = 0;
  for (const auto& [name, code] : places) {
    index_.emplace(seq_key(name), code);
    max_name_length_ = std::max(max_name_length_, name.size());
  }
}

std::optional<std::string> Gazetteer::place_code(std::span<const std::string> lowered_words) const {
  if (lowered_words.empty() || lowered_words.size() > max_name_length_) return std::nullopt;
  auto it = index_.find(seq_key(lowered_words));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Gazetteer::nationality_code(const std::string& lemma) const {
  auto it = nationalities.find(lemma);
  if (it == nationalities.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Gazetteer::nuts2_of(const std::string& code) const {
  auto it = rollup.find(code);
  if (it == rollup.end()) return std::nullopt;
  return it->second;
}

LexiconPaths LexiconPaths::in_directory(const std::filesystem::path& dir) {
  LexiconPaths p;
  p.toi = dir / "toi.tsv";
  if (std::filesystem::exists(dir / "similarity.tsv")) p.similarity = dir / "similarity.tsv";
  for (auto d : kDimensions) p.polarity[index_of(d)] = dir / (std::string(to_string(d)) + ".tsv");
  p.negators = dir / "negators.tsv";
  p.intensifiers = dir / "intensifiers.tsv";
  p.female_terms = dir / "female_terms.tsv";
  p.gazetteer = dir / "gazetteer.csv";
  p.rollup = dir / "rollup.csv";
  p.nationalities = dir / "nationalities.csv";
  p.regions = dir / "regions.csv";
  return p;
}

std::vector<std::filesystem::path> LexiconPaths::all() const {
  std::vector<std::filesystem::path> out{toi};
  if (similarity) out.push_back(*similarity);
  out.insert(out.end(), polarity.begin(), polarity.end());
  for (const auto* p : {&negators, &intensifiers, &female_terms, &gazetteer, &rollup, &nationalities, &regions})
    out.push_back(*p);
  return out;
}

ToILexicon load_toi(const std::filesystem::path& path) {
  std::vector<LemmaSeq> terms;
  std::set<LemmaSeq> seen;
  for (const auto& line : read_lines(path)) {
    auto term = parse_term(path, line, line.text);
    if (!seen.insert(term).second)
      throw LoadError(path.string(), line.number, "duplicate term '" + text::join(term, " ") + "'");
    terms.push_back(std::move(term));
  }
  if (terms.empty()) throw LoadError(path.string(), 0, "no terms");
  return ToILexicon(terms);
}

SimilarityTable load_similarity(const std::filesystem::path& path) {
  SimilarityTable table;
  std::set<std::pair<LemmaSeq, LemmaSeq>> seen;
  for (const auto& line : read_lines(path)) {
    const auto cols = text::split(line.text, '\t');
    if (cols.size() != 3) throw LoadError(path.string(), line.number, "expected seed<TAB>neighbor<TAB>score");
    SimilarityRow row{parse_term(path, line, cols[0]), parse_term(path, line, cols[1]), 0.0};
    auto score = to_double(cols[2]);
    if (!score) throw LoadError(path.string(), line.number, "bad score");
    if (*score < 0.0 || *score > 1.0) throw LoadError(path.string(), line.number, "similarity score outside [0, 1]");
    row.score = *score;
    if (!seen.emplace(row.seed, row.neighbor).second)
      throw LoadError(path.string(), line.number, "duplicate (seed, neighbor) pair");
    table.rows.push_back(std::move(row));
  }
  return table;
}

PolarityLexicon load_polarity(const std::filesystem::path& path, Dimension d) {
  const auto lines = read_lines(path, /*keep_comments=*/true);
  if (lines.empty()) throw LoadError(path.string(), 0, "missing #scale header");
  const auto header = text::trim(lines.front().text);
  bool nine_point = false;
  if (header == "#scale=[1,9]")
    nine_point = true;
  else if (header != "#scale=[-1,1]")
    throw LoadError(path.string(), lines.front().number, "expected '#scale=[-1,1]' or '#scale=[1,9]'");

  PolarityLexicon lex{d, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (text::trim(line.text).front() == '#') continue;
    const auto cols = text::split(line.text, '\t');
    if (cols.size() != 2) throw LoadError(path.string(), line.number, "expected lemma<TAB>score");
    const auto lemma = text::lower(text::trim(cols[0]));
    if (lemma.empty() || lemma.find(' ') != std::string::npos)
      throw LoadError(path.string(), line.number, "lemma must be a single non-empty token");
    auto score = to_double(cols[1]);
    if (!score) throw LoadError(path.string(), line.number, "bad score");
    if (nine_point) {
      if (*score < 1.0 || *score > 9.0) throw LoadError(path.string(), line.number, "score outside [1, 9]");
      *score = rescale_moral_valence(*score);
    } else if (*score < -1.0 || *score > 1.0) {
      throw LoadError(path.string(), line.number, fmt::format("score {} outside [-1, 1]", *score));
    }
    if (!lex.entries.emplace(lemma, *score).second)
      throw LoadError(path.string(), line.number, "duplicate lemma '" + lemma + "'");
  }
  return lex;
}

std::set<std::string> load_lemma_list(const std::filesystem::path& path) {
  std::set<std::string> out;
  for (const auto& line : read_lines(path)) {
    const auto w = text::words(line.text);
    if (w.size() != 1) throw LoadError(path.string(), line.number, "expected one lemma per line");
    out.insert(text::lower(w.front()));
  }
  return out;
}

Gazetteer load_gazetteer(const std::filesystem::path& names, const std::filesystem::path& rollup,
                         const std::filesystem::path& nationalities, const std::filesystem::path& regions) {
  Gazetteer g;
  for (auto& [n, row] : read_csv(regions, "nuts2,name")) {
    if (!g.region_names.emplace(row[0], row[1]).second)
      throw LoadError(regions.string(), n, "duplicate region " + row[0]);
  }
  for (auto& [n, row] : read_csv(rollup, "nuts3,nuts2")) {
    if (!g.region_names.contains(row[1]))
      throw LoadError(rollup.string(), n, "NUTS2 " + row[1] + " has no entry in " + regions.filename().string());
    if (!g.rollup.emplace(row[0], row[1]).second) throw LoadError(rollup.string(), n, "duplicate NUTS3 " + row[0]);
  }
  for (auto& [n, row] : read_csv(names, "name,nuts3")) {
    auto words = text::words(text::lower(row[0]));
    if (!g.rollup.contains(row[1]))
      throw LoadError(names.string(), n, "NUTS3 " + row[1] + " has no rollup entry");
    if (!g.places.emplace(std::move(words), row[1]).second)
      throw LoadError(names.string(), n, "duplicate place name '" + row[0] + "'");
  }
  for (auto& [n, row] : read_csv(nationalities, "adjective_lemma,code")) {
    if (!g.nationalities.emplace(text::lower(row[0]), row[1]).second)
      throw LoadError(nationalities.string(), n, "duplicate adjective " + row[0]);
  }
  g.reindex();
  return g;
}

LexiconBundle load_lexicons(const LexiconPaths& paths, double toi_threshold) {
  if (!(toi_threshold >= 0.0 && toi_threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
  LexiconBundle b;
  b.toi = load_toi(paths.toi);
  if (paths.similarity) b.toi = expand_toi(b.toi, load_similarity(*paths.similarity), toi_threshold);
  for (auto d : kDimensions) b.polarity[index_of(d)] = load_polarity(paths.polarity[index_of(d)], d);
  b.modifiers.negators = load_lemma_list(paths.negators);
  b.modifiers.intensifiers = load_lemma_list(paths.intensifiers);
  b.modifiers.female_terms = load_lemma_list(paths.female_terms);

  const auto check_disjoint = [](const std::set<std::string>& a, const std::set<std::string>& b,
                                 const std::filesystem::path& file) {
    for (const auto& l : a)
      if (b.contains(l)) throw LoadError(file.string(), 0, "lemma '" + l + "' appears in more than one modifier list");
  };
  check_disjoint(b.modifiers.negators, b.modifiers.intensifiers, paths.intensifiers);
  check_disjoint(b.modifiers.negators, b.modifiers.female_terms, paths.female_terms);
  check_disjoint(b.modifiers.intensifiers, b.modifiers.female_terms, paths.female_terms);

  b.gazetteer = load_gazetteer(paths.gazetteer, paths.rollup, paths.nationalities, paths.regions);
  return b;
}

}  // namespace toipol
