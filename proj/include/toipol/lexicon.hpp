#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace toipol {

enum class Dimension { sentiment, care, fairness, loyalty, authority, purity, liberty };

inline constexpr std::size_t kDimensionCount = 7;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::sentiment, Dimension::care,   Dimension::fairness, Dimension::loyalty,
    Dimension::authority, Dimension::purity, Dimension::liberty};

std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);
constexpr std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

using LemmaSeq = std::vector<std::string>;

// Hash key for a token sequence; lemmas never contain the unit separator.
std::string seq_key(std::span<const std::string> seq);

/// Terms of interest: contiguous lemma sequences of 1 to 4 lowercased lemmas.
class ToILexicon {
 public:
  static constexpr std::size_t kMaxTermLength = 4;

  ToILexicon() = default;
  /// Throws std::invalid_argument on an empty set, empty/overlong terms or
  /// non-lowercase lemmas. Duplicates collapse.
  explicit ToILexicon(const std::vector<LemmaSeq>& terms);

  const std::set<LemmaSeq>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t max_length() const noexcept { return max_length_; }
  bool contains(std::span<const std::string> lemmas) const;

  bool operator==(const ToILexicon& o) const { return terms_ == o.terms_; }

 private:
  std::set<LemmaSeq> terms_;
  std::unordered_set<std::string> keys_;
  std::size_t max_length_ = 0;
};

struct SimilarityRow {
  LemmaSeq seed;
  LemmaSeq neighbor;
  double score = 0.0;

  bool operator==(const SimilarityRow&) const = default;
};

struct SimilarityTable {
  std::vector<SimilarityRow> rows;

  bool operator==(const SimilarityTable&) const = default;
};

/// Single-pass expansion: seeds plus every neighbor of a seed scoring at or
/// above `threshold`. Neighbors of added neighbors are not followed.
ToILexicon expand_toi(const ToILexicon& seeds, const SimilarityTable& table, double threshold = 0.7);

/// Maps a 1..9 moral valence onto [-1, +1] as (raw - 5) / 4.
/// Throws std::domain_error outside [1, 9].
double rescale_moral_valence(double raw);

struct PolarityLexicon {
  Dimension dimension = Dimension::sentiment;
  std::unordered_map<std::string, double> entries;

  double score(std::string_view lemma) const;

  bool operator==(const PolarityLexicon&) const = default;
};

struct ModifierLists {
  std::set<std::string> negators;
  std::set<std::string> intensifiers;
  std::set<std::string> female_terms;

  bool is_negator(const std::string& lemma) const { return negators.contains(lemma); }
  bool is_intensifier(const std::string& lemma) const { return intensifiers.contains(lemma); }
  bool is_female(const std::string& lemma) const { return female_terms.contains(lemma); }

  bool operator==(const ModifierLists&) const = default;
};

struct Gazetteer {
  std::map<LemmaSeq, std::string> places;             // lowercased name words -> NUTS3
  std::map<std::string, std::string> nationalities;   // adjective lemma -> country or NUTS code
  std::map<std::string, std::string> rollup;          // NUTS3 -> NUTS2
  std::map<std::string, std::string> region_names;    // NUTS2 -> display name

  /// Rebuilds the lookup index; call after editing `places` by hand.
  void reindex();

  std::optional<std::string> place_code(std::span<const std::string> lowered_words) const;
  std::optional<std::string> nationality_code(const std::string& lemma) const;
  /// NUTS2 region of a NUTS3 code; country-level and foreign codes have none.
  std::optional<std::string> nuts2_of(const std::string& code) const;
  std::size_t max_name_length() const noexcept { return max_name_length_; }

  bool operator==(const Gazetteer& o) const {
    return places == o.places && nationalities == o.nationalities && rollup == o.rollup &&
           region_names == o.region_names;
  }

 private:
  std::unordered_map<std::string, std::string> index_;
  std::size_t max_name_length_ = 0;
};

struct LexiconBundle {
  ToILexicon toi;
  std::array<PolarityLexicon, kDimensionCount> polarity;
  Gazetteer gazetteer;
  ModifierLists modifiers;

  const PolarityLexicon& lexicon(Dimension d) const { return polarity[index_of(d)]; }

  bool operator==(const LexiconBundle&) const = default;
};

/// Lexicon score of `lemma` in dimension `d`, 0 when absent.
double token_polarity(const LexiconBundle& bundle, std::string_view lemma, Dimension d);

struct LexiconPaths {
  std::filesystem::path toi;
  std::optional<std::filesystem::path> similarity;
  std::array<std::filesystem::path, kDimensionCount> polarity;
  std::filesystem::path negators;
  std::filesystem::path intensifiers;
  std::filesystem::path female_terms;
  std::filesystem::path gazetteer;
  std::filesystem::path rollup;
  std::filesystem::path nationalities;
  std::filesystem::path regions;

  /// Standard file names inside one directory; similarity.tsv is optional.
  static LexiconPaths in_directory(const std::filesystem::path& dir);
  std::vector<std::filesystem::path> all() const;
};

// Individual loaders; each throws LoadError with file and line.
ToILexicon load_toi(const std::filesystem::path& path);
SimilarityTable load_similarity(const std::filesystem::path& path);
PolarityLexicon load_polarity(const std::filesystem::path& path, Dimension d);
std::set<std::string> load_lemma_list(const std::filesystem::path& path);
Gazetteer load_gazetteer(const std::filesystem::path& names, const std::filesystem::path& rollup,
                         const std::filesystem::path& nationalities, const std::filesystem::path& regions);

/// Loads and cross-validates every resource, expanding the ToI seeds with the
/// similarity table when one is configured.
LexiconBundle load_lexicons(const LexiconPaths& paths, double toi_threshold = 0.7);

}  // namespace toipol
