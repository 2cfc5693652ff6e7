#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toipol/corpus.hpp"
#include "toipol/lexicon.hpp"

namespace toipol {

/// One ToI occurrence; start/end are inclusive 1-based token indices.
struct ToISpan {
  std::size_t sentence_index = 0;
  int start = 0;
  int end = 0;
  LemmaSeq matched_term;

  bool operator==(const ToISpan&) const = default;
};

struct PatternMember {
  int index = 0;     // token index in the sentence
  int distance = 0;  // dependency hops from the nearest ToI token

  bool operator==(const PatternMember&) const = default;
};

struct Pattern {
  ToISpan toi;
  std::vector<PatternMember> members;  // sorted by (distance, index)
  int negator_count = 0;
  std::vector<std::string> intensifier_lemmas;

  bool operator==(const Pattern&) const = default;
};

enum class LocationSource { sentence, article_fallback, none };
enum class Gender { female, non_female };

std::string_view to_string(LocationSource s);
std::optional<LocationSource> parse_location_source(std::string_view s);
std::string_view to_string(Gender g);
std::optional<Gender> parse_gender(std::string_view s);

struct LocatedPattern {
  Pattern pattern;
  std::string doc_id;
  Date date{};
  std::string outlet;
  std::optional<std::string> nuts3;  // NUTS3, or a country-level code from a nationality adjective
  std::optional<std::string> nuts2;  // rollup of nuts3 when it is a NUTS3 code
  LocationSource location_source = LocationSource::none;
  Gender gender = Gender::non_female;

  bool operator==(const LocatedPattern&) const = default;
};

/// Maximum dependency distance of a pattern member from the ToI.
inline constexpr int kTraversalRadius = 2;

/// True when a child attached with `deprel` may be entered from its head.
bool traversable_relation(std::string_view deprel);

/// Leftmost-longest, non-overlapping ToI matches over the sentence lemmas.
std::vector<ToISpan> find_toi_occurrences(const Sentence& sentence, const ToILexicon& toi,
                                          std::size_t sentence_index = 0);

/// Dependency neighborhood of a ToI occurrence within kTraversalRadius hops.
Pattern extract_pattern(const Sentence& sentence, const ToISpan& span, const ModifierLists& mods);

struct PlaceMatch {
  int start = 0;  // inclusive, 1-based
  int end = 0;
  std::string code;

  bool operator==(const PlaceMatch&) const = default;
};

/// Gazetteer hits in a sentence: leftmost-longest place names over lowercased
/// surface forms, then nationality adjectives by lemma where no name matched.
std::vector<PlaceMatch> find_places(const Sentence& sentence, const Gazetteer& gaz);

/// Most frequent gazetteer code over the whole document; ties go to the code
/// seen first.
std::optional<std::string> main_location(const Document& doc, const Gazetteer& gaz);

struct LocationResult {
  std::optional<std::string> code;
  LocationSource source = LocationSource::none;

  bool operator==(const LocationResult&) const = default;
};

/// The place nearest the ToI in its own sentence, else the article's main
/// location, else nothing.
LocationResult resolve_location(const Sentence& sentence, const ToISpan& span, const Document& doc,
                                const Gazetteer& gaz);

Gender detect_gender(const Sentence& sentence, const ModifierLists& mods);

/// Every ToI occurrence of the document with its pattern, location and gender,
/// ordered by (sentence, span start).
std::vector<LocatedPattern> extract_all(const Document& doc, const LexiconBundle& bundle);

}  // namespace toipol
