#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toipol/corpus.hpp"
#include "toipol/pattern.hpp"
#include "toipol/polarity.hpp"

namespace toipol {

/// Flat, serializable form of a scored LocatedPattern: one JSON-lines record.
struct PatternRecord {
  std::string doc_id;
  Date date{};
  std::string outlet;
  std::size_t sentence_index = 0;
  std::string toi_term;
  std::vector<int> member_indices;
  int negator_count = 0;
  std::vector<std::string> intensifiers;
  std::optional<std::string> nuts3;
  std::optional<std::string> nuts2;
  LocationSource location_source = LocationSource::none;
  Gender gender = Gender::non_female;
  PolarityVector polarity;

  int year() const { return static_cast<int>(date.year()); }

  bool operator==(const PatternRecord&) const = default;
};

PatternRecord to_record(const LocatedPattern& lp, const PolarityVector& polarity);

/// Fixed field order, polarity values with 6 decimals, absent location as null.
std::string to_jsonl(const PatternRecord& r);
void write_patterns(std::ostream& out, const std::vector<PatternRecord>& records);

/// Throws ParseError naming `source` and the line on schema violations.
PatternRecord parse_jsonl(std::string_view line, std::string_view source = "<patterns>", std::size_t lineno = 0);
std::vector<PatternRecord> read_patterns(std::istream& in, std::string_view source = "<patterns>");
std::vector<PatternRecord> read_patterns_file(const std::filesystem::path& path);

struct DayCounts {
  int article_count = 0;
  int outlet_count = 0;

  bool operator==(const DayCounts&) const = default;
};

using CorpusCounts = std::map<Date, DayCounts>;

/// Per-day accepted-article and distinct-outlet counts.
CorpusCounts count_corpus(const std::vector<Document>& docs);
void write_corpus_counts(std::ostream& out, const CorpusCounts& counts);
CorpusCounts read_corpus_counts(std::istream& in, std::string_view source = "<counts>");
CorpusCounts read_corpus_counts_file(const std::filesystem::path& path);

/// Fixed-point text with negative zero folded into zero.
std::string fixed(double v, int decimals);

}  // namespace toipol
