#include "toipol/records.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "toipol/error.hpp"
#include "toipol/text.hpp"

namespace toipol {

using nlohmann::json;

std::string fixed(double v, int decimals) {
  auto s = fmt::format("{:.{}f}", v, decimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

PatternRecord to_record(const LocatedPattern& lp, const PolarityVector& polarity) {
  PatternRecord r;
  r.doc_id = lp.doc_id;
  r.date = lp.date;
  r.outlet = lp.outlet;
  r.sentence_index = lp.pattern.toi.sentence_index;
  r.toi_term = text::join(lp.pattern.toi.matched_term, " ");
  for (const auto& m : lp.pattern.members) r.member_indices.push_back(m.index);
  r.negator_count = lp.pattern.negator_count;
  r.intensifiers = lp.pattern.intensifier_lemmas;
  r.nuts3 = lp.nuts3;
  r.nuts2 = lp.nuts2;
  r.location_source = lp.location_source;
  r.gender = lp.gender;
  r.polarity = polarity;
  return r;
}

std::string to_jsonl(const PatternRecord& r) {
  const auto str = [](std::string_view s) { return json(s).dump(); };
  const auto opt = [&](const std::optional<std::string>& s) { return s ? str(*s) : std::string("null"); };
  std::string out = fmt::format(R"({{"doc_id":{},"date":"{}","outlet":{},"sentence_index":{},"toi_term":{},)",
                                str(r.doc_id), format_date(r.date), str(r.outlet), r.sentence_index, str(r.toi_term));
  out += fmt::format(R"("member_indices":{},"negator_count":{},"intensifiers":{},)", json(r.member_indices).dump(),
                     r.negator_count, json(r.intensifiers).dump());
  out += fmt::format(R"("nuts3":{},"nuts2":{},"location_source":"{}","gender":"{}")", opt(r.nuts3), opt(r.nuts2),
                     to_string(r.location_source), to_string(r.gender));
  for (auto d : kDimensions) out += fmt::format(R"(,"{}":{})", to_string(d), fixed(r.polarity[d], 6));
  out += '}';
  return out;
}

void write_patterns(std::ostream& out, const std::vector<PatternRecord>& records) {
  for (const auto& r : records) out << to_jsonl(r) << '\n';
}

PatternRecord parse_jsonl(std::string_view line, std::string_view source, std::size_t lineno) {
  const auto fail = [&](const std::string& what) { return ParseError(std::string(source), lineno, what); };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  try {
    PatternRecord r;
    r.doc_id = j.at("doc_id").get<std::string>();
    auto d = parse_date(j.at("date").get<std::string>());
    if (!d) throw fail("bad date");
    r.date = *d;
    r.outlet = j.at("outlet").get<std::string>();
    r.sentence_index = j.at("sentence_index").get<std::size_t>();
    r.toi_term = j.at("toi_term").get<std::string>();
    r.member_indices = j.at("member_indices").get<std::vector<int>>();
    r.negator_count = j.at("negator_count").get<int>();
    r.intensifiers = j.at("intensifiers").get<std::vector<std::string>>();
    if (!j.at("nuts3").is_null()) r.nuts3 = j["nuts3"].get<std::string>();
    if (!j.at("nuts2").is_null()) r.nuts2 = j["nuts2"].get<std::string>();
    auto src = parse_location_source(j.at("location_source").get<std::string>());
    auto gender = parse_gender(j.at("gender").get<std::string>());
    if (!src) throw fail("bad location_source");
    if (!gender) throw fail("bad gender");
    r.location_source = *src;
    r.gender = *gender;
    for (auto dim : kDimensions) {
      const double v = j.at(std::string(to_string(dim))).get<double>();
      if (!(v >= -1.0 && v <= 1.0)) throw fail(fmt::format("{} outside [-1, 1]", to_string(dim)));
      r.polarity[dim] = v;
    }
    return r;
  } catch (const json::exception& e) {
    throw fail(std::string("schema: ") + e.what());
  }
}

std::vector<PatternRecord> read_patterns(std::istream& in, std::string_view source) {
  std::vector<PatternRecord> out;
  std::string buf;
  std::size_t n = 0;
  while (std::getline(in, buf)) {
    ++n;
    if (text::trim(buf).empty()) continue;
    out.push_back(parse_jsonl(buf, source, n));
  }
  return out;
}

std::vector<PatternRecord> read_patterns_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_patterns(in, path.string());
}

CorpusCounts count_corpus(const std::vector<Document>& docs) {
  std::map<Date, std::pair<int, std::set<std::string>>> tally;
  for (const auto& d : docs) {
    auto& slot = tally[d.date];
    ++slot.first;
    slot.second.insert(d.outlet);
  }
  CorpusCounts out;
  for (auto& [date, slot] : tally) out[date] = {slot.first, static_cast<int>(slot.second.size())};
  return out;
}

void write_corpus_counts(std::ostream& out, const CorpusCounts& counts) {
  out << "date,article_count,outlet_count\n";
  for (const auto& [date, c] : counts) out << format_date(date) << ',' << c.article_count << ',' << c.outlet_count << '\n';
}

CorpusCounts read_corpus_counts(std::istream& in, std::string_view source) {
  CorpusCounts out;
  std::string buf;
  std::size_t n = 0;
  bool header = true;
  while (std::getline(in, buf)) {
    ++n;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    if (text::trim(buf).empty()) continue;
    if (header) {
      if (text::trim(buf) != "date,article_count,outlet_count")
        throw ParseError(std::string(source), n, "expected header 'date,article_count,outlet_count'");
      header = false;
      continue;
    }
    const auto cols = text::split(buf, ',');
    if (cols.size() != 3) throw ParseError(std::string(source), n, "expected 3 columns");
    auto date = parse_date(text::trim(cols[0]));
    int articles = 0, outlets = 0;
    const auto parse_int = [](std::string_view s, int& v) {
      s = text::trim(s);
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc{} && p == s.data() + s.size() && v >= 0;
    };
    if (!date || !parse_int(cols[1], articles) || !parse_int(cols[2], outlets))
      throw ParseError(std::string(source), n, "malformed row");
    if (!out.emplace(*date, DayCounts{articles, outlets}).second)
      throw ParseError(std::string(source), n, "duplicate date " + format_date(*date));
  }
  return out;
}

CorpusCounts read_corpus_counts_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_corpus_counts(in, path.string());
}

}  // namespace toipol
