#include "toipol/pattern.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>

#include "toipol/text.hpp"

namespace toipol {

namespace {

constexpr std::array<std::string_view, 11> kTraversalRelations = {
    "amod", "advmod", "neg", "compound", "nsubj", "obj", "dobj", "ccomp", "xcomp", "acomp", "conj"};

std::string_view base_relation(std::string_view deprel) { return deprel.substr(0, deprel.find(':')); }

bool excluded(const Token& t) {
  const auto rel = base_relation(t.deprel);
  return t.upos == "PUNCT" || t.upos == "DET" || rel == "punct" || rel == "det";
}

int span_gap(int a_start, int a_end, int b_start, int b_end) {
  if (a_end < b_start) return b_start - a_end;
  if (b_end < a_start) return a_start - b_end;
  return 0;
}

std::optional<std::string> nearest_place(const std::vector<PlaceMatch>& places, const ToISpan& span) {
  const PlaceMatch* best = nullptr;
  int best_gap = 0;
  for (const auto& p : places) {  // already in left-to-right order
    const int gap = span_gap(p.start, p.end, span.start, span.end);
    if (!best || gap < best_gap) {
      best = &p;
      best_gap = gap;
    }
  }
  if (!best) return std::nullopt;
  return best->code;
}

LocationResult resolve_with(const Sentence& sentence, const ToISpan& span, const Gazetteer& gaz,
                            const std::optional<std::string>& fallback) {
  if (auto code = nearest_place(find_places(sentence, gaz), span)) return {std::move(code), LocationSource::sentence};
  if (fallback) return {fallback, LocationSource::article_fallback};
  return {};
}

}  // namespace

std::string_view to_string(LocationSource s) {
  switch (s) {
    case LocationSource::sentence:
      return "sentence";
    case LocationSource::article_fallback:
      return "article_fallback";
    case LocationSource::none:
      break;
  }
  return "none";
}

std::optional<LocationSource> parse_location_source(std::string_view s) {
  for (auto v : {LocationSource::sentence, LocationSource::article_fallback, LocationSource::none})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string_view to_string(Gender g) { return g == Gender::female ? "female" : "non_female"; }

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "female") return Gender::female;
  if (s == "non_female") return Gender::non_female;
  return std::nullopt;
}

bool traversable_relation(std::string_view deprel) {
  const auto rel = base_relation(deprel);
  return std::find(kTraversalRelations.begin(), kTraversalRelations.end(), rel) != kTraversalRelations.end();
}

std::vector<ToISpan> find_toi_occurrences(const Sentence& sentence, const ToILexicon& toi,
                                          std::size_t sentence_index) {
  std::vector<std::string> lemmas;
  lemmas.reserve(sentence.size());
  for (const auto& t : sentence.tokens) lemmas.push_back(t.lemma);

  std::vector<ToISpan> spans;
  const std::size_t n = lemmas.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(toi.max_length(), n - i); len >= 1; --len) {
      if (toi.contains(std::span(lemmas).subspan(i, len))) {
        matched = len;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    ToISpan s;
    s.sentence_index = sentence_index;
    s.start = static_cast<int>(i) + 1;
    s.end = static_cast<int>(i + matched);
    s.matched_term.assign(lemmas.begin() + static_cast<std::ptrdiff_t>(i),
                          lemmas.begin() + static_cast<std::ptrdiff_t>(i + matched));
    spans.push_back(std::move(s));
    i += matched;
  }
  return spans;
}

Pattern extract_pattern(const Sentence& sentence, const ToISpan& span, const ModifierLists& mods) {
  const int n = static_cast<int>(sentence.size());
  std::vector<std::vector<int>> children(static_cast<std::size_t>(n) + 1);
  for (const auto& t : sentence.tokens) children[static_cast<std::size_t>(t.head)].push_back(t.index);

  std::vector<int> dist(static_cast<std::size_t>(n) + 1, -1);
  std::deque<int> queue;
  for (int i = span.start; i <= span.end; ++i) {
    dist[static_cast<std::size_t>(i)] = 0;
    queue.push_back(i);
  }
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(cur)];
    if (d == kTraversalRadius) continue;

    const auto visit = [&](int next) {
      auto& slot = dist[static_cast<std::size_t>(next)];
      if (slot != -1 || excluded(sentence.at(next))) return;
      slot = d + 1;
      queue.push_back(next);
    };
    if (const int head = sentence.at(cur).head; head != 0) visit(head);
    for (int child : children[static_cast<std::size_t>(cur)])
      if (traversable_relation(sentence.at(child).deprel)) visit(child);
  }

  Pattern p;
  p.toi = span;
  for (int i = 1; i <= n; ++i) {
    const int d = dist[static_cast<std::size_t>(i)];
    if (d > 0) p.members.push_back({i, d});
  }
  std::sort(p.members.begin(), p.members.end(),
            [](const PatternMember& a, const PatternMember& b) { return std::tie(a.distance, a.index) < std::tie(b.distance, b.index); });
  for (const auto& m : p.members) {
    const Token& t = sentence.at(m.index);
    if (mods.is_negator(t.lemma) || base_relation(t.deprel) == "neg") ++p.negator_count;
    if (mods.is_intensifier(t.lemma)) p.intensifier_lemmas.push_back(t.lemma);
  }
  return p;
}

std::vector<PlaceMatch> find_places(const Sentence& sentence, const Gazetteer& gaz) {
  std::vector<std::string> words;
  words.reserve(sentence.size());
  for (const auto& t : sentence.tokens) words.push_back(text::lower(t.surface));

  std::vector<PlaceMatch> out;
  const std::size_t n = words.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t matched = 0;
    std::optional<std::string> code;
    for (std::size_t len = std::min(gaz.max_name_length(), n - i); len >= 1; --len) {
      if ((code = gaz.place_code(std::span(words).subspan(i, len)))) {
        matched = len;
        break;
      }
    }
    if (!matched) {
      if ((code = gaz.nationality_code(sentence.tokens[i].lemma))) matched = 1;
    }
    if (!matched) {
      ++i;
      continue;
    }
    out.push_back({static_cast<int>(i) + 1, static_cast<int>(i + matched), std::move(*code)});
    i += matched;
  }
  return out;
}

std::optional<std::string> main_location(const Document& doc, const Gazetteer& gaz) {
  std::map<std::string, std::pair<int, std::size_t>> tally;  // code -> (count, first occurrence rank)
  std::size_t rank = 0;
  for (const auto& s : doc.sentences) {
    for (auto& p : find_places(s, gaz)) {
      auto [it, fresh] = tally.try_emplace(p.code, 0, rank);
      ++it->second.first;
      ++rank;
    }
  }
  const std::pair<const std::string, std::pair<int, std::size_t>>* best = nullptr;
  for (const auto& entry : tally) {
    if (!best || entry.second.first > best->second.first ||
        (entry.second.first == best->second.first && entry.second.second < best->second.second))
      best = &entry;
  }
  if (!best) return std::nullopt;
  return best->first;
}

LocationResult resolve_location(const Sentence& sentence, const ToISpan& span, const Document& doc,
                                const Gazetteer& gaz) {
  if (auto code = nearest_place(find_places(sentence, gaz), span)) return {std::move(code), LocationSource::sentence};
  if (auto code = main_location(doc, gaz)) return {std::move(code), LocationSource::article_fallback};
  return {};
}

Gender detect_gender(const Sentence& sentence, const ModifierLists& mods) {
  for (const auto& t : sentence.tokens)
    if (mods.is_female(t.lemma)) return Gender::female;
  return Gender::non_female;
}

std::vector<LocatedPattern> extract_all(const Document& doc, const LexiconBundle& bundle) {
  std::vector<LocatedPattern> out;
  std::optional<std::optional<std::string>> fallback;  // computed on first need
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& s = doc.sentences[si];
    const auto spans = find_toi_occurrences(s, bundle.toi, si);
    if (spans.empty()) continue;
    const Gender gender = detect_gender(s, bundle.modifiers);
    for (const auto& span : spans) {
      LocatedPattern lp;
      lp.pattern = extract_pattern(s, span, bundle.modifiers);
      lp.doc_id = doc.doc_id;
      lp.date = doc.date;
      lp.outlet = doc.outlet;
      if (!fallback) fallback = main_location(doc, bundle.gazetteer);
      auto loc = resolve_with(s, span, bundle.gazetteer, *fallback);
      lp.location_source = loc.source;
      if (loc.code) {
        lp.nuts2 = bundle.gazetteer.nuts2_of(*loc.code);
        lp.nuts3 = std::move(loc.code);
      }
      lp.gender = gender;
      out.push_back(std::move(lp));
    }
  }
  return out;
}

}  // namespace toipol
