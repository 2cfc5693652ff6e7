#include "toipol/synth.hpp"

#include <array>
#include <chrono>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "toipol/corpus.hpp"

namespace toipol {

namespace {

// Raw engine output only: std distributions are not portable across
// standard libraries, and the corpus must be identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  const T& pick(std::span<const T> xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct Word {
  std::string_view surface;
  std::string_view lemma;
};

struct Term {
  std::vector<Word> words;  // last word is the head noun
};

const std::vector<Term> kTerms = {
    {{{"unemployment", "unemployment"}}},
    {{{"labour", "labour"}, {"market", "market"}}},
    {{{"job", "job"}, {"market", "market"}}},
    {{{"salaries", "salary"}}},
    {{{"job", "job"}, {"insecurity", "insecurity"}}},
    {{{"employment", "employment"}}},
    {{{"wage", "wage"}, {"growth", "growth"}}},
    {{{"job", "job"}, {"creation", "creation"}}},
    {{{"joblessness", "joblessness"}}},
    {{{"payroll", "payroll"}}},
    {{{"unemployment", "unemployment"}, {"benefits", "benefit"}}},
    {{{"employment", "employment"}, {"crisis", "crisis"}}},
    {{{"employment", "employment"}, {"growth", "growth"}}},
    {{{"job", "job"}, {"opportunities", "opportunity"}}},
};

const std::vector<std::vector<std::string_view>> kPlaces = {
    {"Madrid"},   {"Barcelona"}, {"Catalonia"}, {"Seville"},  {"Malaga"},   {"Valencia"},
    {"Bilbao"},   {"Basque", "Country"},      {"Zaragoza"},  {"Palma"},    {"Balearic", "Islands"},
    {"Santander"}, {"Oviedo"},   {"Murcia"},    {"Pamplona"}, {"La", "Rioja"}, {"Toledo"},
    {"Badajoz"},  {"Valladolid"}, {"Las", "Palmas"}};

const std::vector<std::string_view> kBaselineAdjectives = {"strong",   "robust", "steady",    "modest",
                                                           "positive", "weak",   "uncertain", "negative",
                                                           "promising", "recent", "overall"};
const std::vector<std::string_view> kTailAdjectives = {"devastating", "catastrophic", "severe"};
const std::vector<Word> kBaselineVerbs = {{"improves", "improve"}, {"grows", "grow"},      {"recovers", "recover"},
                                          {"stabilizes", "stabilize"}, {"falls", "fall"}, {"declines", "decline"},
                                          {"remains", "remain"},   {"rises", "rise"},     {"changes", "change"}};
const std::vector<Word> kTailVerbs = {{"worsens", "worsen"}, {"collapses", "collapse"}, {"declines", "decline"}};
const std::vector<std::string_view> kBaselineObjects = {"concern", "hope",    "uncertainty", "progress", "optimism",
                                                        "support", "equality", "solidarity", "regulation", "freedom",
                                                        "access",  "debate",  "attention",   "pressure", "interest"};
const std::vector<std::string_view> kTailObjects = {"hardship", "discrimination", "uncertainty"};
const std::vector<std::string_view> kFillerNouns = {
    "report", "institute", "statistics", "survey",  "quarter", "ministry", "region",  "sector",
    "economy", "data",     "analysis",   "committee", "council", "agency",  "office",  "service",
    "industry", "company", "province",   "period",  "study",   "figure",   "series",  "estimate"};
const std::vector<std::string_view> kFillerAdjectives = {"national", "latest", "public",  "annual", "regional",
                                                         "quarterly", "official", "local", "private"};

struct Outlet {
  std::string_view name;
  Scope scope;
};
const std::vector<Outlet> kOutlets = {{"El Pais", Scope::national},       {"El Mundo", Scope::national},
                                      {"ABC", Scope::national},           {"La Razon", Scope::national},
                                      {"Expansion", Scope::national},     {"La Vanguardia", Scope::regional},
                                      {"El Correo", Scope::regional},     {"Levante", Scope::regional},
                                      {"Diario de Sevilla", Scope::regional}, {"Heraldo de Aragon", Scope::regional},
                                      {"La Voz de Galicia", Scope::regional}, {"Diario de Navarra", Scope::regional}};

/// Tokens appended in linear order; heads are wired by node id afterwards.
class TreeBuilder {
 public:
  int add(std::string_view surface, std::string_view lemma, std::string_view upos, std::string_view deprel,
          int head = -1) {
    nodes_.push_back({std::string(surface), std::string(lemma), std::string(upos), std::string(deprel), head});
    return static_cast<int>(nodes_.size()) - 1;
  }
  void attach(int id, int head) { nodes_[static_cast<std::size_t>(id)].head = head; }
  void relabel(int id, std::string_view deprel) { nodes_[static_cast<std::size_t>(id)].deprel = deprel; }
  std::size_t size() const { return nodes_.size(); }

  Sentence build() const {
    Sentence s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      s.tokens.push_back(Token{static_cast<int>(i) + 1, n.surface, n.lemma, n.upos, n.head + 1, n.deprel});
    }
    return s;
  }

 private:
  struct Node {
    std::string surface, lemma, upos, deprel;
    int head;  // node id, -1 for the root
  };
  std::vector<Node> nodes_;
};

std::string lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Chain of "of the (adj) noun" modifiers hanging off `head`.
void add_filler_chain(TreeBuilder& t, Rng& rng, int head, std::size_t links) {
  int current = head;
  for (std::size_t i = 0; i < links; ++i) {
    const int of = t.add("of", "of", "ADP", "case");
    const int det = t.add("the", "the", "DET", "det");
    int adj = -1;
    if (rng.chance(0.3)) {
      auto a = rng.pick(std::span(kFillerAdjectives));
      adj = t.add(a, a, "ADJ", "amod");
    }
    auto n = rng.pick(std::span(kFillerNouns));
    const int noun = t.add(n, n, "NOUN", "nmod", current);
    t.attach(of, noun);
    t.attach(det, noun);
    if (adj >= 0) t.attach(adj, noun);
    current = noun;
  }
}

class Generator {
 public:
  explicit Generator(const SynthConfig& c) : config_(c), rng_(c.seed) {}

  Document document(std::size_t index, SynthStats& stats) {
    Document doc;
    doc.doc_id = fmt::format("syn-{:06d}", index);
    doc.date = random_date();
    const auto& outlet = rng_.pick(std::span(kOutlets));
    doc.outlet = std::string(outlet.name);
    doc.scope = outlet.scope;
    main_place_ = &rng_.pick(std::span(kPlaces));

    const bool has_toi = !rng_.chance(config_.no_toi_doc_rate);
    const std::size_t toi_sentences = has_toi ? 1 + rng_.below(3) : 0;
    const std::size_t filler_sentences = 1 + rng_.below(2);
    std::vector<bool> kinds(toi_sentences, true);
    kinds.insert(kinds.end(), filler_sentences, false);
    // Fisher-Yates with the portable engine.
    for (std::size_t i = kinds.size(); i > 1; --i) {
      const std::size_t j = rng_.below(i);
      const bool tmp = kinds[i - 1];
      kinds[i - 1] = kinds[j];
      kinds[j] = tmp;
    }
    for (bool toi : kinds) doc.sentences.push_back(toi ? toi_sentence(stats) : filler_sentence());
    for (const auto& s : doc.sentences) stats.tokens += s.size();
    stats.sentences += doc.sentences.size();
    ++stats.documents;
    return doc;
  }

 private:
  Date random_date() {
    using namespace std::chrono;
    const sys_days first{year{config_.first_year} / January / 1};
    const sys_days last{year{config_.last_year} / December / 31};
    const auto span = static_cast<std::size_t>((last - first).count()) + 1;
    return year_month_day{first + days{static_cast<int>(rng_.below(span))}};
  }

  const std::vector<std::string_view>& some_place() {
    return rng_.chance(0.8) ? *main_place_ : rng_.pick(std::span(kPlaces));
  }

  /// Term words as a compound chain; returns the head noun, labelled `deprel`.
  int term_phrase(TreeBuilder& t, const Term& term, std::string_view deprel) {
    std::vector<int> ids;
    for (const auto& w : term.words) ids.push_back(t.add(w.surface, w.lemma, "NOUN", "compound"));
    const int head = ids.back();
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.attach(ids[i], head);
    t.relabel(head, deprel);
    return head;
  }

  Sentence toi_sentence(SynthStats& stats) {
    TreeBuilder t;
    const bool female = rng_.chance(config_.female_rate);
    const bool tail = female && rng_.chance(config_.female_tail_rate);
    const bool located = rng_.chance(config_.located_rate);
    const bool place_first = located && rng_.chance(0.5);
    const auto& place = located ? some_place() : *main_place_;
    enum class Marker { adjective, women, mothers } marker = Marker::adjective;
    if (female) marker = static_cast<Marker>(rng_.below(3));

    std::vector<std::pair<int, std::string_view>> verb_dependents;  // (id, relation)

    if (place_first) {
      const int in = t.add("In", "in", "ADP", "case");
      std::vector<int> ids;
      for (auto w : place) ids.push_back(t.add(w, lower_copy(w), "PROPN", "compound"));
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.attach(ids[i], ids.back());
      t.attach(in, ids.back());
      verb_dependents.emplace_back(ids.back(), "obl");
      verb_dependents.emplace_back(t.add(",", ",", "PUNCT", "punct"), "punct");
    }

    // Subject: the (very) ADJ (female) TERM (of mothers)
    const int det = t.add(place_first ? "the" : "The", "the", "DET", "det");
    int adj = -1;
    if (tail || rng_.chance(0.8)) {
      int intens = -1;
      if (rng_.chance(tail ? 0.7 : 0.1)) intens = t.add("very", "very", "ADV", "advmod");
      const auto a = tail ? rng_.pick(std::span(kTailAdjectives)) : rng_.pick(std::span(kBaselineAdjectives));
      adj = t.add(a, a, "ADJ", "amod");
      if (intens >= 0) t.attach(intens, adj);
    }
    int female_adj = -1;
    if (female && marker == Marker::adjective) female_adj = t.add("female", "female", "ADJ", "amod");
    const int subj = term_phrase(t, rng_.pick(std::span(kTerms)), "nsubj");
    ++stats.planted_patterns;
    t.attach(det, subj);
    if (adj >= 0) t.attach(adj, subj);
    if (female_adj >= 0) t.attach(female_adj, subj);
    if (female && marker == Marker::mothers) {
      const int of = t.add("of", "of", "ADP", "case");
      const int m = t.add("mothers", "mother", "NOUN", "nmod", subj);
      t.attach(of, m);
    }

    // Predicate: (not) VERB
    int neg = -1;
    if (!tail && rng_.chance(0.08)) {
      t.add("does", "do", "AUX", "aux");
      neg = t.add("not", "not", "PART", "advmod");
    }
    const int aux = neg >= 0 ? neg - 1 : -1;
    const auto& verb = tail ? rng_.pick(std::span(kTailVerbs)) : rng_.pick(std::span(kBaselineVerbs));
    const int root = t.add(neg >= 0 ? verb.lemma : verb.surface, verb.lemma, "VERB", "root");
    t.attach(subj, root);
    if (neg >= 0) {
      t.attach(neg, root);
      t.attach(aux, root);
    }

    // Object: the (adj) NOUN | a second term
    const int odet = t.add("the", "the", "DET", "det");
    int obj;
    if (!tail && rng_.chance(0.1)) {
      obj = term_phrase(t, rng_.pick(std::span(kTerms)), "obj");
      ++stats.planted_patterns;
    } else {
      if (rng_.chance(0.3)) {
        auto a = rng_.pick(std::span(kFillerAdjectives));
        const int oa = t.add(a, a, "ADJ", "amod");
        const auto n = tail ? rng_.pick(std::span(kTailObjects)) : rng_.pick(std::span(kBaselineObjects));
        obj = t.add(n, n, "NOUN", "obj");
        t.attach(oa, obj);
      } else {
        const auto n = tail ? rng_.pick(std::span(kTailObjects)) : rng_.pick(std::span(kBaselineObjects));
        obj = t.add(n, n, "NOUN", "obj");
      }
    }
    t.attach(odet, obj);
    t.attach(obj, root);
    add_filler_chain(t, rng_, obj, 3 + rng_.below(8));

    if (female && marker == Marker::women) {
      const int f = t.add("for", "for", "ADP", "case");
      const int w = t.add("women", "woman", "NOUN", "obl", root);
      t.attach(f, w);
    }
    if (rng_.chance(0.5)) {
      const int acc = t.add("according", "accord", "VERB", "case");
      t.add("to", "to", "ADP", "fixed", acc);
      const int d2 = t.add("the", "the", "DET", "det");
      const auto n = rng_.pick(std::span(kFillerNouns));
      const int src = t.add(n, n, "NOUN", "obl", root);
      t.attach(acc, src);
      t.attach(d2, src);
      add_filler_chain(t, rng_, src, rng_.below(3));
    }
    if (located && !place_first) {
      const int in = t.add("in", "in", "ADP", "case");
      std::vector<int> ids;
      for (auto w : place) ids.push_back(t.add(w, lower_copy(w), "PROPN", "compound"));
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.attach(ids[i], ids.back());
      t.attach(in, ids.back());
      verb_dependents.emplace_back(ids.back(), "obl");
    }
    verb_dependents.emplace_back(t.add(".", ".", "PUNCT", "punct"), "punct");
    for (auto [id, rel] : verb_dependents) {
      t.attach(id, root);
      t.relabel(id, rel);
    }
    (located ? stats.located_pattern_sentences : stats.unlocated_pattern_sentences) += 1;
    return t.build();
  }

  Sentence filler_sentence() {
    TreeBuilder t;
    int nat = -1;
    if (rng_.chance(0.1)) nat = t.add("Spanish", "spanish", "ADJ", "amod");
    const int subj = t.add(nat >= 0 ? "officials" : "Officials", "official", "NOUN", "nsubj");
    if (nat >= 0) t.attach(nat, subj);
    const int in = t.add("in", "in", "ADP", "case");
    std::vector<int> ids;
    for (auto w : *main_place_) ids.push_back(t.add(w, lower_copy(w), "PROPN", "compound"));
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.attach(ids[i], ids.back());
    t.attach(in, ids.back());
    t.attach(ids.back(), subj);
    t.relabel(ids.back(), "nmod");
    const int root = t.add("presented", "present", "VERB", "root");
    t.attach(subj, root);
    const int det = t.add("the", "the", "DET", "det");
    const auto n = rng_.pick(std::span(kFillerNouns));
    const int obj = t.add(n, n, "NOUN", "obj", root);
    t.attach(det, obj);
    add_filler_chain(t, rng_, obj, 6 + rng_.below(10));
    t.add(".", ".", "PUNCT", "punct", root);
    return t.build();
  }

  SynthConfig config_;
  Rng rng_;
  const std::vector<std::string_view>* main_place_ = nullptr;
};

}  // namespace

SynthStats write_synthetic_corpus(std::ostream& out, const SynthConfig& config) {
  Generator gen(config);
  SynthStats stats;
  for (std::size_t i = 0; i < config.documents; ++i) write_conllu(out, gen.document(i, stats));
  return stats;
}

}  // namespace toipol
