#include "toipol/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "toipol/corpus.hpp"
#include "toipol/error.hpp"
#include "toipol/lexicon.hpp"
#include "toipol/pattern.hpp"
#include "toipol/records.hpp"
#include "toipol/stats.hpp"

namespace toipol {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void RunConfig::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("--threshold must lie in [0, 1]");
  if (window_days < 1) throw ConfigError("--window must be at least 1");
  if (!(propagation.negation_factor > 0.0)) throw ConfigError("--negation-factor must be positive");
  if (!(propagation.intensifier_factor > 0.0)) throw ConfigError("--intensifier-factor must be positive");
  if (workers < 1) throw ConfigError("--workers must be at least 1");
  if (out.empty()) throw ConfigError("--out is required");
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

/// Writes to `<name>.tmp` and renames on commit; abandoned files are removed.
class StagedFile {
 public:
  explicit StagedFile(fs::path target) : target_(std::move(target)), tmp_(target_.string() + ".tmp") {}
  ~StagedFile() {
    std::error_code ec;
    if (!committed_) fs::remove(tmp_, ec);
  }

  void write(const std::string& content) {
    std::ofstream out(tmp_, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp_.string());
  }
  void commit() {
    fs::rename(tmp_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  bool committed_ = false;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<PatternRecord> score_document(const Document& doc, const LexiconBundle& bundle,
                                          const PropagationParams& params) {
  std::vector<PatternRecord> out;
  for (const auto& lp : extract_all(doc, bundle)) {
    const auto& sentence = doc.sentences[lp.pattern.toi.sentence_index];
    out.push_back(to_record(lp, score_pattern(lp.pattern, sentence, bundle, params)));
  }
  return out;
}

/// Scores a batch across `workers` threads; result order follows the batch.
std::vector<std::vector<PatternRecord>> score_batch(const std::vector<Document>& batch, const LexiconBundle& bundle,
                                                    const PropagationParams& params, std::size_t workers) {
  std::vector<std::vector<PatternRecord>> results(batch.size());
  const std::size_t n = std::min(workers, std::max<std::size_t>(1, batch.size()));
  if (n <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) results[i] = score_document(batch[i], bundle, params);
    return results;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < batch.size(); i += n) results[i] = score_document(batch[i], bundle, params);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

constexpr std::size_t kBatchSize = 512;

}  // namespace

ExtractSummary cmd_extract(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.lexicons.empty()) throw ConfigError("--lexicons is required");
  if (config.corpus.empty()) throw ConfigError("at least one --corpus is required");

  const auto paths = LexiconPaths::in_directory(config.lexicons);
  const auto bundle = load_lexicons(paths, config.threshold);

  ExtractSummary summary;
  std::vector<PatternRecord> records;
  std::vector<Rejection> rejected;
  std::map<Date, std::pair<int, std::set<std::string>>> day_tally;

  for (const auto& corpus_path : config.corpus) {
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) throw ParseError(corpus_path.string(), 0, "cannot open file");
    CorpusStream stream(in, corpus_path.string());
    std::vector<Document> batch;
    const auto drain = [&] {
      for (auto& doc_records : score_batch(batch, bundle, config.propagation, config.workers))
        for (auto& r : doc_records) records.push_back(std::move(r));
      batch.clear();
    };
    while (auto item = stream.next()) {
      ++summary.documents_read;
      if (auto* rej = std::get_if<Rejection>(&*item)) {
        log << fmt::format("rejected document '{}' ({}:{}): {}\n", rej->doc_id, corpus_path.string(), rej->line,
                           fmt::join(rej->reasons, "; "));
        rejected.push_back(std::move(*rej));
        continue;
      }
      auto& doc = std::get<Document>(*item);
      auto& day = day_tally[doc.date];
      ++day.first;
      day.second.insert(doc.outlet);
      batch.push_back(std::move(doc));
      if (batch.size() == kBatchSize) drain();
    }
    drain();
  }
  summary.documents_rejected = rejected.size();
  summary.documents_accepted = summary.documents_read - summary.documents_rejected;
  summary.patterns_emitted = records.size();

  std::stable_sort(records.begin(), records.end(), [](const PatternRecord& a, const PatternRecord& b) {
    return std::tie(a.doc_id, a.sentence_index) < std::tie(b.doc_id, b.sentence_index);
  });

  CorpusCounts counts;
  for (auto& [date, day] : day_tally) counts[date] = {day.first, static_cast<int>(day.second.size())};

  ordered_json manifest;
  manifest["command"] = "extract";
  manifest["config"] = {{"toi_threshold", config.threshold},
                        {"negation_factor", config.propagation.negation_factor},
                        {"intensifier_factor", config.propagation.intensifier_factor}};
  ordered_json corpus_inputs = ordered_json::array();
  for (const auto& p : config.corpus) corpus_inputs.push_back({{"path", p.string()}, {"sha256", file_sha256(p)}});
  ordered_json lexicon_inputs = ordered_json::array();
  for (const auto& p : paths.all())
    lexicon_inputs.push_back({{"path", p.filename().string()}, {"sha256", file_sha256(p)}});
  manifest["inputs"] = {{"corpus", corpus_inputs}, {"lexicons", lexicon_inputs}};
  manifest["counts"] = {{"documents_read", summary.documents_read},
                        {"documents_accepted", summary.documents_accepted},
                        {"documents_rejected", summary.documents_rejected},
                        {"patterns_emitted", summary.patterns_emitted},
                        {"toi_terms", bundle.toi.size()}};
  ordered_json rej_json = ordered_json::array();
  for (const auto& r : rejected) rej_json.push_back({{"doc_id", r.doc_id}, {"line", r.line}, {"reasons", r.reasons}});
  manifest["rejected"] = rej_json;

  std::ostringstream patterns_text, counts_text;
  write_patterns(patterns_text, records);
  write_corpus_counts(counts_text, counts);

  fs::create_directories(config.out);
  StagedFile patterns_file(config.out / kPatternsFile);
  StagedFile counts_file(config.out / kCountsFile);
  StagedFile manifest_file(config.out / kManifestFile);
  patterns_file.write(patterns_text.str());
  counts_file.write(counts_text.str());
  manifest_file.write(manifest.dump(2) + "\n");
  patterns_file.commit();
  counts_file.commit();
  manifest_file.commit();

  log << fmt::format("extract: {} documents read, {} rejected, {} patterns\n", summary.documents_read,
                     summary.documents_rejected, summary.patterns_emitted);
  return summary;
}

namespace {

std::string cell(const std::optional<double>& v, int decimals) { return v ? fixed(*v, decimals) : std::string(); }

std::string distribution_csv(const std::optional<Summary>& f, const std::optional<Summary>& nf) {
  std::string out = "statistic,female,non_female\n";
  const auto row = [&](std::string_view name, auto get, int decimals) {
    out += fmt::format("{},{},{}\n", name, f ? fixed(get(*f), decimals) : "", nf ? fixed(get(*nf), decimals) : "");
  };
  out += fmt::format("count,{},{}\n", f ? std::to_string(f->count) : "", nf ? std::to_string(nf->count) : "");
  row("mean", [](const Summary& s) { return s.mean; }, 3);
  row("std", [](const Summary& s) { return s.std; }, 3);
  constexpr std::array<std::string_view, 5> names = {"10%", "25%", "50%", "75%", "90%"};
  for (std::size_t i = 0; i < names.size(); ++i) row(names[i], [i](const Summary& s) { return s.q[i]; }, 3);
  return out;
}

std::string pct_diff_csv(const GroupTables& t, std::string_view key_name) {
  std::string out = fmt::format("{},mean,q10,q25,q50,q75,q90\n", key_name);
  for (const auto& row : t.pct_diff) {
    out += row.key;
    for (const auto& v : row.values) out += "," + cell(v, 2);
    out += '\n';
  }
  return out;
}

std::string quantiles_csv(const GroupTables& t, std::string_view key_name) {
  std::string out = fmt::format("{},gender,count,mean,std,q10,q25,q50,q75,q90\n", key_name);
  for (std::size_t i = 0; i < t.female.size(); ++i) {
    for (const auto* row : {&t.female[i], &t.non_female[i]}) {
      const char* gender = row == &t.female[i] ? "female" : "non_female";
      if (!row->stats) {
        out += fmt::format("{},{},0,,,,,,,\n", row->key, gender);
        continue;
      }
      const auto& s = *row->stats;
      out += fmt::format("{},{},{},{},{}", row->key, gender, s.count, fixed(s.mean, 3), fixed(s.std, 3));
      for (double q : s.q) out += "," + fixed(q, 3);
      out += '\n';
    }
  }
  return out;
}

ordered_json test_json(const TestReport& r) {
  return {{"u_statistic", r.u_statistic},
          {"p_value", r.p_value},
          {"method", to_string(r.method)},
          {"n1", r.n1},
          {"n2", r.n2}};
}

std::vector<double> tail(const std::vector<double>& values, double p) {
  std::vector<double> out;
  if (values.empty()) return out;
  const double cut = quantile(values, p);
  for (double v : values)
    if (v <= cut) out.push_back(v);
  return out;
}

}  // namespace

std::vector<std::string> cmd_report(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.patterns.empty()) throw ConfigError("--patterns is required");
  if (config.corpus_counts.empty()) throw ConfigError("--corpus-counts is required");

  const auto records = read_patterns_file(config.patterns);
  const auto counts = read_corpus_counts_file(config.corpus_counts);

  std::map<std::string, std::string> files;
  ordered_json tests;
  std::set<std::string> warnings;

  for (auto d : kDimensions) {
    const std::string dim(to_string(d));
    std::vector<double> female, non_female;
    for (const auto& r : records) (r.gender == Gender::female ? female : non_female).push_back(r.polarity[d]);

    const auto summarize = [](const std::vector<double>& v) -> std::optional<Summary> {
      if (v.empty()) return std::nullopt;
      return distribution_summary(v);
    };
    files["distribution_" + dim + ".csv"] = distribution_csv(summarize(female), summarize(non_female));

    const auto yearly = group_tables(records, Grouping::year, d, config.workers);
    const auto regional = group_tables(records, Grouping::nuts2_with_spain, d, config.workers);
    files["yearly_" + dim + ".csv"] = pct_diff_csv(yearly, "year");
    files["yearly_quantiles_" + dim + ".csv"] = quantiles_csv(yearly, "year");
    files["regional_" + dim + ".csv"] = pct_diff_csv(regional, "nuts2");
    files["regional_quantiles_" + dim + ".csv"] = quantiles_csv(regional, "nuts2");
    for (const auto* t : {&yearly, &regional})
      for (const auto& w : t->warnings) warnings.insert(w);

    ordered_json dim_tests;
    if (female.empty() || non_female.empty()) {
      warnings.insert(fmt::format("{}: Mann-Whitney skipped, {} sample is empty", dim,
                                  female.empty() ? "female" : "non_female"));
      dim_tests = {{"overall", nullptr}, {"q10_tail", nullptr}, {"q25_tail", nullptr}};
    } else {
      dim_tests["overall"] = test_json(mann_whitney_u(female, non_female));
      dim_tests["q10_tail"] = test_json(mann_whitney_u(tail(female, 0.10), tail(non_female, 0.10)));
      dim_tests["q25_tail"] = test_json(mann_whitney_u(tail(female, 0.25), tail(non_female, 0.25)));
    }
    tests[dim] = dim_tests;

    const std::array<std::pair<std::string, GroupKey>, 3> series = {
        std::pair{std::string("all"), GroupKey{}},
        std::pair{std::string("female"), GroupKey{Gender::female, std::nullopt}},
        std::pair{std::string("non_female"), GroupKey{Gender::non_female, std::nullopt}}};
    for (const auto& [label, key] : series) {
      const auto smoothed = rolling_mean(daily_aggregate(records, counts, d, key), config.window_days);
      std::string csv = "date,value\n";
      for (const auto& row : smoothed.rows) csv += format_date(row.date) + "," + fixed(row.normalized_value, 6) + "\n";
      files["daily_" + dim + "_" + label + ".csv"] = std::move(csv);
    }
  }
  files["mann_whitney.json"] = tests.dump(2) + "\n";

  fs::create_directories(config.out);
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_file(config.out / name, content);
    names.push_back(name);
  }
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  log << fmt::format("report: {} patterns, {} files written to {}\n", records.size(), names.size(),
                     config.out.string());
  return names;
}

ExtractSummary cmd_demo(const DemoOptions& options, std::ostream& log) {
  if (options.out.empty()) throw ConfigError("--out is required");
  fs::create_directories(options.out);
  const auto corpus_path = options.out / "corpus.conllu";
  {
    std::ofstream out(corpus_path, std::ios::binary | std::ios::trunc);
    const auto stats = write_synthetic_corpus(out, options.synth);
    if (!out) throw std::runtime_error("cannot write " + corpus_path.string());
    log << fmt::format("demo: generated {} documents, {} sentences, {} tokens, {} planted patterns\n",
                       stats.documents, stats.sentences, stats.tokens, stats.planted_patterns);
  }
  RunConfig extract;
  extract.corpus = {corpus_path};
  extract.lexicons = options.lexicons;
  extract.out = options.out;
  extract.workers = options.workers;
  extract.window_days = options.window_days;
  const auto summary = cmd_extract(extract, log);

  RunConfig report = extract;
  report.patterns = options.out / kPatternsFile;
  report.corpus_counts = options.out / kCountsFile;
  report.out = options.out / "report";
  cmd_report(report, log);
  return summary;
}

}  // namespace toipol
