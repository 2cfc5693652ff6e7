// toipol command-line front end.
//
//   toipol extract --corpus a.conllu [b.conllu ...] --lexicons DIR --out DIR
//   toipol report  --patterns FILE --corpus-counts FILE --out DIR
//   toipol demo    [--out DIR] [--docs N]
//   toipol synth   --out FILE [--docs N]
//
// Every flag can also be set through TOIPOL_<FLAG> in the environment, e.g.
// TOIPOL_WORKERS=8. Exit status: 0 ok, 1 usage or configuration, 2 input,
// 3 internal failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "toipol/error.hpp"
#include "toipol/pipeline.hpp"
#include "toipol/synth.hpp"

#ifndef TOIPOL_DATA_DIR
#define TOIPOL_DATA_DIR "data"
#endif

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

std::string default_lexicons() { return std::string(TOIPOL_DATA_DIR) + "/lexicons"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aspect-based sentiment and moral polarity around labour-market terms"};
  app.require_subcommand(1);

  toipol::RunConfig extract_cfg;
  std::vector<std::string> corpus;
  std::string lexicons = default_lexicons();
  std::string out;
  auto* extract = app.add_subcommand("extract", "extract and score patterns from CoNLL-U corpora");
  extract->add_option("--corpus", corpus, "CoNLL-U corpus files")->required()->envname("TOIPOL_CORPUS");
  extract->add_option("--lexicons", lexicons, "lexicon directory")->envname("TOIPOL_LEXICONS");
  extract->add_option("--out", out, "output directory")->required()->envname("TOIPOL_OUT");
  extract->add_option("--threshold", extract_cfg.threshold, "ToI expansion similarity threshold")
      ->envname("TOIPOL_THRESHOLD");
  extract->add_option("--workers", extract_cfg.workers, "worker threads")->envname("TOIPOL_WORKERS");
  extract->add_option("--negation-factor", extract_cfg.propagation.negation_factor)
      ->envname("TOIPOL_NEGATION_FACTOR");
  extract->add_option("--intensifier-factor", extract_cfg.propagation.intensifier_factor)
      ->envname("TOIPOL_INTENSIFIER_FACTOR");

  toipol::RunConfig report_cfg;
  std::string patterns, counts, report_out;
  auto* report = app.add_subcommand("report", "aggregate a pattern file into tables, tests and series");
  report->add_option("--patterns", patterns, "patterns.jsonl from extract")->required()->envname("TOIPOL_PATTERNS");
  report->add_option("--corpus-counts", counts, "corpus_counts.csv from extract")
      ->required()
      ->envname("TOIPOL_CORPUS_COUNTS");
  report->add_option("--out", report_out, "output directory")->required()->envname("TOIPOL_OUT");
  report->add_option("--window", report_cfg.window_days, "smoothing window in days")->envname("TOIPOL_WINDOW");
  report->add_option("--workers", report_cfg.workers, "aggregation partials")->envname("TOIPOL_WORKERS");

  toipol::DemoOptions demo_opts;
  demo_opts.lexicons = default_lexicons();
  std::string demo_out = "toipol-demo";
  std::string demo_lexicons = default_lexicons();
  auto* demo = app.add_subcommand("demo", "generate a synthetic corpus and run extract and report on it");
  demo->add_option("--out", demo_out, "output directory")->envname("TOIPOL_OUT");
  demo->add_option("--lexicons", demo_lexicons, "lexicon directory")->envname("TOIPOL_LEXICONS");
  demo->add_option("--docs", demo_opts.synth.documents, "documents to generate")->envname("TOIPOL_DOCS");
  demo->add_option("--seed", demo_opts.synth.seed, "generator seed")->envname("TOIPOL_SEED");
  demo->add_option("--workers", demo_opts.workers, "worker threads")->envname("TOIPOL_WORKERS");
  demo->add_option("--window", demo_opts.window_days, "smoothing window in days")->envname("TOIPOL_WINDOW");

  toipol::SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic CoNLL-U corpus");
  synth->add_option("--out", synth_out, "output file")->required()->envname("TOIPOL_OUT");
  synth->add_option("--docs", synth_cfg.documents, "documents to generate")->envname("TOIPOL_DOCS");
  synth->add_option("--seed", synth_cfg.seed, "generator seed")->envname("TOIPOL_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*extract) {
      extract_cfg.corpus.assign(corpus.begin(), corpus.end());
      extract_cfg.lexicons = lexicons;
      extract_cfg.out = out;
      toipol::cmd_extract(extract_cfg, std::cerr);
    } else if (*report) {
      report_cfg.patterns = patterns;
      report_cfg.corpus_counts = counts;
      report_cfg.out = report_out;
      toipol::cmd_report(report_cfg, std::cerr);
    } else if (*demo) {
      demo_opts.out = demo_out;
      demo_opts.lexicons = demo_lexicons;
      toipol::cmd_demo(demo_opts, std::cerr);
    } else if (*synth) {
      std::ofstream file(synth_out, std::ios::binary | std::ios::trunc);
      if (!file) throw std::filesystem::filesystem_error("cannot open output", synth_out, std::error_code{});
      const auto stats = toipol::write_synthetic_corpus(file, synth_cfg);
      std::cerr << fmt::format("synth: {} documents, {} planted patterns\n", stats.documents,
                               stats.planted_patterns);
    }
  } catch (const toipol::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const toipol::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const toipol::LoadError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    // Statistics preconditions (a pattern date missing from the counts file).
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
