#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toipol/polarity.hpp"
#include "toipol/synth.hpp"

namespace toipol {

/// Everything a run needs. Defaults are the analysis constants: ToI
/// similarity threshold 0.7, 90-day smoothing, negation 0.75, intensifier 1.5.
struct RunConfig {
  std::vector<std::filesystem::path> corpus;
  std::filesystem::path lexicons;
  double threshold = 0.7;
  int window_days = 90;
  PropagationParams propagation;
  std::filesystem::path out;
  std::size_t workers = 1;

  // report stage inputs
  std::filesystem::path patterns;
  std::filesystem::path corpus_counts;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct ExtractSummary {
  std::size_t documents_read = 0;
  std::size_t documents_accepted = 0;
  std::size_t documents_rejected = 0;
  std::size_t patterns_emitted = 0;
};

// Output file names inside the extract directory.
inline constexpr const char* kPatternsFile = "patterns.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kCountsFile = "corpus_counts.csv";

/// Parses, extracts, scores and writes patterns.jsonl, corpus_counts.csv and
/// manifest.json into config.out. Nothing is written unless every input loads.
/// Per-document rejections are logged and recorded in the manifest.
ExtractSummary cmd_extract(const RunConfig& config, std::ostream& log);

/// Writes the report set (distribution, yearly and regional tables per
/// dimension, Mann-Whitney JSON, smoothed daily plot data) into config.out.
/// Returns the file names written, sorted.
std::vector<std::string> cmd_report(const RunConfig& config, std::ostream& log);

struct DemoOptions {
  std::filesystem::path out;
  std::filesystem::path lexicons;
  SynthConfig synth;
  std::size_t workers = 1;
  int window_days = 90;
};

/// Generates the synthetic corpus into out/, then runs extract (out/) and
/// report (out/report/).
ExtractSummary cmd_demo(const DemoOptions& options, std::ostream& log);

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace toipol
