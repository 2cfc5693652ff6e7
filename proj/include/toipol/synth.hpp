#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

namespace toipol {

/// Parameters of the synthetic parsed corpus used by `demo` and the
/// acceptance suite. Output is a pure function of the config.
struct SynthConfig {
  std::size_t documents = 10000;
  int first_year = 2018;
  int last_year = 2022;
  std::uint64_t seed = 20080915;
  double female_rate = 0.2;        // ToI sentences carrying an explicit female reference
  double female_tail_rate = 0.3;   // female ToI sentences given a strongly negative frame
  double located_rate = 0.6;       // ToI sentences naming a place
  double no_toi_doc_rate = 0.15;   // documents without any ToI sentence
};

struct SynthStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t planted_patterns = 0;  // ToI occurrences written
  std::size_t located_pattern_sentences = 0;
  std::size_t unlocated_pattern_sentences = 0;
};

/// Writes CoNLL-U for a corpus whose trees are valid by construction. The
/// vocabulary matches the bundled mini-lexicons; female-tagged ToI sentences
/// receive an extra negative sentiment frame at `female_tail_rate`.
SynthStats write_synthetic_corpus(std::ostream& out, const SynthConfig& config);

}  // namespace toipol
