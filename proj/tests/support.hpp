#pragma once

// Small builders shared by the unit tests.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "toipol/corpus.hpp"
#include "toipol/lexicon.hpp"
#include "toipol/text.hpp"

#ifndef TOIPOL_DATA_DIR
#define TOIPOL_DATA_DIR "data"
#endif

namespace testing {

inline std::filesystem::path data_dir() { return TOIPOL_DATA_DIR; }
inline std::filesystem::path lexicon_dir() { return data_dir() / "lexicons"; }
inline std::filesystem::path fixture(const std::string& name) { return data_dir() / "fixtures" / name; }

struct Tok {
  std::string surface;
  std::string lemma;
  std::string upos;
  int head;
  std::string deprel;
};

inline toipol::Sentence sentence(std::initializer_list<Tok> toks) {
  toipol::Sentence s;
  int i = 0;
  for (const auto& t : toks) s.tokens.push_back({++i, t.surface, t.lemma, t.upos, t.head, t.deprel});
  return s;
}

inline toipol::Document document(std::string id, std::vector<toipol::Sentence> sentences,
                                 std::string date = "2020-01-01", std::string outlet = "El Pais") {
  toipol::Document d;
  d.doc_id = std::move(id);
  d.date = *toipol::parse_date(date);
  d.outlet = std::move(outlet);
  d.sentences = std::move(sentences);
  return d;
}

inline const toipol::LexiconBundle& bundled_lexicons() {
  static const auto bundle = toipol::load_lexicons(toipol::LexiconPaths::in_directory(lexicon_dir()));
  return bundle;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

/// Fresh scratch directory under the build tree, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("toipol-" + name + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
