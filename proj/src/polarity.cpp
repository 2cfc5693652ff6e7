#include "toipol/polarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace toipol {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double lexicon_score(const Token& t, const LexiconBundle& bundle, Dimension d) {
  if (bundle.modifiers.is_negator(t.lemma)) return 0.0;
  return token_polarity(bundle, t.lemma, d);
}

}  // namespace

double combine(double a, double b) {
  if (!(a >= -1.0 && a <= 1.0) || !(b >= -1.0 && b <= 1.0))
    throw std::domain_error(fmt::format("combine({}, {}) outside [-1, 1]", a, b));
  if (a == 0.0) return b;
  if (b == 0.0) return a;
  if ((a > 0.0) == (b > 0.0)) {
    const double ma = std::abs(a);
    return sign(a) * std::min(1.0, ma + std::abs(b) * (1.0 - ma));
  }
  return std::clamp(a + b, -1.0, 1.0);
}

double propagate(const Pattern& pattern, const Sentence& sentence, const LexiconBundle& bundle, Dimension d,
                 const PropagationParams& params) {
  double s = 0.0;
  for (int i = pattern.toi.start; i <= pattern.toi.end; ++i) s = combine(s, lexicon_score(sentence.at(i), bundle, d));
  for (const auto& m : pattern.members) s = combine(s, lexicon_score(sentence.at(m.index), bundle, d));
  for (std::size_t k = 0; k < pattern.intensifier_lemmas.size(); ++k)
    s = sign(s) * std::min(1.0, params.intensifier_factor * std::abs(s));
  for (int k = 0; k < pattern.negator_count; ++k) s = -params.negation_factor * s;
  return std::clamp(s, -1.0, 1.0);
}

PolarityVector score_pattern(const Pattern& pattern, const Sentence& sentence, const LexiconBundle& bundle,
                             const PropagationParams& params) {
  PolarityVector v;
  for (auto d : kDimensions) v[d] = propagate(pattern, sentence, bundle, d, params);
  return v;
}

}  // namespace toipol
