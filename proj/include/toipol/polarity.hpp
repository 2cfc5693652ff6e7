#pragma once

#include <array>

#include "toipol/corpus.hpp"
#include "toipol/lexicon.hpp"
#include "toipol/pattern.hpp"

namespace toipol {

/// One score in [-1, +1] per dimension, indexed by Dimension.
struct PolarityVector {
  std::array<double, kDimensionCount> values{};

  double& operator[](Dimension d) { return values[index_of(d)]; }
  double operator[](Dimension d) const { return values[index_of(d)]; }

  bool operator==(const PolarityVector&) const = default;
};

struct PropagationParams {
  double negation_factor = 0.75;
  double intensifier_factor = 1.5;
};

/// Folds two scores: a neutral side passes the other through, same signs
/// saturate towards +-1, opposite signs add and clamp.
/// Throws std::domain_error outside [-1, +1].
double combine(double a, double b);

/// Propagates token scores of the pattern onto its ToI for one dimension.
///
/// ToI tokens are folded first in span order, then members in (distance,
/// index) order. Each intensifier scales the magnitude by the intensifier
/// factor (capped at 1); each negator multiplies by -negation_factor.
/// Negator tokens carry no lexicon score of their own.
double propagate(const Pattern& pattern, const Sentence& sentence, const LexiconBundle& bundle, Dimension d,
                 const PropagationParams& params = {});

PolarityVector score_pattern(const Pattern& pattern, const Sentence& sentence, const LexiconBundle& bundle,
                             const PropagationParams& params = {});

}  // namespace toipol
