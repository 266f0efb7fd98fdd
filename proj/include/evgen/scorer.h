#ifndef EVGEN_SCORER_H_
#define EVGEN_SCORER_H_

#include <span>
#include <vector>

#include "evgen/span_index.h"
#include "evgen/tokens.h"

namespace evgen {

class EventSchema;

/*!
 * \brief Next-token distribution provider p(y_i | y_<i, x).
 *
 * For one input the vocabulary is fixed; NextWeights returns one finite,
 * non-negative weight per vocabulary entry, and normalizing those weights
 * gives the distribution. A weight of zero means probability zero. The
 * prefix never contains the implicit <bos>.
 */
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual TokenSeq Vocabulary(const TokenizedInput& input) const = 0;
  virtual std::vector<double> NextWeights(const TokenizedInput& input,
                                          std::span<const Token> prefix) const = 0;
  /// Whether NextWeights may be called from several threads at once.
  virtual bool ConcurrentSafe() const { return true; }
};

/// Natural-log probabilities from raw weights. Throws DecodeError when a weight
/// is negative or non-finite, or when all weights are zero.
std::vector<double> LogNormalize(std::span<const double> weights);

/// Structure tokens plus every label token of the schema, with <eos>.
TokenSeq BaseVocabulary(const EventSchema& schema);

/// `base` followed by tokens of `input` not already present, in first-seen order.
TokenSeq ExtendWithInput(const TokenSeq& base, const TokenizedInput& input);

}  // namespace evgen

#endif  // EVGEN_SCORER_H_
