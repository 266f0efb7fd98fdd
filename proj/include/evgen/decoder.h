#ifndef EVGEN_DECODER_H_
#define EVGEN_DECODER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "evgen/codec.h"
#include "evgen/errors.h"
#include "evgen/schema.h"
#include "evgen/scorer.h"
#include "evgen/span_index.h"

namespace evgen {

/// Where the automaton is in the event grammar:
///   <bos> ( { ( TYPE SPAN { ( ROLE SPAN ) } ) } ) <eos>
enum class Phase {
  kAwaitRoot,                  // expects the root "("
  kAwaitEventOpenOrRootClose,  // "(" opens an event, ")" closes the root
  kInTypeLabel,
  kInTriggerSpan,
  kAwaitArgOpenOrEventClose,   // after an argument's ")"
  kInRoleLabel,
  kInArgSpan,
  kAwaitEos,                   // root closed
  kDone,
};

const char* PhaseName(Phase phase);

/// Pushdown state of one hypothesis. Label and span positions are kept as
/// trie node ids alongside the partial token runs they spell.
struct DecodeState {
  TokenSeq emitted;
  int depth = 0;
  Phase phase = Phase::kAwaitRoot;
  TokenSeq partial_label;
  TokenSeq partial_span;
  std::optional<std::string> current_type;

  LabelTrie::NodeId label_node = LabelTrie::kRoot;
  SpanTrie::NodeId span_node = SpanTrie::kRoot;
};

/// Shared read-only tries for one input sentence.
struct DecodeContext {
  const SchemaTries& tries;
  const SpanTrie& spans;
};

/// Legal next tokens, sorted and unique. Throws ConstraintError on a Done state.
TokenSeq CandidateVocab(const DecodeState& state, const DecodeContext& ctx);

/// Advances by one token. Throws ConstraintError when `token` is not a candidate.
DecodeState Step(const DecodeState& state, const Token& token, const DecodeContext& ctx);

enum class DecodeMode { kGreedy, kBeam };

inline constexpr std::size_t kDefaultMaxLength = 128;

struct DecodeConfig {
  DecodeMode mode = DecodeMode::kGreedy;
  std::size_t beam_width = 1;
  /// Bound on output length, counting both sentinels.
  std::size_t max_length = kDefaultMaxLength;
  bool constrained = true;
  std::size_t max_span_len = kDefaultMaxSpanLen;

  /// Throws std::invalid_argument.
  void Validate() const;
};

struct DecodeResult {
  LinearizedSeq seq;
  /// Log-probability of every emitted token under the scorer's full
  /// distribution, the final <eos> included.
  std::vector<double> step_log_probs;
  double log_prob = 0.0;
};

/*!
 * \brief Generates a linearized event structure token by token.
 *
 * With constraints on, every step restricts the scorer's distribution to
 * CandidateVocab, so the output always parses under Delinearize, uses only
 * schema labels and roles permitted for their event, and draws mentions from
 * contiguous input spans. Greedy ties go to the lexicographically smallest
 * token. Beam search ranks by total log-probability, unnormalized.
 *
 * Throws DecodeError when max_length is hit before <eos> or the scorer
 * misbehaves.
 */
DecodeResult ConstrainedDecode(const Scorer& scorer, const TokenizedInput& input,
                               const SchemaTries& tries, const DecodeConfig& config);

/// Negative log-likelihood of `target` followed by <eos>; +inf when a step
/// has probability zero (including tokens outside the scorer vocabulary).
double SequenceNll(const Scorer& scorer, const TokenizedInput& input, const LinearizedSeq& target);

struct BatchItem {
  std::optional<DecodeResult> result;
  std::optional<ErrorCategory> error_category;
  std::string error;

  bool ok() const { return result.has_value(); }
};

/// Decodes every input, in order. Items run concurrently when the scorer
/// allows it. Failures are reported per item.
std::vector<BatchItem> DecodeBatch(const Scorer& scorer, const std::vector<TokenizedInput>& inputs,
                                   const SchemaTries& tries, const DecodeConfig& config,
                                   std::size_t num_threads = 0);

/// Same, with one scorer per input (e.g. per-sentence oracles). The scorers
/// must outlive the call; `scorers.size()` must equal `inputs.size()`.
std::vector<BatchItem> DecodeBatch(const std::vector<const Scorer*>& scorers,
                                   const std::vector<TokenizedInput>& inputs,
                                   const SchemaTries& tries, const DecodeConfig& config,
                                   std::size_t num_threads = 0);

}  // namespace evgen

#endif  // EVGEN_DECODER_H_
