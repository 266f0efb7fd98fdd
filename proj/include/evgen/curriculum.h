#ifndef EVGEN_CURRICULUM_H_
#define EVGEN_CURRICULUM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evgen/codec.h"
#include "evgen/dataset.h"
#include "evgen/schema.h"
#include "evgen/scorers.h"

namespace evgen {

enum class SubstructureMode {
  kConcatenated,  // one target per sentence: ( ( label span ) ( label span ) ... )
  kPerUnit,       // one target per unit: ( ( label span ) )
};

/*!
 * \brief Flat (label, span) training targets for the first curriculum stage.
 *
 * Units are (type, trigger) and (role, argument), listed in the same
 * depth-first order the full linearization uses: each event's trigger unit
 * followed by its argument units. Records with offsets are ordered by
 * appearance first.
 */
std::vector<TrainingPair> ExtractSubstructures(const TokenizedInput& input,
                                               const std::vector<EventRecord>& records,
                                               SubstructureMode mode = SubstructureMode::kConcatenated,
                                               const LabelTokenizer& tokenizer = TokenizeLabel);

struct SubstructureUnit {
  std::string label;
  TokenSeq span;
  friend bool operator==(const SubstructureUnit&, const SubstructureUnit&) = default;
};

/// Parses a substructure target under the relaxed grammar
///   ( { ( LABEL SPAN ) } )
/// where LABEL is any type or role name of the schema. Throws ParseError.
std::vector<SubstructureUnit> ParseSubstructures(const LinearizedSeq& seq, const EventSchema& schema);

struct SynthParams {
  double event_rate = 1.0;  // Poisson mean of events per sentence
  std::size_t max_events = 4;
  double arg_prob = 0.5;    // chance that each permitted role gets an argument
  std::size_t max_mention_len = 2;
  std::size_t min_filler = 2;
  std::size_t max_filler = 8;
};

/// Deterministic pseudo-words, e.g. "bato", "kelimu".
TokenSeq DefaultSynthVocabulary(std::size_t size = 400, std::uint64_t seed = 1);

/*!
 * \brief Random sentences with planted trigger and argument spans.
 *
 * Within a sentence every word is distinct, so each mention occurs exactly
 * once and grounding is unambiguous. Words that collide with label tokens or
 * would not survive tokenization are dropped from `vocab` first.
 * Throws std::invalid_argument when no usable words remain or a sentence
 * needs more distinct words than there are.
 */
Dataset GenerateSynthetic(const EventSchema& schema, const TokenSeq& vocab, std::uint64_t seed,
                          std::size_t n_sentences, const SynthParams& params = {});

struct DatasetStats {
  std::size_t sentences = 0;
  std::size_t sentences_with_events = 0;
  std::size_t events = 0;
  std::size_t arguments = 0;
  std::size_t tokens = 0;

  std::string ToText() const;
};

DatasetStats ComputeStats(const Dataset& data);

struct CurriculumConfig {
  NgramParams params;
  /// Counting passes; a count model has no other use for epochs.
  std::uint64_t substructure_epochs = 5;
  std::uint64_t full_epochs = 30;
  double held_out_fraction = 0.2;
  std::uint64_t seed = 0;
  SubstructureMode mode = SubstructureMode::kConcatenated;
};

struct CurriculumResult {
  NgramCounts substructure_counts;
  NgramCounts full_counts;
  NgramScorer curriculum;
  NgramScorer direct;
  std::vector<std::size_t> train_ids;  // indices into the corpus
  std::vector<std::size_t> held_out_ids;
  double held_out_nll_curriculum = 0.0;  // summed over held-out sentences
  double held_out_nll_direct = 0.0;
  std::size_t held_out_tokens = 0;       // scored steps, <eos> included

  std::string ToText() const;
};

/// Splits deterministically by seed, trains both regimes on the train part
/// and scores full targets of the held-out part. Needs at least two sentences
/// with grounded mentions. Throws std::invalid_argument.
CurriculumResult CurriculumTrain(const Dataset& corpus, const CurriculumConfig& config,
                                 const EventSchema* schema = nullptr);

}  // namespace evgen

#endif  // EVGEN_CURRICULUM_H_
