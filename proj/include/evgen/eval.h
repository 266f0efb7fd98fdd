#ifndef EVGEN_EVAL_H_
#define EVGEN_EVAL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evgen/dataset.h"

namespace evgen {

struct MetricCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t matched = 0;

  /// 0/0 is taken as 0 for all three ratios.
  double Precision() const;
  double Recall() const;
  double F1() const;

  MetricCounts& operator+=(const MetricCounts& o);
  friend bool operator==(const MetricCounts&, const MetricCounts&) = default;
};

/// Trig-I: trigger offsets. Trig-C: plus event type. Arg-I: argument offsets
/// and event type. Arg-C: plus role.
struct EvalReport {
  MetricCounts trig_i;
  MetricCounts trig_c;
  MetricCounts arg_i;
  MetricCounts arg_c;

  std::string ToText() const;
  /// Machine-readable form; one object per metric with the same fields.
  std::string ToJson() const;
};

enum class OffsetGranularity { kToken, kChar };

enum class Criterion { kTrigI, kTrigC, kArgI, kArgC };

/// One trigger or argument in reading order. `span` is [start, end) in the
/// chosen granularity; absent for ungrounded mentions, which never match.
struct MatchItem {
  std::optional<std::pair<std::size_t, std::size_t>> span;
  std::string event_type;
  std::string role;  // empty for triggers
};

std::vector<MatchItem> TriggerItems(const Sentence& s, OffsetGranularity g = OffsetGranularity::kToken);
std::vector<MatchItem> ArgumentItems(const Sentence& s, OffsetGranularity g = OffsetGranularity::kToken);

bool Compatible(const MatchItem& gold, const MatchItem& pred, Criterion c);

/// One-to-one matching: each predicted item, in order, takes the first
/// still-unmatched compatible gold item. Returns the number of pairs.
std::size_t GreedyMatch(const std::vector<MatchItem>& gold, const std::vector<MatchItem>& pred, Criterion c);

/// Micro-averaged over the corpus. Sentences are paired by id; throws
/// FormatError when the two id sets differ or an id repeats.
EvalReport Evaluate(const Dataset& gold, const Dataset& pred,
                    OffsetGranularity g = OffsetGranularity::kToken);

}  // namespace evgen

#endif  // EVGEN_EVAL_H_
