#ifndef EVGEN_GROUNDING_H_
#define EVGEN_GROUNDING_H_

#include <vector>

#include "evgen/codec.h"
#include "evgen/span_index.h"

namespace evgen {

/*!
 * \brief Assigns trigger offsets by scanning the input left to right.
 *
 * Records are visited in the given order with a cursor that never rewinds:
 * each trigger takes the first occurrence of its tokens starting at or after
 * the end of the previous assignment. A trigger with no such occurrence is
 * left ungrounded (no offsets) and does not move the cursor.
 */
std::vector<EventRecord> GroundTriggers(std::vector<EventRecord> records, const TokenizedInput& input);

/// Gives each argument the occurrence whose start token is closest to the
/// trigger start, the earlier one on a tie. Arguments with no occurrence, or
/// of an ungrounded trigger, stay ungrounded.
EventRecord GroundArguments(EventRecord record, const TokenizedInput& input);

/// GroundTriggers followed by GroundArguments on every record.
std::vector<EventRecord> Ground(std::vector<EventRecord> records, const TokenizedInput& input);

}  // namespace evgen

#endif  // EVGEN_GROUNDING_H_
