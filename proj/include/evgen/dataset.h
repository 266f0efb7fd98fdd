#ifndef EVGEN_DATASET_H_
#define EVGEN_DATASET_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/codec.h"
#include "evgen/span_index.h"

namespace evgen {

/// One sentence with its event records.
struct Sentence {
  std::string id;
  TokenizedInput input;
  std::vector<EventRecord> events;
};

using Dataset = std::vector<Sentence>;

/*
 * Line-delimited JSON, one sentence per line:
 *
 *   {"id": "s1", "text": "...",
 *    "events": [{"type": "Attack",
 *                "trigger": {"text": "fired", "start": 3},
 *                "args": [{"role": "Attacker", "text": "the man", "start": 0}]}]}
 *
 * "start" is a token index into the tokenized "text"; null or absent means
 * ungrounded. "events" may be omitted for unannotated input.
 */

/// Throws FormatError (with the 1-based line) on malformed JSON, missing
/// fields, or an offset whose tokens differ from the mention text.
Sentence ParseSentence(std::string_view json_line, std::size_t line_no = 0);
std::string SentenceToJson(const Sentence& sentence);

Dataset ReadDataset(std::istream& in);
Dataset ReadDataset(const std::string& path);
void WriteDataset(std::ostream& out, const Dataset& data);
void WriteDataset(const std::string& path, const Dataset& data);

/// Non-empty lines of a text file, in order. Throws IoError.
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace evgen

#endif  // EVGEN_DATASET_H_
