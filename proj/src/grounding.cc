#include "evgen/grounding.h"

#include <string>

namespace evgen {

namespace {

void Assign(Mention& m, std::size_t token_start, const TokenizedInput& input) {
  m.token_start = token_start;
  m.char_start = input.char_spans[token_start].start;
}

void Clear(Mention& m) {
  m.token_start.reset();
  m.char_start.reset();
}

std::size_t Distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::vector<EventRecord> GroundTriggers(std::vector<EventRecord> records, const TokenizedInput& input) {
  std::size_t cursor = 0;
  for (auto& rec : records) {
    std::size_t at = FindTokens(input.tokens, rec.trigger.text, cursor);
    if (at == std::string::npos) {
      Clear(rec.trigger);
      continue;
    }
    Assign(rec.trigger, at, input);
    cursor = at + rec.trigger.text.size();
  }
  return records;
}

EventRecord GroundArguments(EventRecord record, const TokenizedInput& input) {
  for (auto& arg : record.args) {
    Clear(arg.mention);
    if (!record.trigger.token_start) continue;
    const std::size_t anchor = *record.trigger.token_start;
    std::size_t best = std::string::npos;
    for (std::size_t at = FindTokens(input.tokens, arg.mention.text, 0); at != std::string::npos;
         at = FindTokens(input.tokens, arg.mention.text, at + 1)) {
      // Occurrences come in increasing order, so strict < keeps the earlier on ties.
      if (best == std::string::npos || Distance(at, anchor) < Distance(best, anchor)) best = at;
    }
    if (best != std::string::npos) Assign(arg.mention, best, input);
  }
  return record;
}

std::vector<EventRecord> Ground(std::vector<EventRecord> records, const TokenizedInput& input) {
  records = GroundTriggers(std::move(records), input);
  for (auto& rec : records) rec = GroundArguments(std::move(rec), input);
  return records;
}

}  // namespace evgen
