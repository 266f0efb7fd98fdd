#ifndef EVGEN_CODEC_H_
#define EVGEN_CODEC_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/schema.h"
#include "evgen/tokens.h"

namespace evgen {

/// A text span. Offsets are absent until the mention is grounded in a source sentence.
struct Mention {
  TokenSeq text;
  std::optional<std::size_t> token_start;
  std::optional<std::size_t> char_start;

  bool grounded() const { return token_start.has_value(); }
  /// One past the last token. Requires token_start.
  std::size_t token_end() const { return *token_start + text.size(); }

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct Argument {
  std::string role;
  Mention mention;
  friend bool operator==(const Argument&, const Argument&) = default;
};

struct EventRecord {
  std::string event_type;
  Mention trigger;
  std::vector<Argument> args;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Linearized event structure, without the <bos>/<eos> sentinels.
struct LinearizedSeq {
  TokenSeq tokens;

  /// Space-joined tokens, e.g. "( )".
  std::string str() const { return JoinTokens(tokens); }
  /// Splits on whitespace. Leading <bos> and trailing <eos> are dropped.
  static LinearizedSeq FromString(std::string_view text);

  friend bool operator==(const LinearizedSeq&, const LinearizedSeq&) = default;
};

/// Labeled tree: Root -> event types -> (trigger span, roles -> argument spans).
struct EventTree {
  enum class Kind { kRoot, kType, kRole, kSpan };
  struct Node {
    Kind kind = Kind::kRoot;
    std::string label;  // type or role name; empty for root and spans
    TokenSeq span;      // kSpan only
    std::vector<Node> children;
  };
  Node root;
};

/// Sorts events by trigger (start, end, type) and each event's arguments by
/// (start, end, role). Stable, so exact duplicates keep their relative order.
/// Requires every mention to carry token offsets.
void SortByAppearance(std::vector<EventRecord>& records);

/// Throws ConstraintError on missing offsets, or on a type/role the schema rejects.
EventTree ToTree(std::vector<EventRecord> records, const EventSchema* schema = nullptr);
LinearizedSeq TreeToSeq(const EventTree& tree, const LabelTokenizer& tokenizer = TokenizeLabel);

/// Depth-first serialization under a virtual root, siblings in span order.
/// ToTree composed with TreeToSeq.
LinearizedSeq Linearize(const std::vector<EventRecord>& records,
                        const EventSchema* schema = nullptr);

/// Parses a linearized sequence back into records. Mentions carry text only.
/// Throws ParseError with the offending token position.
std::vector<EventRecord> Delinearize(const LinearizedSeq& seq, const SchemaTries& tries);
std::vector<EventRecord> Delinearize(const LinearizedSeq& seq, const EventSchema& schema);

/// Copy with every offset cleared.
std::vector<EventRecord> EraseOffsets(std::vector<EventRecord> records);

/// Checks types and roles against the schema. Throws ConstraintError.
void ValidateRecords(const std::vector<EventRecord>& records, const EventSchema& schema);

/// Longest label prefix of `segment` that completes a label while leaving a
/// non-empty remainder. Returns the prefix length, or 0 if none exists.
/// With labels "Transfer" and "Transfer-Money", a "Transfer" event whose
/// trigger is "Money" plus further tokens reads back as "Transfer-Money".
std::size_t SplitLabel(const LabelTrie& trie, std::span<const Token> segment);

}  // namespace evgen

#endif  // EVGEN_CODEC_H_
