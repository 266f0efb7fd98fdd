#ifndef EVGEN_SPAN_INDEX_H_
#define EVGEN_SPAN_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/tokens.h"

namespace evgen {

struct CharSpan {
  std::size_t start;
  std::size_t end;  // exclusive
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// Source sentence with its tokens and each token's character extent in `text`.
struct TokenizedInput {
  std::string text;
  TokenSeq tokens;
  std::vector<CharSpan> char_spans;

  std::size_t size() const { return tokens.size(); }
};

/// Whitespace tokenization with every ASCII punctuation character split into its own token.
TokenizedInput Tokenize(std::string_view text);

/// Token index of the first occurrence of `needle` at or after `from`, or npos.
std::size_t FindTokens(const TokenSeq& haystack, std::span<const Token> needle, std::size_t from = 0);

inline constexpr std::size_t kDefaultMaxSpanLen = 16;

/*!
 * \brief Trie of every contiguous token run of an input, up to a length bound.
 *
 * Runs never cross a structure token ("(", ")", sentinels): a mention
 * containing one could not be told apart from the structure around it.
 */
class SpanTrie {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNoNode = -1;

  SpanTrie(const TokenizedInput& input, std::size_t max_span_len = kDefaultMaxSpanLen);

  /// Tokens t with partial·t a path, sorted. Throws std::out_of_range if
  /// `partial` is not a path.
  TokenSeq Continuations(std::span<const Token> partial) const;
  bool Contains(std::span<const Token> path) const { return Walk(path) != kNoNode; }

  NodeId Find(NodeId node, std::string_view token) const;
  NodeId Walk(std::span<const Token> path) const;
  TokenSeq ContinuationsOf(NodeId node) const;
  bool HasContinuations(NodeId node) const { return !nodes_[node].children.empty(); }

  /// All non-empty paths, in lexicographic order.
  std::vector<TokenSeq> Paths() const;

  std::size_t max_span_len() const { return max_span_len_; }
  bool empty() const { return nodes_[kRoot].children.empty(); }

 private:
  struct Node {
    std::map<Token, NodeId, std::less<>> children;
  };
  std::vector<Node> nodes_;
  std::size_t max_span_len_;
};

}  // namespace evgen

#endif  // EVGEN_SPAN_INDEX_H_
