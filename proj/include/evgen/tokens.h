#ifndef EVGEN_TOKENS_H_
#define EVGEN_TOKENS_H_

#include <string>
#include <string_view>
#include <vector>

namespace evgen {

using Token = std::string;
using TokenSeq = std::vector<Token>;

inline constexpr std::string_view kOpen = "(";
inline constexpr std::string_view kClose = ")";
inline constexpr std::string_view kBos = "<bos>";
inline constexpr std::string_view kEos = "<eos>";

inline bool IsStructureToken(std::string_view token) {
  return token == kOpen || token == kClose || token == kBos || token == kEos;
}

std::string JoinTokens(const TokenSeq& tokens, std::string_view sep = " ");
/// Whitespace split; no punctuation handling.
TokenSeq SplitWhitespace(std::string_view text);

}  // namespace evgen

#endif  // EVGEN_TOKENS_H_
