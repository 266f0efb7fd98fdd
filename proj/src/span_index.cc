#include "evgen/span_index.h"

#include <functional>
#include <stdexcept>

namespace evgen {

namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsPunct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

}  // namespace

TokenizedInput Tokenize(std::string_view text) {
  TokenizedInput out;
  out.text = std::string(text);
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      ++i;
    } else if (IsPunct(c)) {
      out.tokens.emplace_back(1, text[i]);
      out.char_spans.push_back({i, i + 1});
      ++i;
    } else {
      std::size_t start = i;
      while (i < text.size()) {
        auto d = static_cast<unsigned char>(text[i]);
        if (IsSpace(d) || IsPunct(d)) break;
        ++i;
      }
      out.tokens.emplace_back(text.substr(start, i - start));
      out.char_spans.push_back({start, i});
    }
  }
  return out;
}

std::size_t FindTokens(const TokenSeq& haystack, std::span<const Token> needle, std::size_t from) {
  if (needle.empty() || needle.size() > haystack.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size() && ok; ++k) ok = haystack[i + k] == needle[k];
    if (ok) return i;
  }
  return std::string::npos;
}

SpanTrie::SpanTrie(const TokenizedInput& input, std::size_t max_span_len)
    : nodes_(1), max_span_len_(max_span_len) {
  if (max_span_len == 0) throw std::invalid_argument("max_span_len must be positive");
  const auto& toks = input.tokens;
  for (std::size_t start = 0; start < toks.size(); ++start) {
    NodeId node = kRoot;
    for (std::size_t k = start; k < toks.size() && k - start < max_span_len; ++k) {
      if (IsStructureToken(toks[k])) break;
      auto it = nodes_[node].children.find(toks[k]);
      if (it == nodes_[node].children.end()) {
        NodeId next = static_cast<NodeId>(nodes_.size());
        nodes_[node].children.emplace(toks[k], next);
        nodes_.emplace_back();
        node = next;
      } else {
        node = it->second;
      }
    }
  }
}

SpanTrie::NodeId SpanTrie::Find(NodeId node, std::string_view token) const {
  auto it = nodes_[node].children.find(token);
  return it == nodes_[node].children.end() ? kNoNode : it->second;
}

SpanTrie::NodeId SpanTrie::Walk(std::span<const Token> path) const {
  NodeId node = kRoot;
  for (const auto& tok : path) {
    node = Find(node, tok);
    if (node == kNoNode) return kNoNode;
  }
  return node;
}

TokenSeq SpanTrie::ContinuationsOf(NodeId node) const {
  TokenSeq out;
  out.reserve(nodes_[node].children.size());
  for (const auto& [tok, child] : nodes_[node].children) out.push_back(tok);
  return out;
}

TokenSeq SpanTrie::Continuations(std::span<const Token> partial) const {
  NodeId node = Walk(partial);
  if (node == kNoNode) {
    throw std::out_of_range("'" + JoinTokens(TokenSeq(partial.begin(), partial.end())) +
                            "' is not a span of the input");
  }
  return ContinuationsOf(node);
}

std::vector<TokenSeq> SpanTrie::Paths() const {
  std::vector<TokenSeq> out;
  TokenSeq path;
  std::function<void(NodeId)> visit = [&](NodeId node) {
    for (const auto& [tok, child] : nodes_[node].children) {
      path.push_back(tok);
      out.push_back(path);
      visit(child);
      path.pop_back();
    }
  };
  visit(kRoot);
  return out;
}

}  // namespace evgen
