#include "evgen/label_trie.h"

#include <functional>
#include <stdexcept>

#include "evgen/errors.h"

namespace evgen {

LabelTrie::LabelTrie() : nodes_(1) {}

LabelTrie::NodeId LabelTrie::Find(NodeId node, std::string_view token) const {
  for (const auto& [tok, child] : nodes_[node].children) {
    if (tok == token) return child;
  }
  return kNoNode;
}

LabelTrie::NodeId LabelTrie::Walk(std::span<const Token> tokens) const {
  NodeId node = kRoot;
  for (const auto& tok : tokens) {
    node = Find(node, tok);
    if (node == kNoNode) return kNoNode;
  }
  return node;
}

void LabelTrie::Insert(const std::string& label, const TokenSeq& tokens) {
  if (tokens.empty()) {
    throw SchemaError("label '" + label + "' has no tokens");
  }
  NodeId node = kRoot;
  for (const auto& tok : tokens) {
    if (tok.empty() || IsStructureToken(tok)) {
      throw SchemaError("label '" + label + "' contains reserved or empty token '" + tok + "'");
    }
    NodeId next = Find(node, tok);
    if (next == kNoNode) {
      next = static_cast<NodeId>(nodes_.size());
      nodes_[node].children.emplace_back(tok, next);
      nodes_.emplace_back();
    }
    node = next;
  }
  if (nodes_[node].label) {
    throw SchemaError("labels '" + *nodes_[node].label + "' and '" + label +
                      "' have the same token sequence");
  }
  nodes_[node].label = label;
  ++num_labels_;
}

std::vector<LabelTrie::Child> LabelTrie::ChildrenOf(NodeId node) const {
  std::vector<Child> out;
  out.reserve(nodes_[node].children.size());
  for (const auto& [tok, child] : nodes_[node].children) {
    out.push_back({tok, nodes_[child].label.has_value()});
  }
  return out;
}

std::vector<LabelTrie::Child> LabelTrie::Children(std::span<const Token> prefix) const {
  NodeId node = Walk(prefix);
  if (node == kNoNode) {
    throw std::out_of_range("prefix '" + JoinTokens(TokenSeq(prefix.begin(), prefix.end())) +
                            "' is not a path in the trie");
  }
  return ChildrenOf(node);
}

std::optional<std::string> LabelTrie::Lookup(std::span<const Token> tokens) const {
  NodeId node = Walk(tokens);
  if (node == kNoNode) return std::nullopt;
  return nodes_[node].label;
}

std::vector<std::pair<TokenSeq, std::string>> LabelTrie::Paths() const {
  std::vector<std::pair<TokenSeq, std::string>> out;
  TokenSeq path;
  std::function<void(NodeId)> visit = [&](NodeId node) {
    if (nodes_[node].label) out.emplace_back(path, *nodes_[node].label);
    for (const auto& [tok, child] : nodes_[node].children) {
      path.push_back(tok);
      visit(child);
      path.pop_back();
    }
  };
  visit(kRoot);
  return out;
}

}  // namespace evgen
