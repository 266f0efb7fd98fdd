#ifndef EVGEN_LABEL_TRIE_H_
#define EVGEN_LABEL_TRIE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evgen/tokens.h"

namespace evgen {

/*!
 * \brief Prefix tree over the token sequences of label names.
 *
 * A node that completes a label stores the label's canonical name. When one
 * label is a strict token prefix of another, the shorter one's node is marked
 * and keeps its children. Children are kept in insertion order.
 */
class LabelTrie {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kNoNode = -1;

  struct Child {
    Token token;
    bool is_leaf;
    friend bool operator==(const Child&, const Child&) = default;
  };

  LabelTrie();

  /// Throws SchemaError when two labels share a token sequence or a label is empty.
  void Insert(const std::string& label, const TokenSeq& tokens);

  /// Children of the node reached by `prefix`. Throws std::out_of_range if
  /// `prefix` is not a path.
  std::vector<Child> Children(std::span<const Token> prefix) const;

  /// Label reached by exactly `tokens`, if that node completes one.
  std::optional<std::string> Lookup(std::span<const Token> tokens) const;

  /// Every root-to-label path, depth-first in insertion order.
  std::vector<std::pair<TokenSeq, std::string>> Paths() const;

  NodeId Find(NodeId node, std::string_view token) const;
  NodeId Walk(std::span<const Token> tokens) const;
  const std::optional<std::string>& LabelAt(NodeId node) const { return nodes_[node].label; }
  bool HasChildren(NodeId node) const { return !nodes_[node].children.empty(); }
  std::vector<Child> ChildrenOf(NodeId node) const;

  bool empty() const { return nodes_[kRoot].children.empty(); }
  std::size_t num_labels() const { return num_labels_; }

 private:
  struct Node {
    std::vector<std::pair<Token, NodeId>> children;
    std::optional<std::string> label;
  };
  std::vector<Node> nodes_;
  std::size_t num_labels_ = 0;
};

}  // namespace evgen

#endif  // EVGEN_LABEL_TRIE_H_
