#ifndef EVGEN_SCHEMA_H_
#define EVGEN_SCHEMA_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evgen/label_trie.h"
#include "evgen/tokens.h"

namespace evgen {

/// Splits a label into the tokens the decoder emits for it.
using LabelTokenizer = std::function<TokenSeq(std::string_view)>;

/// Word-level label tokenization: split at hyphens and whitespace.
/// "Transfer-Ownership" -> [Transfer, Ownership].
TokenSeq TokenizeLabel(std::string_view label);

struct EventTypeDecl {
  std::string name;
  std::vector<std::string> roles;
};

/*!
 * \brief Event types and the argument roles each one permits.
 *
 * Declaration order is kept and drives every iteration over types or roles.
 * Immutable once built; copies share nothing mutable.
 */
class EventSchema {
 public:
  /// Validates names, uniqueness (by name and by token sequence) and non-emptiness.
  /// Throws SchemaError.
  explicit EventSchema(std::vector<EventTypeDecl> types, LabelTokenizer tokenizer = TokenizeLabel);

  /// Parses the line format "TypeName: Role1, Role2". '#' starts a comment.
  static EventSchema Parse(std::string_view document, LabelTokenizer tokenizer = TokenizeLabel);

  const std::vector<EventTypeDecl>& types() const { return types_; }
  std::size_t num_types() const { return types_.size(); }

  bool HasType(std::string_view type) const;
  std::optional<std::size_t> TypeIndex(std::string_view type) const;
  /// Throws SchemaError for an unknown type.
  const std::vector<std::string>& RolesOf(std::string_view type) const;
  bool RolePermitted(std::string_view type, std::string_view role) const;

  TokenSeq LabelTokens(std::string_view label) const { return tokenizer_(label); }
  const LabelTokenizer& tokenizer() const { return tokenizer_; }

  /// Every distinct token used by any type or role label, first-use order.
  TokenSeq LabelVocabulary() const;

 private:
  std::vector<EventTypeDecl> types_;
  std::unordered_map<std::string, std::size_t> index_;
  LabelTokenizer tokenizer_;
};

/// Reads and parses a schema file. Throws IoError or SchemaError.
EventSchema LoadSchema(const std::string& path);

LabelTrie BuildTypeTrie(const EventSchema& schema);
/// Throws SchemaError when `event_type` is not in the schema.
LabelTrie BuildRoleTrie(const EventSchema& schema, std::string_view event_type);

/// Type trie plus one role trie per event type, built once and shared read-only by decoders.
class SchemaTries {
 public:
  explicit SchemaTries(const EventSchema& schema);

  const EventSchema& schema() const { return schema_; }
  const LabelTrie& type_trie() const { return type_trie_; }
  const LabelTrie& role_trie(std::string_view event_type) const;

 private:
  EventSchema schema_;
  LabelTrie type_trie_;
  std::vector<LabelTrie> role_tries_;
};

}  // namespace evgen

#endif  // EVGEN_SCHEMA_H_
