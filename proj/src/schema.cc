#include "evgen/schema.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "evgen/errors.h"

namespace evgen {

namespace {

bool IsNameChar(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

std::string_view Trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

void CheckName(std::string_view name, std::string_view what, std::size_t line) {
  if (name.empty()) throw SchemaError("empty " + std::string(what) + " name", line);
  for (char c : name) {
    if (!IsNameChar(c)) {
      throw SchemaError(std::string(what) + " name '" + std::string(name) +
                            "' may only contain letters, digits and '-'",
                        line);
    }
  }
}

// Validates one declaration against those already accepted. `line` is for diagnostics only.
void CheckDecl(const EventTypeDecl& decl, const std::vector<EventTypeDecl>& accepted,
               const LabelTokenizer& tokenizer, std::size_t line) {
  CheckName(decl.name, "event type", line);
  if (tokenizer(decl.name).empty()) {
    throw SchemaError("event type '" + decl.name + "' tokenizes to nothing", line);
  }
  for (const auto& prev : accepted) {
    if (prev.name == decl.name) throw SchemaError("duplicate event type '" + decl.name + "'", line);
    if (tokenizer(prev.name) == tokenizer(decl.name)) {
      throw SchemaError("event types '" + prev.name + "' and '" + decl.name +
                            "' tokenize identically",
                        line);
    }
  }
  std::set<std::string> seen;
  std::set<TokenSeq> seen_tokens;
  for (const auto& role : decl.roles) {
    CheckName(role, "role", line);
    TokenSeq toks = tokenizer(role);
    if (toks.empty()) throw SchemaError("role '" + role + "' tokenizes to nothing", line);
    if (!seen.insert(role).second) {
      throw SchemaError("duplicate role '" + role + "' in event type '" + decl.name + "'", line);
    }
    if (!seen_tokens.insert(toks).second) {
      throw SchemaError("role '" + role + "' in event type '" + decl.name +
                            "' tokenizes like another role",
                        line);
    }
  }
}

}  // namespace

TokenSeq TokenizeLabel(std::string_view label) {
  TokenSeq out;
  std::string cur;
  for (char c : label) {
    if (c == '-' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

EventSchema::EventSchema(std::vector<EventTypeDecl> types, LabelTokenizer tokenizer)
    : tokenizer_(std::move(tokenizer)) {
  if (types.empty()) throw SchemaError("empty schema");
  for (auto& decl : types) {
    CheckDecl(decl, types_, tokenizer_, 0);
    index_.emplace(decl.name, types_.size());
    types_.push_back(std::move(decl));
  }
}

EventSchema EventSchema::Parse(std::string_view document, LabelTokenizer tokenizer) {
  std::vector<EventTypeDecl> types;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = document.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;

    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw SchemaError("expected 'TypeName: Role1, Role2, ...'", line_no);
    }
    EventTypeDecl decl;
    decl.name = std::string(Trim(line.substr(0, colon)));
    std::string_view rest = Trim(line.substr(colon + 1));
    if (!rest.empty()) {
      std::size_t rpos = 0;
      while (rpos <= rest.size()) {
        std::size_t comma = rest.find(',', rpos);
        if (comma == std::string_view::npos) comma = rest.size();
        decl.roles.emplace_back(Trim(rest.substr(rpos, comma - rpos)));
        rpos = comma + 1;
      }
    }
    CheckDecl(decl, types, tokenizer, line_no);
    types.push_back(std::move(decl));
  }
  if (types.empty()) throw SchemaError("empty schema");
  return EventSchema(std::move(types), std::move(tokenizer));
}

EventSchema LoadSchema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return EventSchema::Parse(buf.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

bool EventSchema::HasType(std::string_view type) const {
  return index_.find(std::string(type)) != index_.end();
}

std::optional<std::size_t> EventSchema::TypeIndex(std::string_view type) const {
  auto it = index_.find(std::string(type));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& EventSchema::RolesOf(std::string_view type) const {
  auto idx = TypeIndex(type);
  if (!idx) throw SchemaError("unknown event type '" + std::string(type) + "'");
  return types_[*idx].roles;
}

bool EventSchema::RolePermitted(std::string_view type, std::string_view role) const {
  auto idx = TypeIndex(type);
  if (!idx) return false;
  const auto& roles = types_[*idx].roles;
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

TokenSeq EventSchema::LabelVocabulary() const {
  TokenSeq out;
  std::set<Token> seen;
  auto add = [&](const std::string& label) {
    for (auto& tok : tokenizer_(label)) {
      if (seen.insert(tok).second) out.push_back(tok);
    }
  };
  for (const auto& decl : types_) {
    add(decl.name);
    for (const auto& role : decl.roles) add(role);
  }
  return out;
}

LabelTrie BuildTypeTrie(const EventSchema& schema) {
  LabelTrie trie;
  for (const auto& decl : schema.types()) trie.Insert(decl.name, schema.LabelTokens(decl.name));
  return trie;
}

LabelTrie BuildRoleTrie(const EventSchema& schema, std::string_view event_type) {
  LabelTrie trie;
  for (const auto& role : schema.RolesOf(event_type)) trie.Insert(role, schema.LabelTokens(role));
  return trie;
}

SchemaTries::SchemaTries(const EventSchema& schema)
    : schema_(schema), type_trie_(BuildTypeTrie(schema)) {
  role_tries_.reserve(schema.num_types());
  for (const auto& decl : schema.types()) role_tries_.push_back(BuildRoleTrie(schema, decl.name));
}

const LabelTrie& SchemaTries::role_trie(std::string_view event_type) const {
  auto idx = schema_.TypeIndex(event_type);
  if (!idx) throw SchemaError("unknown event type '" + std::string(event_type) + "'");
  return role_tries_[*idx];
}

}  // namespace evgen
