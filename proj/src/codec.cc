#include "evgen/codec.h"

#include <algorithm>
#include <tuple>

#include "evgen/errors.h"

namespace evgen {

namespace {

void RequireOffsets(const Mention& m, const std::string& what) {
  if (!m.token_start) {
    throw ConstraintError("missing token offset for " + what + " '" + JoinTokens(m.text) + "'");
  }
}

void AppendLabel(TokenSeq& out, const std::string& label, const LabelTokenizer& tokenizer) {
  for (auto& tok : tokenizer(label)) out.push_back(std::move(tok));
}

class Parser {
 public:
  Parser(const TokenSeq& tokens, std::size_t base, const SchemaTries& tries)
      : toks_(tokens), base_(base), tries_(tries) {}

  std::vector<EventRecord> Run() {
    std::vector<EventRecord> out;
    if (toks_.empty()) Fail("unexpected end of sequence", 0);
    Expect(kOpen, "expected '('");
    while (true) {
      if (pos_ >= toks_.size()) Fail("unbalanced indicators", pos_);
      const Token& tok = toks_[pos_];
      if (tok == kClose) {
        ++pos_;
        break;
      }
      if (tok != kOpen) Fail("unexpected token '" + tok + "'", pos_);
      out.push_back(ParseEvent());
    }
    if (pos_ < toks_.size()) Fail("trailing tokens after root close", pos_);
    return out;
  }

 private:
  [[noreturn]] void Fail(const std::string& what, std::size_t pos) const {
    throw ParseError(what, base_ + pos);
  }

  void Expect(std::string_view tok, const std::string& what) {
    if (pos_ >= toks_.size()) Fail("unbalanced indicators", pos_);
    if (toks_[pos_] != tok) Fail(what + ", found '" + toks_[pos_] + "'", pos_);
    ++pos_;
  }

  // Reads the run of non-indicator tokens starting at pos_.
  std::span<const Token> Segment() {
    std::size_t start = pos_;
    while (pos_ < toks_.size() && toks_[pos_] != kOpen && toks_[pos_] != kClose) {
      if (toks_[pos_] == kBos || toks_[pos_] == kEos) Fail("unexpected sentinel '" + toks_[pos_] + "'", pos_);
      ++pos_;
    }
    return std::span<const Token>(toks_).subspan(start, pos_ - start);
  }

  // Splits a segment into label + mention; `kind` names the label for errors.
  std::pair<std::string, TokenSeq> LabelAndSpan(const LabelTrie& trie, std::size_t seg_start,
                                                std::span<const Token> seg, const char* kind) {
    if (seg.empty()) Fail(std::string("missing ") + kind, seg_start);
    std::size_t n = SplitLabel(trie, seg);
    if (n == 0) {
      if (trie.Lookup(seg)) Fail("empty mention", seg_start + seg.size());
      Fail(std::string("unknown ") + kind, seg_start);
    }
    std::string label = *trie.Lookup(seg.first(n));
    return {label, TokenSeq(seg.begin() + n, seg.end())};
  }

  EventRecord ParseEvent() {
    ++pos_;  // '('
    std::size_t seg_start = pos_;
    auto seg = Segment();
    auto [type, trigger] = LabelAndSpan(tries_.type_trie(), seg_start, seg, "event type");
    EventRecord rec;
    rec.event_type = type;
    rec.trigger.text = std::move(trigger);
    const LabelTrie& roles = tries_.role_trie(type);
    while (true) {
      if (pos_ >= toks_.size()) Fail("unbalanced indicators", pos_);
      if (toks_[pos_] == kClose) {
        ++pos_;
        return rec;
      }
      // Segment() stops only at indicators, so this is '('.
      ++pos_;
      std::size_t arg_start = pos_;
      auto arg_seg = Segment();
      auto [role, span] = LabelAndSpan(roles, arg_start, arg_seg, "role");
      if (pos_ >= toks_.size()) Fail("unbalanced indicators", pos_);
      if (toks_[pos_] != kClose) Fail("unexpected '('", pos_);
      ++pos_;
      rec.args.push_back({role, Mention{std::move(span), std::nullopt, std::nullopt}});
    }
  }

  const TokenSeq& toks_;
  std::size_t base_;
  const SchemaTries& tries_;
  std::size_t pos_ = 0;
};

}  // namespace

LinearizedSeq LinearizedSeq::FromString(std::string_view text) {
  LinearizedSeq seq{SplitWhitespace(text)};
  if (!seq.tokens.empty() && seq.tokens.front() == kBos) seq.tokens.erase(seq.tokens.begin());
  if (!seq.tokens.empty() && seq.tokens.back() == kEos) seq.tokens.pop_back();
  return seq;
}

void SortByAppearance(std::vector<EventRecord>& records) {
  for (const auto& rec : records) {
    RequireOffsets(rec.trigger, "trigger");
    for (const auto& arg : rec.args) RequireOffsets(arg.mention, "argument");
  }
  for (auto& rec : records) {
    std::stable_sort(rec.args.begin(), rec.args.end(), [](const Argument& a, const Argument& b) {
      return std::forward_as_tuple(*a.mention.token_start, a.mention.token_end(), a.role) <
             std::forward_as_tuple(*b.mention.token_start, b.mention.token_end(), b.role);
    });
  }
  std::stable_sort(records.begin(), records.end(), [](const EventRecord& a, const EventRecord& b) {
    return std::forward_as_tuple(*a.trigger.token_start, a.trigger.token_end(), a.event_type) <
           std::forward_as_tuple(*b.trigger.token_start, b.trigger.token_end(), b.event_type);
  });
}

void ValidateRecords(const std::vector<EventRecord>& records, const EventSchema& schema) {
  for (const auto& rec : records) {
    if (!schema.HasType(rec.event_type)) {
      throw ConstraintError("event type '" + rec.event_type + "' is not in the schema");
    }
    if (rec.trigger.text.empty()) throw ConstraintError("empty trigger for '" + rec.event_type + "'");
    for (const auto& arg : rec.args) {
      if (!schema.RolePermitted(rec.event_type, arg.role)) {
        throw ConstraintError("role '" + arg.role + "' is not permitted for '" + rec.event_type + "'");
      }
      if (arg.mention.text.empty()) throw ConstraintError("empty mention for role '" + arg.role + "'");
    }
  }
}

EventTree ToTree(std::vector<EventRecord> records, const EventSchema* schema) {
  if (schema) ValidateRecords(records, *schema);
  SortByAppearance(records);
  EventTree tree;
  tree.root.kind = EventTree::Kind::kRoot;
  for (auto& rec : records) {
    EventTree::Node type{EventTree::Kind::kType, rec.event_type, {}, {}};
    type.children.push_back({EventTree::Kind::kSpan, {}, std::move(rec.trigger.text), {}});
    for (auto& arg : rec.args) {
      EventTree::Node role{EventTree::Kind::kRole, arg.role, {}, {}};
      role.children.push_back({EventTree::Kind::kSpan, {}, std::move(arg.mention.text), {}});
      type.children.push_back(std::move(role));
    }
    tree.root.children.push_back(std::move(type));
  }
  return tree;
}

LinearizedSeq TreeToSeq(const EventTree& tree, const LabelTokenizer& tokenizer) {
  LinearizedSeq seq;
  auto& out = seq.tokens;
  auto emit = [&](const auto& self, const EventTree::Node& node) -> void {
    if (node.kind == EventTree::Kind::kSpan) {
      out.insert(out.end(), node.span.begin(), node.span.end());
      return;
    }
    out.emplace_back(kOpen);
    if (node.kind != EventTree::Kind::kRoot) AppendLabel(out, node.label, tokenizer);
    for (const auto& child : node.children) self(self, child);
    out.emplace_back(kClose);
  };
  emit(emit, tree.root);
  return seq;
}

LinearizedSeq Linearize(const std::vector<EventRecord>& records, const EventSchema* schema) {
  return TreeToSeq(ToTree(records, schema), schema ? schema->tokenizer() : LabelTokenizer(TokenizeLabel));
}

std::size_t SplitLabel(const LabelTrie& trie, std::span<const Token> segment) {
  std::size_t best = 0;
  LabelTrie::NodeId node = LabelTrie::kRoot;
  for (std::size_t i = 0; i + 1 < segment.size(); ++i) {
    node = trie.Find(node, segment[i]);
    if (node == LabelTrie::kNoNode) break;
    if (trie.LabelAt(node)) best = i + 1;
  }
  return best;
}

std::vector<EventRecord> Delinearize(const LinearizedSeq& seq, const SchemaTries& tries) {
  return Parser(seq.tokens, 0, tries).Run();
}

std::vector<EventRecord> Delinearize(const LinearizedSeq& seq, const EventSchema& schema) {
  return Delinearize(seq, SchemaTries(schema));
}

std::vector<EventRecord> EraseOffsets(std::vector<EventRecord> records) {
  for (auto& rec : records) {
    rec.trigger.token_start.reset();
    rec.trigger.char_start.reset();
    for (auto& arg : rec.args) {
      arg.mention.token_start.reset();
      arg.mention.char_start.reset();
    }
  }
  return records;
}

}  // namespace evgen
