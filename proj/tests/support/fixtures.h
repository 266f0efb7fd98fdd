// Shared fixtures and independent oracles for the test suites.
//
// Nothing here calls into the code paths it is used to check: the brute-force
// span enumerator, substring search and matcher are written from scratch.
#ifndef EVGEN_TESTS_SUPPORT_FIXTURES_H_
#define EVGEN_TESTS_SUPPORT_FIXTURES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "evgen/codec.h"
#include "evgen/eval.h"
#include "evgen/schema.h"
#include "evgen/span_index.h"

namespace evgen::testing {

inline const char* kFig1Text =
    "The man returned to Los Angeles from Mexico following his capture Tuesday by bounty hunters.";

inline const char* kFig2Linearized =
    "( ( Transport returned ( Artifact The man ) ( Destination Los Angeles ) ( Origin Mexico ) ) "
    "( Arrest Jail capture ( Person The man ) ( Time Tuesday ) ( Agent bounty hunters ) ) )";

inline EventSchema Fig2Schema() {
  return EventSchema({{"Transport", {"Artifact", "Destination", "Origin"}},
                      {"Arrest-Jail", {"Person", "Time", "Agent"}}});
}

inline EventSchema TransferSchema() {
  return EventSchema({{"Transfer-Ownership", {"Buyer", "Seller", "Artifact"}},
                      {"Transfer-Money", {"Giver", "Recipient"}}});
}

inline Mention M(const std::string& text, std::size_t start) {
  return Mention{SplitWhitespace(text), start, std::nullopt};
}

inline Mention M(const std::string& text) { return Mention{SplitWhitespace(text), std::nullopt, std::nullopt}; }

/// The two records of the running example, with token offsets into kFig1Text.
inline std::vector<EventRecord> Fig2Records() {
  return {
      {"Transport", M("returned", 2),
       {{"Artifact", M("The man", 0)}, {"Destination", M("Los Angeles", 4)}, {"Origin", M("Mexico", 7)}}},
      {"Arrest-Jail", M("capture", 10),
       {{"Person", M("The man", 0)}, {"Time", M("Tuesday", 11)}, {"Agent", M("bounty hunters", 13)}}},
  };
}

/// Every contiguous run of `tokens` of length 1..max_len, by direct enumeration.
inline std::set<TokenSeq> BruteForceSpans(const TokenSeq& tokens, std::size_t max_len) {
  std::set<TokenSeq> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t len = 1; len <= max_len && i + len <= tokens.size(); ++len) {
      TokenSeq run(tokens.begin() + i, tokens.begin() + i + len);
      bool structural = false;
      for (const auto& t : run) structural |= (t == "(" || t == ")" || t == "<bos>" || t == "<eos>");
      if (!structural) out.insert(run);
    }
  }
  return out;
}

/// Naive substring test over token sequences.
inline bool OccursContiguously(const TokenSeq& hay, const TokenSeq& needle) {
  if (needle.empty()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size(); ++k) ok = ok && hay[i + k] == needle[k];
    if (ok) return true;
  }
  return false;
}

/// Maximum one-to-one matching by exhaustive search over assignments
/// (memoized on the set of used gold items).
inline std::size_t BruteForceMaxMatch(const std::vector<MatchItem>& gold, const std::vector<MatchItem>& pred,
                                      Criterion c) {
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::uint64_t)> best = [&](std::size_t i, std::uint64_t used) {
    if (i == pred.size()) return std::size_t{0};
    auto key = std::make_pair(i, used);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t r = best(i + 1, used);  // leave pred[i] unmatched
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (used >> j & 1) continue;
      const auto& g = gold[j];
      const auto& p = pred[i];
      bool ok = g.span && p.span && *g.span == *p.span;
      if (c == Criterion::kTrigC || c == Criterion::kArgI) ok = ok && g.event_type == p.event_type;
      if (c == Criterion::kArgC) ok = ok && g.event_type == p.event_type && g.role == p.role;
      if (ok) r = std::max(r, 1 + best(i + 1, used | (std::uint64_t{1} << j)));
    }
    memo[key] = r;
    return r;
  };
  return best(0, 0);
}

/// Random capitalized label words; hyphen-joined names make shared prefixes likely.
inline std::string RandomLabel(std::mt19937_64& rng, const std::vector<std::string>& stems) {
  std::uniform_int_distribution<std::size_t> pick(0, stems.size() - 1);
  std::uniform_int_distribution<int> parts(1, 3);
  std::string out;
  for (int p = parts(rng); p > 0; --p) {
    if (!out.empty()) out += "-";
    out += stems[pick(rng)];
  }
  return out;
}

inline EventSchema RandomSchema(std::mt19937_64& rng, std::size_t max_types = 40, std::size_t max_roles = 8) {
  static const std::vector<std::string> kTypeStems = {"Transfer", "Money", "Ownership", "Attack", "Meet",
                                                      "Die",      "Arrest", "Jail",     "Elect",  "Sue",
                                                      "Start",    "Org",    "End",      "Position"};
  static const std::vector<std::string> kRoleStems = {"Agent", "Person", "Place", "Time", "Target",
                                                      "Giver", "Buyer",  "Origin", "Entity", "Victim"};
  std::uniform_int_distribution<std::size_t> n_types(1, max_types);
  std::uniform_int_distribution<std::size_t> n_roles(0, max_roles);
  std::vector<EventTypeDecl> decls;
  std::set<TokenSeq> type_tokens;
  std::size_t want = n_types(rng);
  for (int attempt = 0; decls.size() < want && attempt < 2000; ++attempt) {
    std::string name = RandomLabel(rng, kTypeStems);
    if (!type_tokens.insert(TokenizeLabel(name)).second) continue;
    EventTypeDecl d{name, {}};
    std::set<TokenSeq> role_tokens;
    std::size_t roles = n_roles(rng);
    for (int a = 0; d.roles.size() < roles && a < 200; ++a) {
      std::string r = RandomLabel(rng, kRoleStems);
      if (role_tokens.insert(TokenizeLabel(r)).second) d.roles.push_back(r);
    }
    decls.push_back(std::move(d));
  }
  return EventSchema(std::move(decls));
}

/// Random lowercase sentence; mentions drawn from it never start with a label token.
inline TokenSeq RandomSentence(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len,
                               std::size_t word_pool = 12) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> word(0, word_pool - 1);
  TokenSeq out;
  for (std::size_t n = len(rng); n > 0; --n) out.push_back("w" + std::to_string(word(rng)));
  return out;
}

/// Schema-valid records over a random sentence, offsets set, in arbitrary order.
inline std::vector<EventRecord> RandomRecords(std::mt19937_64& rng, const EventSchema& schema,
                                              const TokenSeq& sentence, std::size_t max_events = 6) {
  std::uniform_int_distribution<std::size_t> n_events(0, max_events);
  std::uniform_int_distribution<std::size_t> pick_type(0, schema.num_types() - 1);
  std::uniform_int_distribution<std::size_t> pos(0, sentence.size() - 1);
  std::uniform_int_distribution<std::size_t> n_args(0, 4);
  auto span = [&]() {
    std::size_t s = pos(rng);
    std::uniform_int_distribution<std::size_t> l(1, std::min<std::size_t>(3, sentence.size() - s));
    std::size_t n = l(rng);
    return Mention{TokenSeq(sentence.begin() + s, sentence.begin() + s + n), s, std::nullopt};
  };
  std::vector<EventRecord> out;
  for (std::size_t e = n_events(rng); e > 0; --e) {
    const auto& decl = schema.types()[pick_type(rng)];
    EventRecord rec{decl.name, span(), {}};
    if (!decl.roles.empty()) {
      std::uniform_int_distribution<std::size_t> pick_role(0, decl.roles.size() - 1);
      for (std::size_t a = n_args(rng); a > 0; --a) rec.args.push_back({decl.roles[pick_role(rng)], span()});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

/// Canonical order, written independently of the codec: events by trigger
/// (start, end, type), arguments by (start, end, role), stable.
inline std::vector<EventRecord> CanonicalOrder(std::vector<EventRecord> recs) {
  for (auto& r : recs) {
    std::stable_sort(r.args.begin(), r.args.end(), [](const Argument& a, const Argument& b) {
      auto ka = std::make_tuple(*a.mention.token_start, *a.mention.token_start + a.mention.text.size(), a.role);
      auto kb = std::make_tuple(*b.mention.token_start, *b.mention.token_start + b.mention.text.size(), b.role);
      return ka < kb;
    });
  }
  std::stable_sort(recs.begin(), recs.end(), [](const EventRecord& a, const EventRecord& b) {
    auto ka = std::make_tuple(*a.trigger.token_start, *a.trigger.token_start + a.trigger.text.size(), a.event_type);
    auto kb = std::make_tuple(*b.trigger.token_start, *b.trigger.token_start + b.trigger.text.size(), b.event_type);
    return ka < kb;
  });
  return recs;
}

}  // namespace evgen::testing

#endif  // EVGEN_TESTS_SUPPORT_FIXTURES_H_
