#include "evgen/curriculum.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "evgen/decoder.h"
#include "evgen/errors.h"

namespace evgen {

namespace {

TokenSeq Unit(const std::string& label, const TokenSeq& span, const LabelTokenizer& tokenizer) {
  TokenSeq out{Token(kOpen)};
  for (auto& tok : tokenizer(label)) out.push_back(std::move(tok));
  out.insert(out.end(), span.begin(), span.end());
  out.emplace_back(kClose);
  return out;
}

TokenSeq WrapRoot(const std::vector<TokenSeq>& units) {
  TokenSeq out{Token(kOpen)};
  for (const auto& u : units) out.insert(out.end(), u.begin(), u.end());
  out.emplace_back(kClose);
  return out;
}

bool AllGrounded(const std::vector<EventRecord>& records) {
  for (const auto& rec : records) {
    if (!rec.trigger.grounded()) return false;
    for (const auto& arg : rec.args) {
      if (!arg.mention.grounded()) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<TrainingPair> ExtractSubstructures(const TokenizedInput& input,
                                               const std::vector<EventRecord>& records,
                                               SubstructureMode mode, const LabelTokenizer& tokenizer) {
  std::vector<EventRecord> ordered = records;
  if (AllGrounded(ordered)) SortByAppearance(ordered);
  std::vector<TokenSeq> units;
  for (const auto& rec : ordered) {
    units.push_back(Unit(rec.event_type, rec.trigger.text, tokenizer));
    for (const auto& arg : rec.args) units.push_back(Unit(arg.role, arg.mention.text, tokenizer));
  }
  std::vector<TrainingPair> out;
  if (mode == SubstructureMode::kConcatenated) {
    out.emplace_back(input, LinearizedSeq{WrapRoot(units)});
  } else {
    for (const auto& u : units) out.emplace_back(input, LinearizedSeq{WrapRoot({u})});
  }
  return out;
}

std::vector<SubstructureUnit> ParseSubstructures(const LinearizedSeq& seq, const EventSchema& schema) {
  LabelTrie labels;
  std::set<std::string> seen;
  auto add = [&](const std::string& name) {
    if (seen.insert(name).second) labels.Insert(name, schema.LabelTokens(name));
  };
  for (const auto& decl : schema.types()) {
    add(decl.name);
    for (const auto& role : decl.roles) add(role);
  }

  const TokenSeq& t = seq.tokens;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what, std::size_t at) -> void { throw ParseError(what, at); };
  if (t.empty()) fail("unexpected end of sequence", 0);
  if (t[0] != kOpen) fail("expected '('", 0);
  ++pos;
  std::vector<SubstructureUnit> out;
  while (true) {
    if (pos >= t.size()) fail("unbalanced indicators", pos);
    if (t[pos] == kClose) {
      ++pos;
      break;
    }
    if (t[pos] != kOpen) fail("unexpected token '" + t[pos] + "'", pos);
    std::size_t start = ++pos;
    while (pos < t.size() && t[pos] != kOpen && t[pos] != kClose) ++pos;
    auto seg = std::span<const Token>(t).subspan(start, pos - start);
    if (seg.empty()) fail("missing label", start);
    std::size_t n = SplitLabel(labels, seg);
    if (n == 0) {
      if (labels.Lookup(seg)) fail("empty mention", pos);
      fail("unknown label", start);
    }
    if (pos >= t.size()) fail("unbalanced indicators", pos);
    if (t[pos] != kClose) fail("unexpected '('", pos);
    ++pos;
    out.push_back({*labels.Lookup(seg.first(n)), TokenSeq(seg.begin() + n, seg.end())});
  }
  if (pos < t.size()) fail("trailing tokens after root close", pos);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic data

TokenSeq DefaultSynthVocabulary(std::size_t size, std::uint64_t seed) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n",
                                                 "p", "r", "s", "t", "v", "z", "sh", "tr"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> onset(0, std::size(kOnsets) - 1);
  std::uniform_int_distribution<std::size_t> vowel(0, std::size(kVowels) - 1);
  std::uniform_int_distribution<int> syllables(2, 3);
  std::unordered_set<std::string> seen;
  TokenSeq out;
  while (out.size() < size) {
    std::string w;
    for (int s = syllables(rng); s > 0; --s) {
      w += kOnsets[onset(rng)];
      w += kVowels[vowel(rng)];
    }
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

Dataset GenerateSynthetic(const EventSchema& schema, const TokenSeq& vocab, std::uint64_t seed,
                          std::size_t n_sentences, const SynthParams& params) {
  if (params.event_rate < 0.0 || params.arg_prob < 0.0 || params.arg_prob > 1.0 ||
      params.max_mention_len < 1 || params.min_filler > params.max_filler) {
    throw std::invalid_argument("invalid synthetic data parameters");
  }
  TokenSeq label_tokens = schema.LabelVocabulary();
  std::unordered_set<Token> reserved(label_tokens.begin(), label_tokens.end());
  TokenSeq words;
  std::unordered_set<Token> seen;
  for (const auto& w : vocab) {
    TokenizedInput t = Tokenize(w);
    if (t.tokens.size() != 1 || t.tokens[0] != w || IsStructureToken(w) || reserved.count(w)) continue;
    if (seen.insert(w).second) words.push_back(w);
  }
  if (words.empty()) throw std::invalid_argument("empty vocabulary for synthetic data");

  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::size_t> n_events(params.event_rate > 0.0 ? params.event_rate : 1.0);
  std::uniform_int_distribution<std::size_t> pick_type(0, schema.num_types() - 1);
  std::uniform_int_distribution<std::size_t> mention_len(1, params.max_mention_len);
  std::uniform_int_distribution<std::size_t> filler_count(params.min_filler, params.max_filler);
  std::bernoulli_distribution take_arg(params.arg_prob);

  // A planted span: owning event, role index (-1 for the trigger), length.
  struct Plant {
    std::size_t event;
    int role;
    std::size_t len;
  };

  Dataset out;
  out.reserve(n_sentences);
  for (std::size_t si = 0; si < n_sentences; ++si) {
    std::size_t k = params.event_rate > 0.0 ? std::min(n_events(rng), params.max_events) : 0;
    std::vector<std::size_t> types;
    std::vector<Plant> plants;
    for (std::size_t e = 0; e < k; ++e) {
      types.push_back(pick_type(rng));
      plants.push_back({e, -1, 1});
      const auto& roles = schema.types()[types.back()].roles;
      for (std::size_t r = 0; r < roles.size(); ++r) {
        if (take_arg(rng)) plants.push_back({e, static_cast<int>(r), mention_len(rng)});
      }
    }
    std::size_t planted = 0;
    for (const auto& p : plants) planted += p.len;
    std::size_t fillers = filler_count(rng);
    if (planted + fillers > words.size()) {
      throw std::invalid_argument("synthetic vocabulary too small: sentence needs " +
                                  std::to_string(planted + fillers) + " distinct words");
    }
    // Distinct words for this sentence: a partial Fisher-Yates draw.
    TokenSeq pool = words;
    for (std::size_t i = 0; i < planted + fillers; ++i) {
      std::uniform_int_distribution<std::size_t> j(i, pool.size() - 1);
      std::swap(pool[i], pool[j(rng)]);
    }
    std::shuffle(plants.begin(), plants.end(), rng);
    // Spread the fillers over the plants.size() + 1 gaps.
    std::vector<std::size_t> gaps(plants.size() + 1, 0);
    std::uniform_int_distribution<std::size_t> gap(0, plants.size());
    for (std::size_t f = 0; f < fillers; ++f) ++gaps[gap(rng)];

    TokenSeq tokens;
    std::size_t next_word = 0;
    std::vector<Mention> triggers(k);
    std::vector<std::vector<Argument>> args(k);
    auto take = [&](std::size_t n) {
      TokenSeq ws(pool.begin() + static_cast<std::ptrdiff_t>(next_word),
                  pool.begin() + static_cast<std::ptrdiff_t>(next_word + n));
      next_word += n;
      return ws;
    };
    for (std::size_t i = 0; i <= plants.size(); ++i) {
      for (auto& w : take(gaps[i])) tokens.push_back(std::move(w));
      if (i == plants.size()) break;
      const Plant& p = plants[i];
      Mention m{take(p.len), tokens.size(), std::nullopt};
      tokens.insert(tokens.end(), m.text.begin(), m.text.end());
      if (p.role < 0) {
        triggers[p.event] = std::move(m);
      } else {
        args[p.event].push_back({schema.types()[types[p.event]].roles[p.role], std::move(m)});
      }
    }
    tokens.emplace_back(".");

    Sentence s;
    s.id = "syn-" + std::to_string(seed) + "-" + std::to_string(si);
    s.input = Tokenize(JoinTokens(tokens));
    for (std::size_t e = 0; e < k; ++e) {
      EventRecord rec;
      rec.event_type = schema.types()[types[e]].name;
      rec.trigger = std::move(triggers[e]);
      rec.trigger.char_start = s.input.char_spans[*rec.trigger.token_start].start;
      rec.args = std::move(args[e]);
      for (auto& a : rec.args) a.mention.char_start = s.input.char_spans[*a.mention.token_start].start;
      s.events.push_back(std::move(rec));
    }
    SortByAppearance(s.events);
    out.push_back(std::move(s));
  }
  return out;
}

DatasetStats ComputeStats(const Dataset& data) {
  DatasetStats st;
  st.sentences = data.size();
  for (const auto& s : data) {
    st.tokens += s.input.tokens.size();
    if (!s.events.empty()) ++st.sentences_with_events;
    st.events += s.events.size();
    for (const auto& rec : s.events) st.arguments += rec.args.size();
  }
  return st;
}

std::string DatasetStats::ToText() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "sentences: %zu\nsentences with events: %zu\nevents: %zu\narguments: %zu\ntokens: %zu\n",
                sentences, sentences_with_events, events, arguments, tokens);
  return buf;
}

// ---------------------------------------------------------------------------
// Curriculum training

CurriculumResult CurriculumTrain(const Dataset& corpus, const CurriculumConfig& config,
                                 const EventSchema* schema) {
  CheckNgramParams(config.params);
  if (corpus.size() < 2) throw std::invalid_argument("curriculum training needs at least two sentences");
  if (!(config.held_out_fraction > 0.0 && config.held_out_fraction < 1.0)) {
    throw std::invalid_argument("held-out fraction must lie in (0, 1)");
  }

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_held = static_cast<std::size_t>(std::ceil(config.held_out_fraction * static_cast<double>(corpus.size())));
  n_held = std::clamp<std::size_t>(n_held, 1, corpus.size() - 1);
  std::vector<std::size_t> held(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_held));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_held), order.end());
  std::sort(held.begin(), held.end());
  std::sort(train.begin(), train.end());

  LabelTokenizer tokenizer = schema ? schema->tokenizer() : LabelTokenizer(TokenizeLabel);
  TokenSeq extra;
  if (schema) {
    extra = schema->LabelVocabulary();
  } else {
    std::set<Token> labels;
    for (const auto& s : corpus) {
      for (const auto& rec : s.events) {
        for (auto& t : tokenizer(rec.event_type)) labels.insert(t);
        for (const auto& a : rec.args) {
          for (auto& t : tokenizer(a.role)) labels.insert(t);
        }
      }
    }
    extra.assign(labels.begin(), labels.end());
  }

  NgramCounts sub(config.params.order);
  NgramCounts full(config.params.order);
  for (std::size_t i : train) {
    const Sentence& s = corpus[i];
    for (const auto& [input, target] : ExtractSubstructures(s.input, s.events, config.mode, tokenizer)) {
      sub.Add(target, config.substructure_epochs);
    }
    full.Add(Linearize(s.events, schema), config.full_epochs);
  }
  NgramCounts combined = sub;
  combined += full;

  CurriculumResult r{sub,
                     full,
                     NgramScorer(combined, config.params, extra),
                     NgramScorer(full, config.params, extra),
                     train,
                     held,
                     0.0,
                     0.0,
                     0};
  for (std::size_t i : held) {
    const Sentence& s = corpus[i];
    LinearizedSeq target = Linearize(s.events, schema);
    r.held_out_nll_curriculum += SequenceNll(r.curriculum, s.input, target);
    r.held_out_nll_direct += SequenceNll(r.direct, s.input, target);
    r.held_out_tokens += target.tokens.size() + 1;
  }
  return r;
}

std::string CurriculumResult::ToText() const {
  auto per_tok = [&](double nll) {
    return held_out_tokens == 0 ? 0.0 : nll / static_cast<double>(held_out_tokens);
  };
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "train sentences: %zu\nheld-out sentences: %zu\nheld-out tokens: %zu\n"
                "regime      nll_total      nll_per_token\n"
                "curriculum  %-13.6f  %.6f\n"
                "direct      %-13.6f  %.6f\n",
                train_ids.size(), held_out_ids.size(), held_out_tokens, held_out_nll_curriculum,
                per_tok(held_out_nll_curriculum), held_out_nll_direct, per_tok(held_out_nll_direct));
  return buf;
}

}  // namespace evgen
