#include "evgen/decoder.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace evgen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void AppendSpanStarts(TokenSeq& out, const SpanTrie& spans) {
  for (auto& tok : spans.ContinuationsOf(SpanTrie::kRoot)) out.push_back(std::move(tok));
}

void SortUnique(TokenSeq& toks) {
  std::sort(toks.begin(), toks.end());
  toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
}

const LabelTrie& ActiveLabelTrie(const DecodeState& state, const DecodeContext& ctx) {
  if (state.phase == Phase::kInTypeLabel) return ctx.tries.type_trie();
  return ctx.tries.role_trie(*state.current_type);
}

// Enters a label phase and, if the label is already complete and cannot be
// extended, commits it right away.
void EnterLabel(DecodeState& s, Phase label_phase) {
  s.phase = label_phase;
  s.partial_label.clear();
  s.label_node = LabelTrie::kRoot;
}

void CommitLabel(DecodeState& s, const LabelTrie& trie) {
  const std::string& label = *trie.LabelAt(s.label_node);
  if (s.phase == Phase::kInTypeLabel) {
    s.current_type = label;
    s.phase = Phase::kInTriggerSpan;
  } else {
    s.phase = Phase::kInArgSpan;
  }
  s.partial_label.clear();
  s.label_node = LabelTrie::kRoot;
  s.partial_span.clear();
  s.span_node = SpanTrie::kRoot;
}

// Transition without the membership check. `token` must be a candidate.
void Advance(DecodeState& s, const Token& token, const DecodeContext& ctx) {
  s.emitted.push_back(token);
  switch (s.phase) {
    case Phase::kAwaitRoot:
      s.depth = 1;
      s.phase = Phase::kAwaitEventOpenOrRootClose;
      return;
    case Phase::kAwaitEventOpenOrRootClose:
      if (token == kOpen) {
        s.depth = 2;
        EnterLabel(s, Phase::kInTypeLabel);
      } else {
        s.depth = 0;
        s.phase = Phase::kAwaitEos;
      }
      return;
    case Phase::kInTypeLabel:
    case Phase::kInRoleLabel: {
      const LabelTrie& trie = ActiveLabelTrie(s, ctx);
      LabelTrie::NodeId child = trie.Find(s.label_node, token);
      if (child != LabelTrie::kNoNode) {
        s.partial_label.push_back(token);
        s.label_node = child;
        if (trie.LabelAt(child) && !trie.HasChildren(child)) CommitLabel(s, trie);
        return;
      }
      // A complete label followed by the first mention token.
      CommitLabel(s, trie);
      s.partial_span.push_back(token);
      s.span_node = ctx.spans.Find(SpanTrie::kRoot, token);
      return;
    }
    case Phase::kInTriggerSpan:
      if (token == kOpen && !s.partial_span.empty()) {
        s.depth = 3;
        s.partial_span.clear();
        EnterLabel(s, Phase::kInRoleLabel);
      } else if (token == kClose && !s.partial_span.empty()) {
        s.depth = 1;
        s.partial_span.clear();
        s.current_type.reset();
        s.phase = Phase::kAwaitEventOpenOrRootClose;
      } else {
        s.partial_span.push_back(token);
        s.span_node = ctx.spans.Find(s.span_node, token);
      }
      return;
    case Phase::kAwaitArgOpenOrEventClose:
      if (token == kOpen) {
        s.depth = 3;
        EnterLabel(s, Phase::kInRoleLabel);
      } else {
        s.depth = 1;
        s.current_type.reset();
        s.phase = Phase::kAwaitEventOpenOrRootClose;
      }
      return;
    case Phase::kInArgSpan:
      if (token == kClose && !s.partial_span.empty()) {
        s.depth = 2;
        s.partial_span.clear();
        s.phase = Phase::kAwaitArgOpenOrEventClose;
      } else {
        s.partial_span.push_back(token);
        s.span_node = ctx.spans.Find(s.span_node, token);
      }
      return;
    case Phase::kAwaitEos:
      s.phase = Phase::kDone;
      return;
    case Phase::kDone:
      break;
  }
  throw ConstraintError("cannot advance a finished decode state");
}

struct Hypothesis {
  DecodeState state;
  std::vector<double> step_log_probs;
  double score = 0.0;
  bool done = false;
};

class StepScorer {
 public:
  StepScorer(const Scorer& scorer, const TokenizedInput& input)
      : scorer_(scorer), input_(input), vocab_(scorer.Vocabulary(input)) {
    index_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
  }

  const TokenSeq& vocab() const { return vocab_; }

  std::vector<double> LogProbs(std::span<const Token> prefix) const {
    std::vector<double> w = scorer_.NextWeights(input_, prefix);
    if (w.size() != vocab_.size()) {
      throw DecodeError("scorer returned " + std::to_string(w.size()) + " weights for a vocabulary of " +
                        std::to_string(vocab_.size()));
    }
    return LogNormalize(w);
  }

  double Lookup(const std::vector<double>& log_probs, const Token& tok) const {
    auto it = index_.find(tok);
    return it == index_.end() ? kNegInf : log_probs[it->second];
  }

 private:
  const Scorer& scorer_;
  const TokenizedInput& input_;
  TokenSeq vocab_;
  std::unordered_map<Token, std::size_t> index_;
};

TokenSeq SortedVocab(const TokenSeq& vocab) {
  TokenSeq out = vocab;
  SortUnique(out);
  return out;
}

bool Finished(const Hypothesis& h, bool constrained) {
  if (constrained) return h.state.phase == Phase::kDone;
  return !h.state.emitted.empty() && h.state.emitted.back() == kEos;
}

DecodeResult ToResult(Hypothesis h) {
  DecodeResult r;
  r.seq.tokens = std::move(h.state.emitted);
  if (!r.seq.tokens.empty() && r.seq.tokens.back() == kEos) r.seq.tokens.pop_back();
  r.step_log_probs = std::move(h.step_log_probs);
  r.log_prob = h.score;
  return r;
}

[[noreturn]] void Truncated(const DecodeConfig& config) {
  throw DecodeError("output reached max length " + std::to_string(config.max_length) +
                    " before <eos>");
}

DecodeResult Greedy(const StepScorer& scorer, const DecodeContext& ctx, const DecodeConfig& config) {
  const TokenSeq all = SortedVocab(scorer.vocab());
  Hypothesis h;
  while (!Finished(h, config.constrained)) {
    if (h.state.emitted.size() + 2 > config.max_length) Truncated(config);
    auto log_probs = scorer.LogProbs(h.state.emitted);
    TokenSeq cands = config.constrained ? CandidateVocab(h.state, ctx) : all;
    const Token* best = nullptr;
    double best_lp = kNegInf;
    for (const auto& tok : cands) {  // sorted, so the first maximum is the smallest token
      double lp = scorer.Lookup(log_probs, tok);
      if (best == nullptr || lp > best_lp) {
        best = &tok;
        best_lp = lp;
      }
    }
    if (best == nullptr) throw DecodeError("no candidate tokens at step " + std::to_string(h.state.emitted.size()));
    h.step_log_probs.push_back(best_lp);
    h.score += best_lp;
    if (config.constrained) {
      Advance(h.state, *best, ctx);
    } else {
      h.state.emitted.push_back(*best);
    }
  }
  return ToResult(std::move(h));
}

bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.state.emitted < b.state.emitted;
}

DecodeResult Beam(const StepScorer& scorer, const DecodeContext& ctx, const DecodeConfig& config) {
  const TokenSeq all = SortedVocab(scorer.vocab());
  std::vector<Hypothesis> alive(1);
  std::vector<Hypothesis> finished;
  while (!alive.empty()) {
    if (!finished.empty()) {
      const auto& best_done = *std::min_element(finished.begin(), finished.end(), Better);
      const auto& best_alive = *std::min_element(alive.begin(), alive.end(), Better);
      // Scores only fall as hypotheses grow, so nothing alive can overtake.
      if (best_done.score >= best_alive.score) break;
    }
    if (alive.front().state.emitted.size() + 2 > config.max_length) break;

    std::vector<Hypothesis> expanded;
    for (const auto& h : alive) {
      auto log_probs = scorer.LogProbs(h.state.emitted);
      TokenSeq cands = config.constrained ? CandidateVocab(h.state, ctx) : all;
      for (const auto& tok : cands) {
        Hypothesis next = h;
        double lp = scorer.Lookup(log_probs, tok);
        next.step_log_probs.push_back(lp);
        next.score += lp;
        if (config.constrained) {
          Advance(next.state, tok, ctx);
        } else {
          next.state.emitted.push_back(tok);
        }
        next.done = Finished(next, config.constrained);
        expanded.push_back(std::move(next));
      }
    }
    std::sort(expanded.begin(), expanded.end(), Better);
    if (expanded.size() > config.beam_width) expanded.resize(config.beam_width);
    alive.clear();
    for (auto& h : expanded) {
      if (h.done) {
        finished.push_back(std::move(h));
      } else {
        alive.push_back(std::move(h));
      }
    }
  }
  if (finished.empty()) Truncated(config);
  std::sort(finished.begin(), finished.end(), Better);
  return ToResult(std::move(finished.front()));
}

}  // namespace

const char* PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kAwaitRoot: return "AwaitRoot";
    case Phase::kAwaitEventOpenOrRootClose: return "AwaitEventOpenOrRootClose";
    case Phase::kInTypeLabel: return "InTypeLabel";
    case Phase::kInTriggerSpan: return "InTriggerSpan";
    case Phase::kAwaitArgOpenOrEventClose: return "AwaitArgOpenOrEventClose";
    case Phase::kInRoleLabel: return "InRoleLabel";
    case Phase::kInArgSpan: return "InArgSpan";
    case Phase::kAwaitEos: return "AwaitEos";
    case Phase::kDone: return "Done";
  }
  return "?";
}

TokenSeq CandidateVocab(const DecodeState& state, const DecodeContext& ctx) {
  TokenSeq out;
  switch (state.phase) {
    case Phase::kAwaitRoot:
      out.emplace_back(kOpen);
      break;
    case Phase::kAwaitEventOpenOrRootClose:
      out.emplace_back(kClose);
      // An event needs a trigger span, so an empty input admits none.
      if (!ctx.spans.empty()) out.emplace_back(kOpen);
      break;
    case Phase::kInTypeLabel:
    case Phase::kInRoleLabel: {
      const LabelTrie& trie = ActiveLabelTrie(state, ctx);
      for (auto& child : trie.ChildrenOf(state.label_node)) out.push_back(std::move(child.token));
      if (trie.LabelAt(state.label_node)) AppendSpanStarts(out, ctx.spans);
      break;
    }
    case Phase::kInTriggerSpan:
    case Phase::kInArgSpan: {
      if (state.partial_span.empty()) {
        AppendSpanStarts(out, ctx.spans);
        break;
      }
      out = ctx.spans.ContinuationsOf(state.span_node);
      out.emplace_back(kClose);
      if (state.phase == Phase::kInTriggerSpan && !ctx.tries.role_trie(*state.current_type).empty()) {
        out.emplace_back(kOpen);
      }
      break;
    }
    case Phase::kAwaitArgOpenOrEventClose:
      out.emplace_back(kOpen);
      out.emplace_back(kClose);
      break;
    case Phase::kAwaitEos:
      out.emplace_back(kEos);
      break;
    case Phase::kDone:
      throw ConstraintError("no candidates: decoding is already done");
  }
  SortUnique(out);
  return out;
}

DecodeState Step(const DecodeState& state, const Token& token, const DecodeContext& ctx) {
  TokenSeq cands = CandidateVocab(state, ctx);
  if (!std::binary_search(cands.begin(), cands.end(), token)) {
    throw ConstraintError("token '" + token + "' is not legal in phase " + PhaseName(state.phase) +
                          " (step " + std::to_string(state.emitted.size()) + ")");
  }
  DecodeState next = state;
  Advance(next, token, ctx);
  return next;
}

void DecodeConfig::Validate() const {
  if (beam_width < 1) throw std::invalid_argument("beam width must be at least 1");
  if (max_length < 4) throw std::invalid_argument("max length must be at least 4");
  if (max_span_len < 1) throw std::invalid_argument("max span length must be at least 1");
}

DecodeResult ConstrainedDecode(const Scorer& scorer, const TokenizedInput& input,
                               const SchemaTries& tries, const DecodeConfig& config) {
  config.Validate();
  SpanTrie spans(input, config.max_span_len);
  DecodeContext ctx{tries, spans};
  StepScorer step_scorer(scorer, input);
  if (config.mode == DecodeMode::kBeam) return Beam(step_scorer, ctx, config);
  return Greedy(step_scorer, ctx, config);
}

double SequenceNll(const Scorer& scorer, const TokenizedInput& input, const LinearizedSeq& target) {
  StepScorer step_scorer(scorer, input);
  TokenSeq full = target.tokens;
  full.emplace_back(kEos);
  double nll = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    auto log_probs = step_scorer.LogProbs(std::span<const Token>(full).first(i));
    double lp = step_scorer.Lookup(log_probs, full[i]);
    if (lp == kNegInf) return std::numeric_limits<double>::infinity();
    nll -= lp;
  }
  return nll <= 0.0 ? 0.0 : nll;
}

std::vector<BatchItem> DecodeBatch(const std::vector<const Scorer*>& scorers,
                                   const std::vector<TokenizedInput>& inputs,
                                   const SchemaTries& tries, const DecodeConfig& config,
                                   std::size_t num_threads) {
  if (scorers.size() != inputs.size()) {
    throw std::invalid_argument("need exactly one scorer per input");
  }
  std::vector<BatchItem> out(inputs.size());
  auto run_one = [&](std::size_t i) {
    try {
      out[i].result = ConstrainedDecode(*scorers[i], inputs[i], tries, config);
    } catch (const Error& e) {
      out[i].error_category = e.category();
      out[i].error = e.what();
    } catch (const std::exception& e) {
      out[i].error_category = ErrorCategory::kDecode;
      out[i].error = e.what();
    }
  };
  bool concurrent = std::all_of(scorers.begin(), scorers.end(),
                                [](const Scorer* s) { return s->ConcurrentSafe(); });
  if (num_threads == 0) num_threads = std::max(1u, std::thread::hardware_concurrency());
  num_threads = std::min(num_threads, inputs.size());
  if (!concurrent || num_threads <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < num_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < inputs.size(); i = next++) run_one(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

std::vector<BatchItem> DecodeBatch(const Scorer& scorer, const std::vector<TokenizedInput>& inputs,
                                   const SchemaTries& tries, const DecodeConfig& config,
                                   std::size_t num_threads) {
  std::vector<const Scorer*> scorers(inputs.size(), &scorer);
  return DecodeBatch(scorers, inputs, tries, config, num_threads);
}

}  // namespace evgen
