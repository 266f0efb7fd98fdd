#include "evgen/scorers.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "evgen/errors.h"

namespace evgen {

// ---------------------------------------------------------------------------
// Uniform

UniformScorer::UniformScorer(TokenSeq base_vocab) : base_(std::move(base_vocab)) {
  if (base_.empty()) throw std::invalid_argument("uniform scorer needs a non-empty vocabulary");
}

TokenSeq UniformScorer::Vocabulary(const TokenizedInput& input) const {
  return ExtendWithInput(base_, input);
}

std::vector<double> UniformScorer::NextWeights(const TokenizedInput& input,
                                               std::span<const Token>) const {
  return std::vector<double>(Vocabulary(input).size(), 1.0);
}

// ---------------------------------------------------------------------------
// Oracle

OracleScorer::OracleScorer(LinearizedSeq target, double epsilon, TokenSeq base_vocab)
    : target_(std::move(target.tokens)), epsilon_(epsilon), base_(std::move(base_vocab)) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("oracle epsilon must lie in [0, 1)");
  }
  target_.emplace_back(kEos);
  std::unordered_set<Token> seen(base_.begin(), base_.end());
  for (const auto& tok : target_) {
    if (seen.insert(tok).second) base_.push_back(tok);
  }
}

TokenSeq OracleScorer::Vocabulary(const TokenizedInput& input) const {
  return ExtendWithInput(base_, input);
}

std::vector<double> OracleScorer::NextWeights(const TokenizedInput& input,
                                              std::span<const Token> prefix) const {
  TokenSeq vocab = Vocabulary(input);
  const std::size_t v = vocab.size();
  std::size_t step = prefix.size();
  if (step >= target_.size() || v == 1) return std::vector<double>(v, 1.0);
  std::vector<double> w(v, epsilon_ / static_cast<double>(v - 1));
  for (std::size_t i = 0; i < v; ++i) {
    if (vocab[i] == target_[step]) w[i] = 1.0 - epsilon_;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Random

RandomScorer::RandomScorer(std::uint64_t seed, TokenSeq base_vocab)
    : seed_(seed), base_(std::move(base_vocab)) {
  if (base_.empty()) throw std::invalid_argument("random scorer needs a non-empty vocabulary");
}

TokenSeq RandomScorer::Vocabulary(const TokenizedInput& input) const {
  return ExtendWithInput(base_, input);
}

std::vector<double> RandomScorer::NextWeights(const TokenizedInput& input,
                                              std::span<const Token> prefix) const {
  std::uint64_t h = seed_ * 0x9E3779B97F4A7C15ULL + prefix.size();
  for (const auto& tok : prefix) h = h * 1099511628211ULL ^ std::hash<std::string>{}(tok);
  std::mt19937_64 rng(h);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(Vocabulary(input).size());
  for (auto& x : w) x = 1.0 - unit(rng);  // (0, 1]
  return w;
}

// ---------------------------------------------------------------------------
// N-gram counts

NgramCounts::NgramCounts(std::size_t order) : order_(order) {
  if (order == 0) throw std::invalid_argument("n-gram order must be at least 1");
}

void NgramCounts::AddEntry(const TokenSeq& context, const Token& next, std::uint64_t count) {
  if (context.size() >= order_) throw std::invalid_argument("context longer than order - 1");
  table_[context][next] += count;
  totals_[context] += count;
  vocab_.insert(next);
}

void NgramCounts::Add(const LinearizedSeq& target, std::uint64_t passes) {
  if (passes == 0) return;
  TokenSeq padded(order_ - 1, Token(kBos));
  padded.insert(padded.end(), target.tokens.begin(), target.tokens.end());
  padded.emplace_back(kEos);
  for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
    for (std::size_t k = 0; k < order_; ++k) {
      TokenSeq ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - k),
                   padded.begin() + static_cast<std::ptrdiff_t>(i));
      AddEntry(ctx, padded[i], passes);
    }
  }
}

NgramCounts& NgramCounts::operator+=(const NgramCounts& other) {
  if (other.order_ != order_) throw std::invalid_argument("cannot add n-gram tables of different order");
  for (const auto& [ctx, row] : other.table_) {
    for (const auto& [next, c] : row) AddEntry(ctx, next, c);
  }
  return *this;
}

std::uint64_t NgramCounts::ContextTotal(std::span<const Token> context) const {
  auto it = totals_.find(TokenSeq(context.begin(), context.end()));
  return it == totals_.end() ? 0 : it->second;
}

std::uint64_t NgramCounts::Count(std::span<const Token> context, std::string_view next) const {
  auto it = table_.find(TokenSeq(context.begin(), context.end()));
  if (it == table_.end()) return 0;
  auto jt = it->second.find(Token(next));
  return jt == it->second.end() ? 0 : jt->second;
}

// ---------------------------------------------------------------------------
// N-gram scorer

void CheckNgramParams(const NgramParams& params) {
  if (params.order < 1) throw std::invalid_argument("n-gram order must be at least 1");
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
  if (!(params.copy_boost >= 1.0) || !std::isfinite(params.copy_boost)) {
    throw std::invalid_argument("copy boost must be at least 1");
  }
}

NgramScorer::NgramScorer(NgramCounts counts, NgramParams params, TokenSeq extra_vocab)
    : counts_(std::move(counts)), params_(params) {
  CheckNgramParams(params_);
  if (params_.order != counts_.order()) throw std::invalid_argument("order mismatch");
  std::set<Token> vocab = counts_.vocabulary();
  vocab.insert(Token(kOpen));
  vocab.insert(Token(kClose));
  vocab.insert(Token(kEos));
  for (auto& tok : extra_vocab) vocab.insert(std::move(tok));
  vocab_.assign(vocab.begin(), vocab.end());
}

TokenSeq NgramScorer::Vocabulary(const TokenizedInput& input) const {
  return ExtendWithInput(vocab_, input);
}

std::vector<double> NgramScorer::ContextDistribution(const TokenSeq& vocab,
                                                     std::span<const Token> context) const {
  const double v = static_cast<double>(vocab.size());
  std::vector<double> p(vocab.size(), 1.0 / v);
  for (std::size_t k = context.size() + 1; k-- > 0;) {
    auto ctx = context.subspan(context.size() - k);
    std::uint64_t total = counts_.ContextTotal(ctx);
    if (total == 0) continue;
    const double denom = static_cast<double>(total) + params_.alpha * v;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      p[i] = (static_cast<double>(counts_.Count(ctx, vocab[i])) + params_.alpha) / denom;
    }
    break;
  }
  return p;
}

std::vector<double> NgramScorer::NextWeights(const TokenizedInput& input,
                                             std::span<const Token> prefix) const {
  TokenSeq vocab = Vocabulary(input);
  const std::size_t ctx_len = params_.order - 1;
  TokenSeq context;
  context.reserve(ctx_len);
  for (std::size_t k = ctx_len; k > 0; --k) {
    // k-th token back from the end of <bos>-padded prefix
    context.push_back(k > prefix.size() ? Token(kBos) : prefix[prefix.size() - k]);
  }
  std::vector<double> w = ContextDistribution(vocab, context);
  if (params_.copy_boost != 1.0) {
    std::unordered_set<std::string_view> in_input(input.tokens.begin(), input.tokens.end());
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      if (in_input.count(vocab[i])) w[i] *= params_.copy_boost;
      total += w[i];
    }
    for (auto& x : w) x /= total;
  }
  return w;
}

namespace {

constexpr std::string_view kMagic = "evgen-ngram v1";

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string NgramScorer::Serialize() const {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "order " << params_.order << '\n';
  out << "alpha " << FormatDouble(params_.alpha) << '\n';
  out << "copy_boost " << FormatDouble(params_.copy_boost) << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& tok : vocab_) out << tok << '\n';
  std::size_t entries = 0;
  for (const auto& [ctx, row] : counts_.table()) entries += row.size();
  out << "counts " << entries << '\n';
  for (const auto& [ctx, row] : counts_.table()) {
    std::string c = JoinTokens(ctx);
    for (const auto& [next, n] : row) out << c << '\t' << next << '\t' << n << '\n';
  }
  return out.str();
}

NgramScorer NgramScorer::Deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw FormatError("unexpected end of scorer artifact", line_no + 1);
    ++line_no;
    return line;
  };
  auto keyed = [&](std::string_view key) {
    std::string& l = next_line();
    if (l.rfind(std::string(key) + " ", 0) != 0) {
      throw FormatError("expected '" + std::string(key) + "'", line_no);
    }
    return l.substr(key.size() + 1);
  };
  auto to_u64 = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      throw FormatError("bad integer '" + s + "'", line_no);
    }
  };
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw FormatError("bad number '" + s + "'", line_no);
    }
  };

  if (next_line() != kMagic) throw FormatError("not an evgen n-gram artifact (bad header)", 1);
  NgramParams params;
  params.order = to_u64(keyed("order"));
  params.alpha = to_double(keyed("alpha"));
  params.copy_boost = to_double(keyed("copy_boost"));
  if (params.order == 0) throw FormatError("order must be positive", 2);
  std::uint64_t nv = to_u64(keyed("vocab"));
  TokenSeq vocab;
  for (std::uint64_t i = 0; i < nv; ++i) vocab.push_back(next_line());
  std::uint64_t ne = to_u64(keyed("counts"));
  NgramCounts counts(params.order);
  for (std::uint64_t i = 0; i < ne; ++i) {
    std::string& l = next_line();
    auto t1 = l.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : l.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw FormatError("expected 'context<TAB>token<TAB>count'", line_no);
    TokenSeq ctx = SplitWhitespace(std::string_view(l).substr(0, t1));
    if (ctx.size() >= params.order) throw FormatError("context longer than order - 1", line_no);
    counts.AddEntry(ctx, l.substr(t1 + 1, t2 - t1 - 1), to_u64(l.substr(t2 + 1)));
  }
  try {
    return NgramScorer(std::move(counts), params, std::move(vocab));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid scorer parameters: ") + e.what());
  }
}

void NgramScorer::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scorer artifact '" + path + "'");
  out << Serialize();
  if (!out) throw IoError("failed writing scorer artifact '" + path + "'");
}

NgramScorer NgramScorer::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scorer artifact '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return Deserialize(buf.str());
}

NgramScorer TrainNgram(const std::vector<TrainingPair>& corpus, const NgramParams& params,
                       std::uint64_t passes, TokenSeq extra_vocab) {
  CheckNgramParams(params);
  if (corpus.empty()) throw std::invalid_argument("cannot train on an empty corpus");
  NgramCounts counts(params.order);
  for (const auto& [input, target] : corpus) counts.Add(target, passes);
  return NgramScorer(std::move(counts), params, std::move(extra_vocab));
}

}  // namespace evgen
