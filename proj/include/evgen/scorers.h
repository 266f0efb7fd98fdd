#ifndef EVGEN_SCORERS_H_
#define EVGEN_SCORERS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evgen/codec.h"
#include "evgen/scorer.h"

namespace evgen {

/// Equal weight on every vocabulary token.
class UniformScorer : public Scorer {
 public:
  /// Throws std::invalid_argument on an empty vocabulary.
  explicit UniformScorer(TokenSeq base_vocab);

  TokenSeq Vocabulary(const TokenizedInput& input) const override;
  std::vector<double> NextWeights(const TokenizedInput& input,
                                  std::span<const Token> prefix) const override;

 private:
  TokenSeq base_;
};

/// Replays a fixed target: at step i, 1 - epsilon on target token i (then
/// <eos>), epsilon spread uniformly over the rest. Past the end it is uniform.
class OracleScorer : public Scorer {
 public:
  /// Throws std::invalid_argument unless 0 <= epsilon < 1.
  OracleScorer(LinearizedSeq target, double epsilon, TokenSeq base_vocab = {});

  TokenSeq Vocabulary(const TokenizedInput& input) const override;
  std::vector<double> NextWeights(const TokenizedInput& input,
                                  std::span<const Token> prefix) const override;

 private:
  TokenSeq target_;  // includes the final <eos>
  double epsilon_;
  TokenSeq base_;
};

/// Pseudo-random weights in (0, 1], a pure function of (seed, prefix).
class RandomScorer : public Scorer {
 public:
  RandomScorer(std::uint64_t seed, TokenSeq base_vocab);

  TokenSeq Vocabulary(const TokenizedInput& input) const override;
  std::vector<double> NextWeights(const TokenizedInput& input,
                                  std::span<const Token> prefix) const override;

 private:
  std::uint64_t seed_;
  TokenSeq base_;
};

struct NgramParams {
  std::size_t order = 3;
  double alpha = 0.1;
  double copy_boost = 4.0;
};

/*!
 * \brief Count tables of an n-gram model over target token sequences.
 *
 * Each target contributes every (context, next) pair for context lengths
 * 0 .. order-1, with <bos> padding on the left and <eos> as the last
 * predicted token. Tables from separate passes add entrywise.
 */
class NgramCounts {
 public:
  using Table = std::map<TokenSeq, std::map<Token, std::uint64_t>>;

  explicit NgramCounts(std::size_t order);

  void Add(const LinearizedSeq& target, std::uint64_t passes = 1);
  /// Adds `count` to one table entry; used when loading a serialized model.
  void AddEntry(const TokenSeq& context, const Token& next, std::uint64_t count);
  NgramCounts& operator+=(const NgramCounts& other);

  std::size_t order() const { return order_; }
  const Table& table() const { return table_; }
  /// Every predicted token seen, sorted.
  const std::set<Token>& vocabulary() const { return vocab_; }
  std::uint64_t ContextTotal(std::span<const Token> context) const;
  std::uint64_t Count(std::span<const Token> context, std::string_view next) const;

  friend bool operator==(const NgramCounts&, const NgramCounts&) = default;

 private:
  std::size_t order_;
  Table table_;
  std::map<TokenSeq, std::uint64_t> totals_;
  std::set<Token> vocab_;
};

/*!
 * \brief Additively smoothed n-gram scorer with backoff and a copy bias.
 *
 * The longest context (at most order-1 tokens) seen in training is used:
 *   p(w | c) = (count(c, w) + alpha) / (count(c) + alpha * V)
 * where V is the vocabulary size for the current input. Weights of tokens
 * present in the input sentence are then multiplied by copy_boost.
 */
class NgramScorer : public Scorer {
 public:
  NgramScorer(NgramCounts counts, NgramParams params, TokenSeq extra_vocab = {});

  TokenSeq Vocabulary(const TokenizedInput& input) const override;
  std::vector<double> NextWeights(const TokenizedInput& input,
                                  std::span<const Token> prefix) const override;

  /// Smoothed probabilities over `vocab` for exactly `context` (after backoff
  /// past unseen contexts), before the copy boost.
  std::vector<double> ContextDistribution(const TokenSeq& vocab,
                                          std::span<const Token> context) const;

  const NgramCounts& counts() const { return counts_; }
  const NgramParams& params() const { return params_; }

  /// Versioned text artifact; byte-identical for equal models.
  std::string Serialize() const;
  /// Throws FormatError.
  static NgramScorer Deserialize(std::string_view text);
  void Save(const std::string& path) const;
  static NgramScorer Load(const std::string& path);

 private:
  NgramCounts counts_;
  NgramParams params_;
  TokenSeq vocab_;  // training vocabulary plus extras, sorted
};

using TrainingPair = std::pair<TokenizedInput, LinearizedSeq>;

/// Counts every target once per pass. Throws std::invalid_argument on an empty
/// corpus or bad hyperparameters.
NgramScorer TrainNgram(const std::vector<TrainingPair>& corpus, const NgramParams& params,
                       std::uint64_t passes = 1, TokenSeq extra_vocab = {});

void CheckNgramParams(const NgramParams& params);

}  // namespace evgen

#endif  // EVGEN_SCORERS_H_
