#include "evgen/scorer.h"

#include <cmath>
#include <string>
#include <unordered_set>

#include "evgen/errors.h"
#include "evgen/schema.h"

namespace evgen {

std::vector<double> LogNormalize(std::span<const double> weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw DecodeError("scorer returned invalid weight " + std::to_string(w) + " at index " +
                        std::to_string(i));
    }
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DecodeError("scorer weights do not normalize (sum " + std::to_string(total) + ")");
  }
  std::vector<double> out(weights.size());
  double log_total = std::log(total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = weights[i] > 0.0 ? std::log(weights[i]) - log_total : -INFINITY;
  }
  return out;
}

TokenSeq BaseVocabulary(const EventSchema& schema) {
  TokenSeq out{Token(kOpen), Token(kClose), Token(kEos)};
  for (auto& tok : schema.LabelVocabulary()) out.push_back(std::move(tok));
  return out;
}

TokenSeq ExtendWithInput(const TokenSeq& base, const TokenizedInput& input) {
  TokenSeq out = base;
  std::unordered_set<Token> seen(base.begin(), base.end());
  for (const auto& tok : input.tokens) {
    if (seen.insert(tok).second) out.push_back(tok);
  }
  return out;
}

}  // namespace evgen
