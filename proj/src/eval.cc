#include "evgen/eval.h"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "evgen/errors.h"

namespace evgen {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::optional<std::pair<std::size_t, std::size_t>> SpanOf(const Mention& m, const Sentence& s,
                                                         OffsetGranularity g) {
  if (!m.token_start || m.text.empty()) return std::nullopt;
  std::size_t begin = *m.token_start;
  std::size_t end = m.token_end();
  if (g == OffsetGranularity::kToken) return std::make_pair(begin, end);
  if (end > s.input.char_spans.size()) return std::nullopt;
  return std::make_pair(s.input.char_spans[begin].start, s.input.char_spans[end - 1].end);
}

std::map<std::string, const Sentence*> IndexById(const Dataset& data, const char* which) {
  std::map<std::string, const Sentence*> out;
  for (const auto& s : data) {
    if (!out.emplace(s.id, &s).second) {
      throw FormatError(std::string("duplicate sentence id '") + s.id + "' in " + which);
    }
  }
  return out;
}

void Tally(MetricCounts& m, const std::vector<MatchItem>& gold, const std::vector<MatchItem>& pred,
           Criterion c) {
  m.gold += gold.size();
  m.predicted += pred.size();
  m.matched += GreedyMatch(gold, pred, c);
}

}  // namespace

double MetricCounts::Precision() const { return Ratio(matched, predicted); }
double MetricCounts::Recall() const { return Ratio(matched, gold); }
double MetricCounts::F1() const {
  double p = Precision();
  double r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

MetricCounts& MetricCounts::operator+=(const MetricCounts& o) {
  gold += o.gold;
  predicted += o.predicted;
  matched += o.matched;
  return *this;
}

std::vector<MatchItem> TriggerItems(const Sentence& s, OffsetGranularity g) {
  std::vector<MatchItem> out;
  for (const auto& rec : s.events) out.push_back({SpanOf(rec.trigger, s, g), rec.event_type, {}});
  return out;
}

std::vector<MatchItem> ArgumentItems(const Sentence& s, OffsetGranularity g) {
  std::vector<MatchItem> out;
  for (const auto& rec : s.events) {
    for (const auto& arg : rec.args) out.push_back({SpanOf(arg.mention, s, g), rec.event_type, arg.role});
  }
  return out;
}

bool Compatible(const MatchItem& gold, const MatchItem& pred, Criterion c) {
  if (!gold.span || !pred.span || *gold.span != *pred.span) return false;
  switch (c) {
    case Criterion::kTrigI:
      return true;
    case Criterion::kTrigC:
    case Criterion::kArgI:
      return gold.event_type == pred.event_type;
    case Criterion::kArgC:
      return gold.event_type == pred.event_type && gold.role == pred.role;
  }
  return false;
}

std::size_t GreedyMatch(const std::vector<MatchItem>& gold, const std::vector<MatchItem>& pred, Criterion c) {
  std::vector<bool> used(gold.size(), false);
  std::size_t matched = 0;
  for (const auto& p : pred) {
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (!used[j] && Compatible(gold[j], p, c)) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  return matched;
}

EvalReport Evaluate(const Dataset& gold, const Dataset& pred, OffsetGranularity g) {
  auto gold_ix = IndexById(gold, "gold");
  auto pred_ix = IndexById(pred, "predictions");
  for (const auto& [id, s] : pred_ix) {
    if (!gold_ix.count(id)) throw FormatError("prediction for unknown sentence id '" + id + "'");
  }
  EvalReport r;
  for (const auto& gs : gold) {
    auto it = pred_ix.find(gs.id);
    if (it == pred_ix.end()) throw FormatError("no prediction for sentence id '" + gs.id + "'");
    const Sentence& ps = *it->second;
    auto gt = TriggerItems(gs, g);
    auto pt = TriggerItems(ps, g);
    auto ga = ArgumentItems(gs, g);
    auto pa = ArgumentItems(ps, g);
    Tally(r.trig_i, gt, pt, Criterion::kTrigI);
    Tally(r.trig_c, gt, pt, Criterion::kTrigC);
    Tally(r.arg_i, ga, pa, Criterion::kArgI);
    Tally(r.arg_c, ga, pa, Criterion::kArgC);
  }
  return r;
}

std::string EvalReport::ToText() const {
  std::string out = "metric  gold  pred  match  P       R       F1\n";
  auto row = [&](const char* name, const MetricCounts& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-6s  %4zu  %4zu  %5zu  %.4f  %.4f  %.4f\n", name, m.gold,
                  m.predicted, m.matched, m.Precision(), m.Recall(), m.F1());
    out += buf;
  };
  row("Trig-I", trig_i);
  row("Trig-C", trig_c);
  row("Arg-I", arg_i);
  row("Arg-C", arg_c);
  return out;
}

std::string EvalReport::ToJson() const {
  auto obj = [](const MetricCounts& m) {
    return nlohmann::ordered_json{{"gold", m.gold},           {"predicted", m.predicted},
                                  {"matched", m.matched},     {"precision", m.Precision()},
                                  {"recall", m.Recall()},     {"f1", m.F1()}};
  };
  nlohmann::ordered_json j;
  j["Trig-I"] = obj(trig_i);
  j["Trig-C"] = obj(trig_c);
  j["Arg-I"] = obj(arg_i);
  j["Arg-C"] = obj(arg_c);
  return j.dump(2);
}

}  // namespace evgen
