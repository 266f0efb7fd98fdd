#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "evgen/curriculum.h"
#include "evgen/decoder.h"
#include "evgen/errors.h"
#include "evgen/grounding.h"
#include "support/fixtures.h"

using namespace evgen;
using namespace evgen::testing;

TEST_CASE("substructure target of the running example") {
  auto in = Tokenize(kFig1Text);
  auto pairs = ExtractSubstructures(in, Fig2Records());
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].second.str() ==
        "( ( Transport returned ) ( Artifact The man ) ( Destination Los Angeles ) ( Origin Mexico ) "
        "( Arrest Jail capture ) ( Person The man ) ( Time Tuesday ) ( Agent bounty hunters ) )");
  CHECK(pairs[0].first.tokens == in.tokens);
}

TEST_CASE("substructure order follows the full linearization, not input order") {
  auto in = Tokenize(kFig1Text);
  auto recs = Fig2Records();
  std::reverse(recs.begin(), recs.end());
  auto pairs = ExtractSubstructures(in, recs);
  CHECK(pairs[0].second.str().rfind("( ( Transport returned ) ( Artifact The man )", 0) == 0);
}

TEST_CASE("no events gives the empty target") {
  auto in = Tokenize("nothing here");
  auto pairs = ExtractSubstructures(in, {});
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].second.str() == "( )");
  CHECK(ExtractSubstructures(in, {}, SubstructureMode::kPerUnit).empty());
}

TEST_CASE("per-unit mode") {
  auto in = Tokenize(kFig1Text);
  auto pairs = ExtractSubstructures(in, Fig2Records(), SubstructureMode::kPerUnit);
  REQUIRE(pairs.size() == 8);
  CHECK(pairs[0].second.str() == "( ( Transport returned ) )");
  CHECK(pairs[1].second.str() == "( ( Artifact The man ) )");
  CHECK(pairs[7].second.str() == "( ( Agent bounty hunters ) )");
}

TEST_CASE("ParseSubstructures") {
  auto schema = Fig2Schema();
  auto units = ParseSubstructures(
      LinearizedSeq::FromString("( ( Transport returned ) ( Artifact The man ) ( Arrest Jail capture ) )"), schema);
  std::vector<SubstructureUnit> expect{
      {"Transport", {"returned"}}, {"Artifact", {"The", "man"}}, {"Arrest-Jail", {"capture"}}};
  CHECK(units == expect);
  CHECK(ParseSubstructures(LinearizedSeq::FromString("( )"), schema).empty());
  CHECK_THROWS_AS(ParseSubstructures(LinearizedSeq::FromString("( ( Nope x ) )"), schema), ParseError);
  CHECK_THROWS_AS(ParseSubstructures(LinearizedSeq::FromString("( ( Transport ) )"), schema), ParseError);
  CHECK_THROWS_AS(ParseSubstructures(LinearizedSeq::FromString("( ( Transport x ( Artifact y ) ) )"), schema),
                  ParseError);
  CHECK_THROWS_AS(ParseSubstructures(LinearizedSeq::FromString("( ( Transport x )"), schema), ParseError);
}

TEST_CASE("property: extracted units agree with the records") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    auto schema = RandomSchema(rng, 8, 4);
    auto sent = RandomSentence(rng, 1, 12, 10);
    auto recs = RandomRecords(rng, schema, sent, 4);
    auto in = Tokenize(JoinTokens(sent));
    auto pairs = ExtractSubstructures(in, recs);
    auto units = ParseSubstructures(pairs[0].second, schema);
    std::size_t expected = 0;
    for (const auto& r : recs) expected += 1 + r.args.size();
    REQUIRE(units.size() == expected);
    std::size_t k = 0;
    for (const auto& r : CanonicalOrder(recs)) {
      CHECK(units[k].label == r.event_type);
      CHECK(units[k++].span == r.trigger.text);
      for (const auto& a : r.args) {
        CHECK(units[k].label == a.role);
        CHECK(units[k++].span == a.mention.text);
      }
    }
  }
}

TEST_CASE("synthetic data is deterministic per seed") {
  auto schema = Fig2Schema();
  auto vocab = DefaultSynthVocabulary();
  auto dump = [](const Dataset& d) {
    std::ostringstream os;
    WriteDataset(os, d);
    return os.str();
  };
  auto a = dump(GenerateSynthetic(schema, vocab, 7, 100));
  auto b = dump(GenerateSynthetic(schema, vocab, 7, 100));
  CHECK(a == b);
  CHECK(a != dump(GenerateSynthetic(schema, vocab, 8, 100)));
  CHECK(DefaultSynthVocabulary() == DefaultSynthVocabulary());
  CHECK(std::set<Token>(vocab.begin(), vocab.end()).size() == vocab.size());
}

TEST_CASE("synthetic sentences are well formed and groundable") {
  auto schema = Fig2Schema();
  SynthParams p;
  p.event_rate = 2.0;
  p.arg_prob = 0.7;
  auto data = GenerateSynthetic(schema, DefaultSynthVocabulary(), 3, 200, p);
  REQUIRE(data.size() == 200);
  std::size_t with_events = 0;
  for (const auto& s : data) {
    CHECK(s.id.rfind("syn-3-", 0) == 0);
    CHECK(s.events.size() <= p.max_events);
    CHECK(s.input.tokens.back() == ".");
    std::set<Token> uniq(s.input.tokens.begin(), s.input.tokens.end());
    CHECK(uniq.size() == s.input.tokens.size());
    ValidateRecords(s.events, schema);
    CHECK(Ground(EraseOffsets(s.events), s.input) == Ground(s.events, s.input));
    auto sorted = s.events;
    SortByAppearance(sorted);
    CHECK(sorted == s.events);
    CHECK(Delinearize(Linearize(s.events, &schema), schema) == EraseOffsets(s.events));
    if (!s.events.empty()) ++with_events;
  }
  CHECK(with_events > 100);
}

TEST_CASE("event rate zero yields only empty targets") {
  auto schema = Fig2Schema();
  SynthParams p;
  p.event_rate = 0.0;
  for (const auto& s : GenerateSynthetic(schema, DefaultSynthVocabulary(), 1, 50, p)) {
    CHECK(s.events.empty());
    CHECK(Linearize(s.events, &schema).str() == "( )");
  }
}

TEST_CASE("synthetic generator rejects an unusable vocabulary") {
  auto schema = Fig2Schema();
  CHECK_THROWS_AS(GenerateSynthetic(schema, {"Transport", "("}, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(GenerateSynthetic(schema, {"a", "b"}, 1, 5), std::invalid_argument);
}

TEST_CASE("stats") {
  Dataset d{{"a", Tokenize(kFig1Text), Fig2Records()}, {"b", Tokenize("x y"), {}}};
  auto st = ComputeStats(d);
  CHECK(st.sentences == 2);
  CHECK(st.sentences_with_events == 1);
  CHECK(st.events == 2);
  CHECK(st.arguments == 6);
  CHECK(st.tokens == 18);
  CHECK(st.ToText().find("events: 2") != std::string::npos);
}

TEST_CASE("curriculum training: direct model equals plain training, counts add up") {
  auto schema = Fig2Schema();
  auto data = GenerateSynthetic(schema, DefaultSynthVocabulary(), 11, 60);
  CurriculumConfig cfg;
  cfg.seed = 4;
  auto r = CurriculumTrain(data, cfg, &schema);
  CHECK(r.train_ids.size() + r.held_out_ids.size() == data.size());
  CHECK(r.held_out_ids.size() == 12);

  std::vector<TrainingPair> full;
  NgramCounts sub(cfg.params.order);
  for (std::size_t i : r.train_ids) {
    full.emplace_back(data[i].input, Linearize(data[i].events, &schema));
    for (const auto& [in, t] : ExtractSubstructures(data[i].input, data[i].events)) sub.Add(t, 5);
  }
  auto plain = TrainNgram(full, cfg.params, 30, schema.LabelVocabulary());
  CHECK(plain.counts() == r.direct.counts());
  CHECK(plain.Serialize() == r.direct.Serialize());
  CHECK(sub == r.substructure_counts);

  NgramCounts sum = r.substructure_counts;
  sum += r.full_counts;
  CHECK(sum == r.curriculum.counts());
  for (const auto& [ctx, row] : r.curriculum.counts().table()) {
    for (const auto& [tok, c] : row) {
      CHECK(c == r.substructure_counts.Count(ctx, tok) + r.full_counts.Count(ctx, tok));
    }
  }

  CHECK(std::isfinite(r.held_out_nll_curriculum));
  CHECK(std::isfinite(r.held_out_nll_direct));
  CHECK(r.held_out_nll_direct > 0.0);
  CHECK(r.ToText().find("curriculum") != std::string::npos);

  // same seed, same split and same numbers
  auto again = CurriculumTrain(data, cfg, &schema);
  CHECK(again.held_out_ids == r.held_out_ids);
  CHECK(again.held_out_nll_curriculum == r.held_out_nll_curriculum);
}

TEST_CASE("curriculum training without a schema and with too little data") {
  auto schema = Fig2Schema();
  auto data = GenerateSynthetic(schema, DefaultSynthVocabulary(), 2, 10);
  CurriculumConfig cfg;
  auto r = CurriculumTrain(data, cfg);
  CHECK(std::isfinite(r.held_out_nll_direct));
  CHECK_THROWS_AS(CurriculumTrain(Dataset(data.begin(), data.begin() + 1), cfg), std::invalid_argument);
  cfg.held_out_fraction = 1.0;
  CHECK_THROWS_AS(CurriculumTrain(data, cfg), std::invalid_argument);
}
