#include <doctest.h>

#include <random>

#include "evgen/decoder.h"
#include "evgen/grounding.h"
#include "evgen/scorers.h"
#include "support/fixtures.h"

using namespace evgen;
using namespace evgen::testing;

TEST_CASE("running example triggers and arguments") {
  auto in = Tokenize(kFig1Text);
  auto grounded = Ground(EraseOffsets(Fig2Records()), in);
  CHECK(grounded == [&] {
    auto expect = Fig2Records();
    for (auto& r : expect) {
      r.trigger.char_start = in.char_spans[*r.trigger.token_start].start;
      for (auto& a : r.args) a.mention.char_start = in.char_spans[*a.mention.token_start].start;
    }
    return expect;
  }());
  CHECK(grounded[0].trigger.char_start == std::optional<std::size_t>(8));  // "returned"
}

TEST_CASE("one-by-one trigger cursor") {
  auto in = Tokenize("he hit him then hit her");
  std::vector<EventRecord> recs{{"Attack", M("hit"), {}}, {"Attack", M("hit"), {}}};
  auto g = GroundTriggers(recs, in);
  CHECK(g[0].trigger.token_start == std::optional<std::size_t>(1));
  CHECK(g[1].trigger.token_start == std::optional<std::size_t>(4));

  // a third "hit" has nothing left to match
  recs.push_back({"Attack", M("hit"), {}});
  auto h = GroundTriggers(recs, in);
  CHECK_FALSE(h[2].trigger.grounded());
}

TEST_CASE("absent trigger is flagged and does not move the cursor") {
  auto in = Tokenize("he hit him then hit her");
  std::vector<EventRecord> recs{{"Attack", M("absent"), {}}, {"Attack", M("hit"), {}}};
  auto g = GroundTriggers(recs, in);
  CHECK_FALSE(g[0].trigger.grounded());
  CHECK(g[1].trigger.token_start == std::optional<std::size_t>(1));
}

TEST_CASE("nearest argument occurrence") {
  auto in = Tokenize("the man saw the man");
  EventRecord rec{"Meet", M("saw", 2), {{"Entity", M("the man")}}};
  auto g = GroundArguments(rec, in);
  CHECK(g.args[0].mention.token_start == std::optional<std::size_t>(3));

  // equidistant: x at 0 and 4, trigger at 2 -> the earlier one
  auto tie_in = Tokenize("x a t b x");
  EventRecord tie{"Meet", M("t", 2), {{"Entity", M("x")}}};
  CHECK(GroundArguments(tie, tie_in).args[0].mention.token_start == std::optional<std::size_t>(0));

  EventRecord missing{"Meet", M("saw", 2), {{"Entity", M("nobody")}}};
  CHECK_FALSE(GroundArguments(missing, in).args[0].mention.grounded());

  EventRecord no_trigger{"Meet", M("saw"), {{"Entity", M("the man")}}};
  CHECK_FALSE(GroundArguments(no_trigger, in).args[0].mention.grounded());
}

TEST_CASE("running example: 'The man' has a single occurrence") {
  auto in = Tokenize(kFig1Text);
  EventRecord rec{"Arrest-Jail", M("capture", 10), {{"Person", M("The man")}}};
  CHECK(GroundArguments(rec, in).args[0].mention.token_start == std::optional<std::size_t>(0));
}

TEST_CASE("property: grounded offsets point at the mention, decoder output is groundable") {
  std::mt19937_64 rng(8);
  auto schema = Fig2Schema();
  SchemaTries tries(schema);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto in = Tokenize(JoinTokens(RandomSentence(rng, 1, 20, 8)));
    RandomScorer scorer(seed, BaseVocabulary(schema));
    DecodeConfig cfg;
    cfg.max_length = 1024;
    auto recs = Delinearize(ConstrainedDecode(scorer, in, tries, cfg).seq, tries);
    auto g = Ground(recs, in);
    for (const auto& r : g) {
      // triggers can run out of occurrences under the cursor; arguments of a
      // grounded trigger always find theirs
      if (!r.trigger.grounded()) continue;
      CHECK(std::equal(r.trigger.text.begin(), r.trigger.text.end(), in.tokens.begin() + *r.trigger.token_start));
      for (const auto& a : r.args) {
        REQUIRE(a.mention.grounded());
        CHECK(std::equal(a.mention.text.begin(), a.mention.text.end(),
                         in.tokens.begin() + *a.mention.token_start));
      }
    }
    if (!g.empty()) CHECK(g.front().trigger.grounded());
  }
}

TEST_CASE("trigger grounding is stable under edits after the scan point") {
  auto in = Tokenize("a hit b hit c hit d");
  std::vector<EventRecord> recs{{"Attack", M("hit"), {}}, {"Attack", M("hit"), {}}, {"Attack", M("hit"), {}}};
  auto base = GroundTriggers(recs, in);
  auto edited = recs;
  edited[2].event_type = "Die";
  edited.push_back({"Attack", M("c"), {}});
  auto after = GroundTriggers(edited, in);
  for (std::size_t i = 0; i < 3; ++i) CHECK(after[i].trigger.token_start == base[i].trigger.token_start);
}
