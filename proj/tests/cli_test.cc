#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "evgen/dataset.h"
#include "support/fixtures.h"

namespace fs = std::filesystem;
using namespace evgen;
using namespace evgen::testing;

namespace {

const fs::path kTmp = EVGEN_TEST_TMPDIR;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Put(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Evgen(const std::string& args) {
  fs::create_directories(kTmp);
  auto out = kTmp / "stdout.txt";
  auto err = kTmp / "stderr.txt";
  std::string cmd = std::string("\"") + EVGEN_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                    err.string() + "\"";
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, Slurp(out), Slurp(err)};
}

std::string P(const char* name) { return "\"" + (kTmp / name).string() + "\""; }

void WriteFig2Files() {
  fs::create_directories(kTmp);
  Put(kTmp / "fig2.schema", "# running example\nTransport: Artifact, Destination, Origin\n"
                            "Arrest-Jail: Person, Time, Agent\n");
  Dataset d{{"fig1", Tokenize(kFig1Text), Fig2Records()}};
  WriteDataset((kTmp / "fig2.jsonl").string(), d);
}

}  // namespace

TEST_CASE("schema-validate") {
  WriteFig2Files();
  auto ok = Evgen("schema-validate " + P("fig2.schema"));
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok: 2 event types, 6 roles\n");

  Put(kTmp / "bad.schema", "Transport: Artifact\nTransport: Origin\n");
  auto bad = Evgen("schema-validate " + P("bad.schema"));
  CHECK(bad.code == 4);
  CHECK(bad.err.find("line 2") != std::string::npos);

  CHECK(Evgen("schema-validate " + P("missing.schema")).code == 2);
  CHECK(Evgen("schema-validate").code == 1);
  CHECK(Evgen("no-such-command").code == 1);
}

TEST_CASE("encode the running example") {
  WriteFig2Files();
  auto r = Evgen("encode " + P("fig2.jsonl") + " -s " + P("fig2.schema"));
  CHECK(r.code == 0);
  CHECK(r.out == std::string(kFig2Linearized) + "\n");

  Put(kTmp / "role.schema", "Transport: Artifact\nArrest-Jail: Person\n");
  CHECK(Evgen("encode " + P("fig2.jsonl") + " -s " + P("role.schema")).code == 5);
  Put(kTmp / "broken.jsonl", "{\"id\": 1}\n");
  CHECK(Evgen("encode " + P("broken.jsonl") + " -s " + P("fig2.schema")).code == 3);
}

TEST_CASE("parse: empty case, errors, grounding") {
  WriteFig2Files();
  Put(kTmp / "empty.txt", "( )\n");
  auto r = Evgen("parse " + P("empty.txt") + " -s " + P("fig2.schema"));
  CHECK(r.code == 0);
  auto s = ParseSentence(r.out);
  CHECK(s.events.empty());

  Put(kTmp / "bad.txt", "( )\n( ( Transport returned ( BogusRole x ) ) )\n");
  auto bad = Evgen("parse " + P("bad.txt") + " -s " + P("fig2.schema"));
  CHECK(bad.code == 3);
  CHECK(bad.err.find("line 2: unknown role at position 5") != std::string::npos);

  Put(kTmp / "fig2.seq", std::string(kFig2Linearized) + "\n");
  auto g = Evgen("parse " + P("fig2.seq") + " -s " + P("fig2.schema") + " --sentences " + P("fig2.jsonl"));
  CHECK(g.code == 0);
  CHECK(g.out == Slurp(kTmp / "fig2.jsonl"));
}

TEST_CASE("encode and parse are inverse through files") {
  WriteFig2Files();
  REQUIRE(Evgen("synth " + P("fig2.schema") + " --seed 5 --n 80 -o " + P("syn.jsonl")).code == 0);
  REQUIRE(Evgen("encode " + P("syn.jsonl") + " -s " + P("fig2.schema") + " -o " + P("syn.seq")).code == 0);
  REQUIRE(Evgen("parse " + P("syn.seq") + " -s " + P("fig2.schema") + " --sentences " + P("syn.jsonl") + " -o " +
                P("syn_back.jsonl"))
              .code == 0);
  CHECK(Slurp(kTmp / "syn_back.jsonl") == Slurp(kTmp / "syn.jsonl"));
  REQUIRE(Evgen("encode " + P("syn_back.jsonl") + " -s " + P("fig2.schema") + " -o " + P("syn2.seq")).code == 0);
  CHECK(Slurp(kTmp / "syn2.seq") == Slurp(kTmp / "syn.seq"));
}

TEST_CASE("synth is deterministic") {
  WriteFig2Files();
  auto a = Evgen("synth " + P("fig2.schema") + " --seed 7 --n 100");
  auto b = Evgen("synth " + P("fig2.schema") + " --seed 7 --n 100");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != Evgen("synth " + P("fig2.schema") + " --seed 8 --n 100").out);
}

TEST_CASE("decode with the oracle and evaluate") {
  WriteFig2Files();
  REQUIRE(Evgen("synth " + P("fig2.schema") + " --seed 9 --n 60 -o " + P("gold.jsonl")).code == 0);
  auto d = Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer oracle -o " + P("pred.jsonl"));
  CHECK(d.code == 0);
  auto e = Evgen("eval " + P("gold.jsonl") + " " + P("pred.jsonl") + " --json " + P("report.json"));
  CHECK(e.code == 0);
  CHECK(e.out.find("Trig-C    ") != std::string::npos);
  auto json = Slurp(kTmp / "report.json");
  CHECK(json.find("\"f1\": 1.0") != std::string::npos);
  CHECK(json.find("\"f1\": 0") == std::string::npos);

  // beam gives the same predictions, and repeated runs are byte-identical
  auto b = Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer oracle --beam 3");
  CHECK(b.code == 0);
  CHECK(b.out == Slurp(kTmp / "pred.jsonl"));
  auto u1 = Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer random:3 --max-len 1024");
  auto u2 = Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer random:3 --max-len 1024 -j 1");
  CHECK(u1.code == 0);
  CHECK(u1.out == u2.out);

  CHECK(Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer oracle --greedy --beam 2").code ==
        1);
  CHECK(Evgen("decode " + P("gold.jsonl") + " -s " + P("fig2.schema") + " --scorer nothing.model").code == 2);
}

TEST_CASE("train, then decode with the saved model") {
  WriteFig2Files();
  REQUIRE(Evgen("synth " + P("fig2.schema") + " --seed 2 --n 60 -o " + P("train.jsonl")).code == 0);
  auto t = Evgen("train " + P("train.jsonl") + " -s " + P("fig2.schema") + " --n 3 --alpha 0.1 --seed 1 -o " +
                 P("model.txt"));
  CHECK(t.code == 0);
  CHECK(t.out.find("curriculum  ") != std::string::npos);
  CHECK(t.out.find("direct  ") != std::string::npos);
  CHECK(t.out.find("inf") == std::string::npos);
  CHECK(t.out.find("nan") == std::string::npos);
  auto again = Evgen("train " + P("train.jsonl") + " -s " + P("fig2.schema") + " --n 3 --alpha 0.1 --seed 1 -o " +
                     P("model2.txt"));
  CHECK(again.out == t.out);
  CHECK(Slurp(kTmp / "model.txt") == Slurp(kTmp / "model2.txt"));
  CHECK(Slurp(kTmp / "model.txt").rfind("evgen-ngram v1", 0) == 0);

  auto d = Evgen("decode " + P("train.jsonl") + " -s " + P("fig2.schema") + " --scorer " + P("model.txt") +
                 " --max-len 512");
  CHECK((d.code == 0 || d.code == 6));
  std::istringstream lines(d.out);
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line); ++n) CHECK_NOTHROW(ParseSentence(line));
  CHECK(n == 60);

  CHECK(Evgen("train " + P("train.jsonl") + " --alpha 0").code == 1);
  CHECK(Evgen("train " + P("train.jsonl") + " --curriculum --direct").code == 1);
}

TEST_CASE("fuzz reports zero violations") {
  WriteFig2Files();
  auto r = Evgen("fuzz " + P("fig2.schema") + " --seeds 500");
  CHECK(r.code == 0);
  CHECK(r.out.find("decodes: 500\n") != std::string::npos);
  CHECK(r.out.find("violations: 0\n") != std::string::npos);
  CHECK(r.out == Evgen("fuzz " + P("fig2.schema") + " --seeds 500 -j 1").out);
}

TEST_CASE("eval rejects mismatched ids") {
  WriteFig2Files();
  Put(kTmp / "other.jsonl", "{\"id\": \"zzz\", \"text\": \"a b\"}\n");
  auto r = Evgen("eval " + P("fig2.jsonl") + " " + P("other.jsonl"));
  CHECK(r.code == 3);
}
