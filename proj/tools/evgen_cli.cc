// evgen: command-line driver for schema checks, encoding, decoding,
// training, evaluation, synthetic data and decoder fuzzing.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evgen/codec.h"
#include "evgen/curriculum.h"
#include "evgen/dataset.h"
#include "evgen/decoder.h"
#include "evgen/errors.h"
#include "evgen/eval.h"
#include "evgen/grounding.h"
#include "evgen/schema.h"
#include "evgen/scorers.h"

namespace {

using namespace evgen;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kFormat = 3,
  kSchema = 4,
  kConstraint = 5,
  kDecode = 6,
};

int ExitFor(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kIo: return kIo;
    case ErrorCategory::kFormat: return kFormat;
    case ErrorCategory::kSchema: return kSchema;
    case ErrorCategory::kConstraint: return kConstraint;
    case ErrorCategory::kDecode: return kDecode;
  }
  return kUsage;
}

// Writes to a file, or to stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts "uniform", "random:SEED", "oracle" (the gold events of each input
// sentence) or the path of a trained n-gram artifact.
struct ScorerSource {
  std::unique_ptr<Scorer> shared;
  std::vector<std::unique_ptr<Scorer>> per_sentence;

  std::vector<const Scorer*> ForEach(std::size_t n) const {
    std::vector<const Scorer*> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(shared ? shared.get() : per_sentence[i].get());
    return out;
  }
};

ScorerSource MakeScorer(const std::string& which, const EventSchema& schema, const Dataset& data) {
  ScorerSource src;
  TokenSeq base = BaseVocabulary(schema);
  if (which == "uniform") {
    src.shared = std::make_unique<UniformScorer>(base);
  } else if (which.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(which.substr(7));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad scorer seed in '" + which + "'");
    }
    src.shared = std::make_unique<RandomScorer>(seed, base);
  } else if (which == "oracle") {
    for (const auto& s : data) {
      src.per_sentence.push_back(std::make_unique<OracleScorer>(Linearize(s.events, &schema), 0.0, base));
    }
  } else {
    src.shared = std::make_unique<NgramScorer>(NgramScorer::Load(which));
  }
  return src;
}

int SchemaValidate(const std::string& path) {
  EventSchema schema = LoadSchema(path);
  std::size_t roles = 0;
  for (const auto& t : schema.types()) roles += t.roles.size();
  std::cout << "ok: " << schema.num_types() << " event types, " << roles << " roles\n";
  return kOk;
}

int Encode(const std::string& data_path, const std::string& schema_path, const std::string& out_path) {
  EventSchema schema = LoadSchema(schema_path);
  Dataset data = ReadDataset(data_path);
  Output out(out_path);
  for (const auto& s : data) {
    try {
      out.stream() << Linearize(s.events, &schema).str() << '\n';
    } catch (const ConstraintError& e) {
      throw ConstraintError("sentence '" + s.id + "': " + e.what());
    }
  }
  return kOk;
}

int Parse(const std::string& seqs_path, const std::string& schema_path, const std::string& sentences_path,
          const std::string& out_path) {
  EventSchema schema = LoadSchema(schema_path);
  SchemaTries tries(schema);
  std::vector<std::string> lines;
  {
    std::istringstream in(ReadFile(seqs_path));
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t\r") == std::string::npos) lines.pop_back();
  Dataset sentences;
  if (!sentences_path.empty()) {
    sentences = ReadDataset(sentences_path);
    if (sentences.size() != lines.size()) {
      throw FormatError("sequence file has " + std::to_string(lines.size()) + " lines but the sentence file has " +
                        std::to_string(sentences.size()));
    }
  }
  Dataset out_data;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Sentence s;
    if (!sentences.empty()) {
      s.id = sentences[i].id;
      s.input = sentences[i].input;
    } else {
      s.id = std::to_string(i + 1);
    }
    try {
      s.events = Delinearize(LinearizedSeq::FromString(lines[i]), tries);
    } catch (const ParseError& e) {
      throw FormatError(e.what(), i + 1);
    }
    if (!sentences.empty()) s.events = Ground(s.events, s.input);
    out_data.push_back(std::move(s));
  }
  Output out(out_path);
  WriteDataset(out.stream(), out_data);
  return kOk;
}

struct DecodeOptions {
  std::string data_path, schema_path, scorer, out_path;
  bool greedy = false;
  std::size_t beam = 0;
  std::size_t max_len = kDefaultMaxLength;
  bool no_constraints = false;
  std::size_t threads = 0;
  bool print_seqs = false;
};

int Decode(const DecodeOptions& o) {
  EventSchema schema = LoadSchema(o.schema_path);
  SchemaTries tries(schema);
  Dataset data = ReadDataset(o.data_path);
  ScorerSource src = MakeScorer(o.scorer, schema, data);

  DecodeConfig cfg;
  if (o.beam > 0 && !o.greedy) {
    cfg.mode = DecodeMode::kBeam;
    cfg.beam_width = o.beam;
  }
  cfg.max_length = o.max_len;
  cfg.constrained = !o.no_constraints;
  cfg.Validate();

  std::vector<TokenizedInput> inputs;
  for (const auto& s : data) inputs.push_back(s.input);
  auto items = DecodeBatch(src.ForEach(data.size()), inputs, tries, cfg, o.threads);

  int status = kOk;
  Dataset pred;
  Output out(o.out_path);
  for (std::size_t i = 0; i < data.size(); ++i) {
    Sentence p{data[i].id, data[i].input, {}};
    if (!items[i].ok()) {
      std::cerr << "sentence '" << p.id << "': " << items[i].error << '\n';
      status = ExitFor(*items[i].error_category);
    } else {
      try {
        p.events = Ground(Delinearize(items[i].result->seq, tries), p.input);
      } catch (const ParseError& e) {
        // only reachable without constraints
        std::cerr << "sentence '" << p.id << "': output does not parse: " << e.what() << '\n';
        status = kFormat;
      }
      if (o.print_seqs) std::cerr << p.id << '\t' << items[i].result->seq.str() << '\n';
    }
    out.stream() << SentenceToJson(p) << '\n';
  }
  return status;
}

struct TrainOptions {
  std::string data_path, schema_path, out_path, report_path;
  NgramParams params;
  bool curriculum = false;
  bool direct = false;
  CurriculumConfig cfg;
  bool per_unit = false;
};

int Train(TrainOptions o) {
  std::unique_ptr<EventSchema> schema;
  if (!o.schema_path.empty()) schema = std::make_unique<EventSchema>(LoadSchema(o.schema_path));
  Dataset data = ReadDataset(o.data_path);
  o.cfg.params = o.params;
  if (o.per_unit) o.cfg.mode = SubstructureMode::kPerUnit;
  CurriculumResult r = CurriculumTrain(data, o.cfg, schema.get());
  const NgramScorer& chosen = o.direct ? r.direct : r.curriculum;
  if (!o.out_path.empty()) chosen.Save(o.out_path);
  std::string report = r.ToText();
  std::cout << report;
  if (!o.report_path.empty()) {
    Output rep(o.report_path);
    rep.stream() << report;
  }
  return kOk;
}

int Eval(const std::string& gold_path, const std::string& pred_path, const std::string& json_path, bool by_char) {
  Dataset gold = ReadDataset(gold_path);
  Dataset pred = ReadDataset(pred_path);
  EvalReport r = Evaluate(gold, pred, by_char ? OffsetGranularity::kChar : OffsetGranularity::kToken);
  std::cout << r.ToText();
  if (!json_path.empty()) {
    Output out(json_path);
    out.stream() << r.ToJson() << '\n';
  }
  return kOk;
}

int Synth(const std::string& schema_path, std::uint64_t seed, std::size_t n, const SynthParams& params,
          std::size_t vocab_size, const std::string& out_path) {
  EventSchema schema = LoadSchema(schema_path);
  Dataset data = GenerateSynthetic(schema, DefaultSynthVocabulary(vocab_size, seed + 1), seed, n, params);
  Output out(out_path);
  WriteDataset(out.stream(), data);
  std::cerr << ComputeStats(data).ToText();
  return kOk;
}

int Stats(const std::string& data_path) {
  std::cout << ComputeStats(ReadDataset(data_path)).ToText();
  return kOk;
}

bool OccursIn(const TokenSeq& hay, const TokenSeq& needle) {
  return !needle.empty() && FindTokens(hay, needle, 0) != static_cast<std::size_t>(-1);
}

int Fuzz(const std::string& schema_path, std::size_t seeds, std::uint64_t base_seed, std::size_t max_len,
         std::size_t threads, bool verbose) {
  EventSchema schema = LoadSchema(schema_path);
  SchemaTries tries(schema);
  TokenSeq base = BaseVocabulary(schema);

  // Inputs mix pseudo-words, label tokens and punctuation so labels can
  // also appear as span text.
  TokenSeq words = DefaultSynthVocabulary(60, base_seed + 1);
  for (const auto& t : schema.LabelVocabulary()) words.push_back(t);
  for (const char* p : {".", ",", "'"}) words.emplace_back(p);

  std::vector<TokenizedInput> inputs;
  std::vector<std::unique_ptr<Scorer>> scorers;
  std::vector<const Scorer*> scorer_ptrs;
  for (std::size_t k = 0; k < seeds; ++k) {
    std::mt19937_64 rng(base_seed + k);
    std::uniform_int_distribution<std::size_t> len(0, 24);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    TokenSeq sent;
    for (std::size_t n = len(rng); n > 0; --n) sent.push_back(words[pick(rng)]);
    inputs.push_back(Tokenize(JoinTokens(sent)));
    scorers.push_back(std::make_unique<RandomScorer>(base_seed + k, base));
    scorer_ptrs.push_back(scorers.back().get());
  }

  DecodeConfig cfg;
  cfg.max_length = max_len;
  auto items = DecodeBatch(scorer_ptrs, inputs, tries, cfg, threads);

  std::size_t violations = 0, truncated = 0, events = 0, empty = 0;
  for (std::size_t k = 0; k < seeds; ++k) {
    std::string problem;
    if (!items[k].ok()) {
      if (items[k].error_category == ErrorCategory::kDecode) {
        ++truncated;
        continue;
      }
      problem = items[k].error;
    } else {
      try {
        auto recs = Delinearize(items[k].result->seq, tries);
        ValidateRecords(recs, schema);
        for (const auto& r : recs) {
          if (!OccursIn(inputs[k].tokens, r.trigger.text)) problem = "trigger is not an input span";
          for (const auto& a : r.args) {
            if (!OccursIn(inputs[k].tokens, a.mention.text)) problem = "argument is not an input span";
          }
        }
        events += recs.size();
        if (recs.empty()) ++empty;
      } catch (const Error& e) {
        problem = e.what();
      }
    }
    if (!problem.empty()) {
      ++violations;
      std::cerr << "seed " << base_seed + k << ": " << problem << '\n';
    } else if (verbose) {
      std::cerr << "seed " << base_seed + k << ": " << items[k].result->seq.str() << '\n';
    }
  }
  std::cout << "decodes: " << seeds << '\n'
            << "violations: " << violations << '\n'
            << "truncated: " << truncated << '\n'
            << "empty outputs: " << empty << '\n'
            << "events: " << events << '\n';
  return violations == 0 ? kOk : kConstraint;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evgen: event extraction as constrained sequence generation"};
  app.require_subcommand(1);

  std::string schema_path, data_path, out_path, seqs_path, sentences_path, gold_path, pred_path, json_path;

  auto* validate = app.add_subcommand("schema-validate", "Check a schema document");
  validate->add_option("schema", schema_path, "Schema document")->required();

  auto* encode = app.add_subcommand("encode", "Linearize a dataset, one sequence per line");
  encode->add_option("data", data_path, "Dataset (JSON lines)")->required();
  encode->add_option("-s,--schema", schema_path, "Schema document")->required();
  encode->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* parse = app.add_subcommand("parse", "Turn linearized sequences back into records");
  parse->add_option("seqs", seqs_path, "Sequence file, one per line")->required();
  parse->add_option("-s,--schema", schema_path, "Schema document")->required();
  parse->add_option("--sentences", sentences_path, "Dataset giving ids and text, one line per sequence; enables grounding");
  parse->add_option("-o,--output", out_path, "Output file (default stdout)");

  DecodeOptions dec;
  auto* decode = app.add_subcommand("decode", "Decode events for every sentence of a dataset");
  decode->add_option("data", dec.data_path, "Dataset (JSON lines); events are ignored unless --scorer oracle")->required();
  decode->add_option("-s,--schema", dec.schema_path, "Schema document")->required();
  decode->add_option("--scorer", dec.scorer, "Model file, 'uniform', 'random:SEED' or 'oracle'")->required();
  auto* greedy_flag = decode->add_flag("--greedy", dec.greedy, "Greedy search (default)");
  decode->add_option("--beam", dec.beam, "Beam search with this width")->excludes(greedy_flag);
  decode->add_option("--max-len", dec.max_len, "Maximum output length, sentinels included")
      ->capture_default_str();
  decode->add_flag("--no-constraints", dec.no_constraints, "Decode over the full vocabulary");
  decode->add_option("-j,--threads", dec.threads, "Worker threads (0: hardware concurrency)");
  decode->add_flag("--print-seqs", dec.print_seqs, "Echo the decoded sequences to stderr");
  decode->add_option("-o,--output", dec.out_path, "Output file (default stdout)");

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Train an n-gram scorer and compare curriculum against direct training");
  train->add_option("data", tr.data_path, "Grounded training dataset")->required();
  train->add_option("-s,--schema", tr.schema_path, "Schema document (for validation and label vocabulary)");
  train->add_option("--n", tr.params.order, "N-gram order")->capture_default_str();
  train->add_option("--alpha", tr.params.alpha, "Additive smoothing")->capture_default_str();
  train->add_option("--copy-boost", tr.params.copy_boost, "Weight multiplier for input tokens")->capture_default_str();
  auto* cur_flag = train->add_flag("--curriculum", tr.curriculum, "Save the curriculum model (default)");
  train->add_flag("--direct", tr.direct, "Save the directly trained model")->excludes(cur_flag);
  train->add_option("--seed", tr.cfg.seed, "Train/held-out split seed")->capture_default_str();
  train->add_option("--sub-epochs", tr.cfg.substructure_epochs, "Substructure passes")->capture_default_str();
  train->add_option("--full-epochs", tr.cfg.full_epochs, "Full-structure passes")->capture_default_str();
  train->add_option("--held-out", tr.cfg.held_out_fraction, "Held-out fraction")->capture_default_str();
  train->add_flag("--per-unit", tr.per_unit, "One substructure target per unit");
  train->add_option("-o,--output", tr.out_path, "Model file to write");
  train->add_option("--report", tr.report_path, "Also write the report here");

  bool by_char = false;
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("gold", gold_path, "Gold dataset")->required();
  eval->add_option("pred", pred_path, "Predicted dataset")->required();
  eval->add_option("--json", json_path, "Write the machine-readable report here");
  eval->add_flag("--char", by_char, "Match character offsets instead of token offsets");

  std::uint64_t seed = 0;
  std::size_t n = 100, vocab_size = 400;
  SynthParams sp;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("schema", schema_path, "Schema document")->required();
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();
  synth->add_option("--n", n, "Number of sentences")->capture_default_str();
  synth->add_option("--event-rate", sp.event_rate, "Mean events per sentence")->capture_default_str();
  synth->add_option("--max-events", sp.max_events, "Events per sentence cap")->capture_default_str();
  synth->add_option("--arg-prob", sp.arg_prob, "Chance of each role being filled")->capture_default_str();
  synth->add_option("--vocab-size", vocab_size, "Pseudo-word vocabulary size")->capture_default_str();
  synth->add_option("-o,--output", out_path, "Output file (default stdout)");

  auto* stats = app.add_subcommand("stats", "Summarize a dataset");
  stats->add_option("data", data_path, "Dataset")->required();

  std::size_t seeds = 500, fuzz_max_len = 1024, fuzz_threads = 0;
  bool verbose = false;
  auto* fuzz = app.add_subcommand("fuzz", "Decode random inputs with random scorers and check every output");
  fuzz->add_option("schema", schema_path, "Schema document")->required();
  fuzz->add_option("--seeds", seeds, "Number of decodes")->capture_default_str();
  fuzz->add_option("--seed", seed, "First seed")->capture_default_str();
  fuzz->add_option("--max-len", fuzz_max_len, "Maximum output length")->capture_default_str();
  fuzz->add_option("-j,--threads", fuzz_threads, "Worker threads (0: hardware concurrency)");
  fuzz->add_flag("-v,--verbose", verbose, "Print every decoded sequence to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return SchemaValidate(schema_path);
    if (*encode) return Encode(data_path, schema_path, out_path);
    if (*parse) return Parse(seqs_path, schema_path, sentences_path, out_path);
    if (*decode) return Decode(dec);
    if (*train) return Train(tr);
    if (*eval) return Eval(gold_path, pred_path, json_path, by_char);
    if (*synth) return Synth(schema_path, seed, n, sp, vocab_size, out_path);
    if (*stats) return Stats(data_path);
    if (*fuzz) return Fuzz(schema_path, seeds, seed, fuzz_max_len, fuzz_threads, verbose);
  } catch (const Error& e) {
    std::cerr << "evgen: " << CategoryName(e.category()) << " error: " << e.what() << '\n';
    return ExitFor(e.category());
  } catch (const std::invalid_argument& e) {
    std::cerr << "evgen: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "evgen: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
