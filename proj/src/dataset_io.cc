#include "evgen/dataset.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "evgen/errors.h"

namespace evgen {

namespace {

using json = nlohmann::json;

const json& Field(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing field '") + key + "'", line_no);
  return *it;
}

std::string StringField(const json& obj, const char* key, std::size_t line_no) {
  const json& v = Field(obj, key, line_no);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string", line_no);
  return v.get<std::string>();
}

Mention ParseMention(const json& obj, const TokenizedInput& input, std::size_t line_no) {
  Mention m;
  m.text = Tokenize(StringField(obj, "text", line_no)).tokens;
  if (m.text.empty()) throw FormatError("empty mention text", line_no);
  auto it = obj.find("start");
  if (it == obj.end() || it->is_null()) return m;
  if (!it->is_number_unsigned()) throw FormatError("'start' must be a token index", line_no);
  std::size_t start = it->get<std::size_t>();
  if (start + m.text.size() > input.tokens.size() ||
      !std::equal(m.text.begin(), m.text.end(), input.tokens.begin() + static_cast<std::ptrdiff_t>(start))) {
    throw FormatError("mention '" + JoinTokens(m.text) + "' does not occur at token " + std::to_string(start),
                      line_no);
  }
  m.token_start = start;
  m.char_start = input.char_spans[start].start;
  return m;
}

json MentionJson(const Mention& m) {
  json j;
  j["text"] = JoinTokens(m.text);
  j["start"] = m.token_start ? json(*m.token_start) : json(nullptr);
  return j;
}

}  // namespace

Sentence ParseSentence(std::string_view json_line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!doc.is_object()) throw FormatError("expected a JSON object", line_no);
  Sentence s;
  const json& id = Field(doc, "id", line_no);
  if (id.is_string()) {
    s.id = id.get<std::string>();
  } else if (id.is_number_integer()) {
    s.id = std::to_string(id.get<long long>());
  } else {
    throw FormatError("field 'id' must be a string or integer", line_no);
  }
  s.input = Tokenize(StringField(doc, "text", line_no));
  auto events = doc.find("events");
  if (events == doc.end() || events->is_null()) return s;
  if (!events->is_array()) throw FormatError("field 'events' must be an array", line_no);
  for (const json& ev : *events) {
    if (!ev.is_object()) throw FormatError("event must be an object", line_no);
    EventRecord rec;
    rec.event_type = StringField(ev, "type", line_no);
    rec.trigger = ParseMention(Field(ev, "trigger", line_no), s.input, line_no);
    if (auto args = ev.find("args"); args != ev.end() && !args->is_null()) {
      if (!args->is_array()) throw FormatError("field 'args' must be an array", line_no);
      for (const json& a : *args) {
        if (!a.is_object()) throw FormatError("argument must be an object", line_no);
        rec.args.push_back({StringField(a, "role", line_no), ParseMention(a, s.input, line_no)});
      }
    }
    s.events.push_back(std::move(rec));
  }
  return s;
}

std::string SentenceToJson(const Sentence& sentence) {
  json doc;
  doc["id"] = sentence.id;
  doc["text"] = sentence.input.text;
  json events = json::array();
  for (const auto& rec : sentence.events) {
    json ev;
    ev["type"] = rec.event_type;
    ev["trigger"] = MentionJson(rec.trigger);
    json args = json::array();
    for (const auto& arg : rec.args) {
      json a = MentionJson(arg.mention);
      a["role"] = arg.role;
      args.push_back(std::move(a));
    }
    ev["args"] = std::move(args);
    events.push_back(std::move(ev));
  }
  doc["events"] = std::move(events);
  return doc.dump();
}

Dataset ReadDataset(std::istream& in) {
  Dataset out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(ParseSentence(line, line_no));
  }
  return out;
}

Dataset ReadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  try {
    return ReadDataset(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void WriteDataset(std::ostream& out, const Dataset& data) {
  for (const auto& s : data) out << SentenceToJson(s) << '\n';
}

void WriteDataset(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset '" + path + "'");
  WriteDataset(out, data);
  if (!out) throw IoError("failed writing dataset '" + path + "'");
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace evgen
