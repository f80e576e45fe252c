#include "khd/diagram_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "khd/error.hpp"

namespace khd {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

int as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return v.get<int>();
}

LinkDiagram diagram_from_json(const json& doc, std::optional<int> free_override) {
  const json* pd = &doc;
  int free_circles = 0;
  if (doc.is_object()) {
    if (!doc.contains("pd")) throw ParseError("PD object needs a \"pd\" member");
    pd = &doc["pd"];
    if (doc.contains("free_circles")) free_circles = as_int(doc["free_circles"], "free_circles");
  }
  if (!pd->is_array()) throw ParseError("PD code must be a JSON array of 4-element arrays");
  std::vector<std::array<int, 4>> tuples;
  for (const auto& x : *pd) {
    if (!x.is_array() || x.size() != 4) throw ParseError("each crossing must have 4 arc labels");
    std::array<int, 4> t{};
    for (int k = 0; k < 4; ++k) t[k] = as_int(x[k], "arc label");
    tuples.push_back(t);
  }
  if (free_override) free_circles = *free_override;
  return LinkDiagram::from_pd(tuples, free_circles);
}

BraidSpec braid_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("strands") || !doc.contains("word")) {
    throw ParseError("braid must be {\"strands\": n, \"word\": [...]}");
  }
  BraidSpec spec;
  spec.word.strand_count = as_int(doc["strands"], "strands");
  if (!doc["word"].is_array()) throw ParseError("braid word must be an array");
  for (const auto& x : doc["word"]) spec.word.letters.push_back(as_int(x, "braid letter"));
  if (doc.contains("axis")) {
    if (!doc["axis"].is_boolean()) throw ParseError("axis must be a boolean");
    spec.axis = doc["axis"].get<bool>();
  }
  spec.word.validate();
  return spec;
}

}  // namespace

LinkDiagram parse_pd(std::string_view text, std::optional<int> free_circles) {
  return diagram_from_json(parse_json(text), free_circles);
}

std::string serialize_pd(const LinkDiagram& d) {
  json pd = json::array();
  for (const auto& t : d.pd_tuples()) pd.push_back(t);
  if (d.free_circles() == 0) return pd.dump();
  nlohmann::ordered_json doc;
  doc["pd"] = pd;
  doc["free_circles"] = d.free_circles();
  return doc.dump();
}

BraidSpec parse_braid(std::string_view text) { return braid_from_json(parse_json(text)); }

LinkDiagram load_diagram(std::string_view text) {
  const json doc = parse_json(text);
  if (doc.is_object() && doc.contains("strands")) {
    const BraidSpec spec = braid_from_json(doc);
    return from_braid_closure(spec.word, spec.axis);
  }
  return diagram_from_json(doc, std::nullopt);
}

LinkDiagram load_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_diagram(buf.str());
}

}  // namespace khd
