#include "khd/census.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "khd/diagram_io.hpp"
#include "khd/error.hpp"
#include "khd/parallel.hpp"

namespace khd {

namespace {

// RFC 4180 fields: quotes delimit fields that contain commas, "" escapes a quote.
std::optional<std::vector<std::string>> split_csv(const std::string& line, std::string* why) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back().push_back('"');
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) {
    *why = "unterminated quote";
    return std::nullopt;
  }
  return fields;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CensusRow> parse_census(const std::string& text) {
  std::vector<CensusRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::string why;
    const auto fields = split_csv(line, &why);
    if (!header) {
      if (!fields || fields->size() < 3 || trim((*fields)[0]) != "name" || trim((*fields)[1]) != "pd" ||
          trim((*fields)[2]) != "free_circles") {
        throw ParseError("census header must be name,pd,free_circles");
      }
      header = true;
      continue;
    }
    CensusRow row;
    row.line = number;
    if (!fields) {
      row.name = "line " + std::to_string(number);
      row.error = why;
    } else if (fields->size() != 3) {
      row.name = trim(fields->front());
      row.error = "expected 3 fields, found " + std::to_string(fields->size());
    } else {
      row.name = trim((*fields)[0]);
      row.pd = trim((*fields)[1]);
      const std::string fc = trim((*fields)[2]);
      try {
        std::size_t used = 0;
        row.free_circles = fc.empty() ? 0 : std::stoi(fc, &used);
        if (!fc.empty() && used != fc.size()) throw std::invalid_argument(fc);
        if (row.free_circles < 0) throw std::invalid_argument(fc);
      } catch (const std::exception&) {
        row.error = "free_circles must be a non-negative integer";
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CensusEntry> run_census(const std::vector<CensusRow>& rows, const DetectionOptions& options) {
  std::vector<CensusEntry> out(rows.size());
  DetectionOptions inner = options;
  inner.workers = 1;
  parallel_for(rows.size(), options.workers, [&](std::size_t k) {
    const CensusRow& row = rows[k];
    CensusEntry& e = out[k];
    e.name = row.name;
    if (row.error) {
      e.verdict = "error";
      e.message = "line " + std::to_string(row.line) + ": " + *row.error;
      return;
    }
    try {
      const LinkDiagram d = parse_pd(row.pd, row.free_circles);
      const DetectionReport r = detect_t26(d, inner);
      e.verdict = r.overall ? "pass" : "fail";
      e.message = r.message;
      e.crossings = r.crossings;
      e.components = r.components;
      e.rank_q = r.total_rank_q;
      e.rank_f2 = r.total_rank_f2;
    } catch (const Error& err) {
      e.verdict = "error";
      e.message = "line " + std::to_string(row.line) + ": " + err.what();
    }
  });
  return out;
}

std::vector<CensusEntry> run_census_file(const std::string& path, const DetectionOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open census file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_census(parse_census(buffer.str()), options);
}

std::string census_to_csv(const std::vector<CensusEntry>& entries) {
  std::ostringstream out;
  out << "name,verdict,crossings,components,rank_Q,rank_F2,message\n";
  for (const auto& e : entries) {
    std::string msg;
    for (char c : e.message) msg += c == '"' ? std::string("\"\"") : std::string(1, c);
    out << e.name << "," << e.verdict << "," << e.crossings << "," << e.components << "," << e.rank_q << ","
        << e.rank_f2 << ",\"" << msg << "\"\n";
  }
  return out.str();
}

std::string census_to_json(const std::vector<CensusEntry>& entries) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json row;
    row["name"] = e.name;
    row["verdict"] = e.verdict;
    row["crossings"] = e.crossings;
    row["components"] = e.components;
    row["rank_Q"] = e.rank_q;
    row["rank_F2"] = e.rank_f2;
    row["message"] = e.message;
    doc.push_back(std::move(row));
  }
  return doc.dump();
}

}  // namespace khd
