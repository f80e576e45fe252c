#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "khd/detection.hpp"

namespace khd {

/// One data row of a census CSV (`name,pd,free_circles`).
struct CensusRow {
  std::size_t line = 0;
  std::string name;
  std::string pd;
  int free_circles = 0;
  /// Set when the row could not be split into fields.
  std::optional<std::string> error;
};

/// Splits a census file into rows. The header line is required unless the
/// text is empty; field-level problems become error rows, not exceptions.
std::vector<CensusRow> parse_census(const std::string& text);

struct CensusEntry {
  std::string name;
  std::string verdict;  // "pass", "fail" or "error"
  std::string message;
  std::size_t crossings = 0;
  int components = 0;
  std::size_t rank_q = 0;
  std::size_t rank_f2 = 0;
};

/// detect_t26 on every row, concurrently, reported in input order.
std::vector<CensusEntry> run_census(const std::vector<CensusRow>& rows, const DetectionOptions& options = {});
std::vector<CensusEntry> run_census_file(const std::string& path, const DetectionOptions& options = {});

std::string census_to_csv(const std::vector<CensusEntry>& entries);
std::string census_to_json(const std::vector<CensusEntry>& entries);

}  // namespace khd
