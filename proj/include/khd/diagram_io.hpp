#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "khd/link_diagram.hpp"

namespace khd {

/// Parses `[[a,b,c,d], ...]` or `{"pd": [...], "free_circles": k}`.
/// A non-empty `free_circles` argument overrides the value in the text.
LinkDiagram parse_pd(std::string_view text, std::optional<int> free_circles = std::nullopt);

/// Inverse of parse_pd: a bare array when there are no free circles,
/// otherwise the wrapper object.
std::string serialize_pd(const LinkDiagram& d);

struct BraidSpec {
  BraidWord word;
  bool axis = false;
};

/// Parses `{"strands": n, "word": [...], "axis": bool}` ("axis" optional).
BraidSpec parse_braid(std::string_view text);

/// Accepts any of the PD or braid formats above.
LinkDiagram load_diagram(std::string_view text);
LinkDiagram load_diagram_file(const std::string& path);

}  // namespace khd
