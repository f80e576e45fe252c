#pragma once

#include <string>
#include <vector>

#include "khd/diagram_io.hpp"
#include "khd/link_diagram.hpp"

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(KHD_DATA_DIR) + "/" + name; }

inline khd::LinkDiagram load(const std::string& name) { return khd::load_diagram_file(data(name)); }

inline khd::LinkDiagram braid(int strands, std::vector<int> letters, bool axis = false) {
  return khd::from_braid_closure(khd::BraidWord{strands, std::move(letters)}, axis);
}

/// Every bundled diagram file.
inline const std::vector<std::string>& bundled() {
  static const std::vector<std::string> names{
      "unknot.json",     "unknot_kink.json",  "hopf_pos.json",   "hopf_neg.json",      "hopf_unknot.json",
      "trefoil.json",    "trefoil_left.json", "t24.json",        "t26_braid.json",     "t26_axis.json",
      "t26_pd.json",     "l6a2_axis.json",    "unlink2.json",    "unlink2_braid.json", "t2_10.json",
      "t2_12.json",      "braid4_12.json"};
  return names;
}

/// Bundled diagrams small enough for the slower property checks.
inline std::vector<std::string> small_bundled() {
  std::vector<std::string> out;
  for (const auto& n : bundled()) {
    if (load(n).crossing_count() <= 8) out.push_back(n);
  }
  return out;
}

}  // namespace fixtures
