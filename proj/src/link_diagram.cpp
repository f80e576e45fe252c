#include "khd/link_diagram.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>

#include "khd/error.hpp"

namespace khd {

namespace {

struct Slot {
  std::size_t crossing;
  int position;
  bool operator==(const Slot&) const = default;
};

class Incidence {
 public:
  explicit Incidence(std::span<const std::array<int, 4>> tuples) : tuples_(tuples) {
    for (std::size_t c = 0; c < tuples.size(); ++c) {
      for (int p = 0; p < 4; ++p) {
        const int label = tuples[c][p];
        if (label <= 0) {
          throw DiagramError("arc labels must be positive integers, got " + std::to_string(label));
        }
        auto& list = slots_[label];
        list.push_back({c, p});
      }
    }
    for (const auto& [label, list] : slots_) {
      if (list.size() != 2) {
        throw DiagramError("arc multiplicity: label " + std::to_string(label) + " appears " +
                           std::to_string(list.size()) + " times, expected 2");
      }
    }
  }

  int label(Slot s) const { return tuples_[s.crossing][s.position]; }

  /// Slot at the far end of the arc leaving through `exit`.
  Slot across(Slot exit) const {
    const auto& list = slots_.at(label(exit));
    return list[0] == exit ? list[1] : list[0];
  }

  /// Walk of entry slots starting by entering `start`.
  std::vector<Slot> walk(Slot start) const {
    std::vector<Slot> entries;
    Slot at = start;
    do {
      entries.push_back(at);
      at = across({at.crossing, (at.position + 2) % 4});
    } while (!(at == start));
    return entries;
  }

  const std::map<int, std::vector<Slot>>& slots() const { return slots_; }

 private:
  std::span<const std::array<int, 4>> tuples_;
  std::map<int, std::vector<Slot>> slots_;
};

}  // namespace

void BraidWord::validate() const {
  if (strand_count < 1) throw DiagramError("braid must have at least one strand");
  for (int k : letters) {
    if (k == 0 || std::abs(k) >= strand_count) {
      throw DiagramError("braid letter " + std::to_string(k) + " out of range for " +
                         std::to_string(strand_count) + " strands");
    }
  }
}

LinkDiagram LinkDiagram::from_pd(std::span<const std::array<int, 4>> tuples, int free_circles) {
  return from_signed_pd(tuples, {}, free_circles);
}

LinkDiagram LinkDiagram::from_signed_pd(std::span<const std::array<int, 4>> tuples,
                                        std::span<const int> signs, int free_circles) {
  if (free_circles < 0) throw DiagramError("free_circles must be non-negative");
  if (!signs.empty() && signs.size() != tuples.size()) {
    throw DiagramError("sign list does not match crossing count");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw DiagramError("crossing signs must be +1 or -1");
  }
  if (tuples.empty() && free_circles == 0) throw DiagramError("diagram has no components");

  const Incidence inc(tuples);
  LinkDiagram d;
  d.free_circles_ = free_circles;
  d.crossings_.resize(tuples.size());
  for (std::size_t c = 0; c < tuples.size(); ++c) d.crossings_[c].arcs = tuples[c];

  // Over-strand entry position per crossing, filled in as components are walked.
  std::vector<int> over_in(tuples.size(), 0);

  auto votes = [&](const std::vector<Slot>& entries) {
    int forward = 0;
    int backward = 0;
    for (const Slot& s : entries) {
      if (s.position == 0) ++forward;
      if (s.position == 2) ++backward;
      if (!signs.empty() && (s.position == 1 || s.position == 3)) {
        const int expected = signs[s.crossing] > 0 ? 3 : 1;
        (s.position == expected ? forward : backward)++;
      }
    }
    return std::pair{forward, backward};
  };

  int component = 0;
  for (const auto& [label, list] : inc.slots()) {
    if (d.component_of_.contains(label)) continue;
    std::vector<Slot> entries = inc.walk(list[1]);
    auto [forward, backward] = votes(entries);
    if (forward > 0 && backward > 0) {
      throw DiagramError("inconsistent orientation along the strand through arc " +
                         std::to_string(label));
    }
    if (backward > 0) {
      entries = inc.walk(list[0]);
    } else if (forward == 0) {
      // Over-only strand: leave the smallest arc towards its lower-labelled neighbour.
      std::vector<Slot> reverse = inc.walk(list[0]);
      auto next_label = [&](const std::vector<Slot>& e) {
        return inc.label({e[0].crossing, (e[0].position + 2) % 4});
      };
      auto tie_key = [&](Slot s) { return std::tuple{tuples[s.crossing], s.position}; };
      const int a = next_label(entries);
      const int b = next_label(reverse);
      if (b < a || (a == b && tie_key(list[0]) < tie_key(list[1]))) entries = std::move(reverse);
    }
    for (const Slot& s : entries) {
      d.component_of_[inc.label(s)] = component;
      if (s.position == 1 || s.position == 3) over_in[s.crossing] = s.position;
    }
    ++component;
  }
  d.pd_components_ = component;

  for (std::size_t c = 0; c < tuples.size(); ++c) {
    d.crossings_[c].sign = over_in[c] == 3 ? 1 : -1;
    (d.crossings_[c].sign > 0 ? d.n_plus_ : d.n_minus_)++;
  }
  for (const auto& [label, list] : inc.slots()) d.arc_labels_.push_back(label);
  const int base = d.arc_labels_.empty() ? 0 : d.arc_labels_.back();
  for (int k = 0; k < free_circles; ++k) d.component_of_[base + 1 + k] = component + k;
  return d;
}

std::vector<int> LinkDiagram::all_arcs() const {
  std::vector<int> out = arc_labels_;
  for (int k = 0; k < free_circles_; ++k) out.push_back(free_circle_arc(k));
  return out;
}

bool LinkDiagram::has_arc(int label) const { return component_of_.contains(label); }

int LinkDiagram::component_of(int label) const {
  auto it = component_of_.find(label);
  if (it == component_of_.end()) throw DiagramError("unknown arc label " + std::to_string(label));
  return it->second;
}

int LinkDiagram::free_circle_arc(int k) const {
  if (k < 0 || k >= free_circles_) throw DiagramError("free circle index out of range");
  const int base = arc_labels_.empty() ? 0 : arc_labels_.back();
  return base + 1 + k;
}

std::vector<std::array<int, 4>> LinkDiagram::pd_tuples() const {
  std::vector<std::array<int, 4>> out;
  out.reserve(crossings_.size());
  for (const auto& c : crossings_) out.push_back(c.arcs);
  return out;
}

namespace {

std::vector<int> signs_of(const std::vector<Crossing>& crossings) {
  std::vector<int> s;
  s.reserve(crossings.size());
  for (const auto& c : crossings) s.push_back(c.sign);
  return s;
}

}  // namespace

LinkDiagram LinkDiagram::mirror() const {
  std::vector<std::array<int, 4>> tuples;
  std::vector<int> signs;
  for (const auto& c : crossings_) {
    const auto& [a, b, cc, e] = c.arcs;
    // The old over strand becomes the under strand; start at its entry.
    if (c.sign > 0) {
      tuples.push_back({e, a, b, cc});
    } else {
      tuples.push_back({b, cc, e, a});
    }
    signs.push_back(-c.sign);
  }
  return from_signed_pd(tuples, signs, free_circles_);
}

LinkDiagram LinkDiagram::permuted(std::span<const std::size_t> order) const {
  if (order.size() != crossings_.size()) throw DiagramError("permutation has wrong length");
  std::vector<char> used(order.size(), 0);
  std::vector<std::array<int, 4>> tuples;
  std::vector<int> signs;
  for (std::size_t k : order) {
    if (k >= order.size() || used[k]) throw DiagramError("not a permutation of the crossings");
    used[k] = 1;
    tuples.push_back(crossings_[k].arcs);
    signs.push_back(crossings_[k].sign);
  }
  return from_signed_pd(tuples, signs, free_circles_);
}

LinkDiagram LinkDiagram::sublink(int component) const {
  if (component < 0 || component >= component_count()) {
    throw DiagramError("component index out of range");
  }
  if (component >= pd_components_) return from_pd({}, 1);

  // Join the two arcs at every crossing where this component meets another.
  std::map<int, int> parent;
  auto find = [&](int x) {
    while (parent.contains(x) && parent[x] != x) x = parent[x];
    return x;
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  };
  std::vector<std::array<int, 4>> kept;
  std::vector<int> kept_signs;
  for (const auto& c : crossings_) {
    const bool under_in = component_of(c.arcs[0]) == component;
    const bool over_in = component_of(c.arcs[1]) == component;
    if (under_in && over_in) {
      kept.push_back(c.arcs);
      kept_signs.push_back(c.sign);
    } else if (under_in) {
      unite(c.arcs[0], c.arcs[2]);
    } else if (over_in) {
      unite(c.arcs[1], c.arcs[3]);
    }
  }
  if (kept.empty()) return from_pd({}, 1);
  for (auto& t : kept) {
    for (int& label : t) label = find(label);
  }
  return from_signed_pd(kept, kept_signs, 0);
}

LinkDiagram LinkDiagram::disjoint_union(const LinkDiagram& other) const {
  const int shift = arc_labels_.empty() ? 0 : arc_labels_.back();
  std::vector<std::array<int, 4>> tuples = pd_tuples();
  std::vector<int> signs = signs_of(crossings_);
  for (const auto& c : other.crossings_) {
    auto t = c.arcs;
    for (int& label : t) label += shift;
    tuples.push_back(t);
    signs.push_back(c.sign);
  }
  return from_signed_pd(tuples, signs, free_circles_ + other.free_circles_);
}

LinkDiagram from_braid_closure(const BraidWord& word, bool include_axis) {
  word.validate();
  const int n = word.strand_count;
  int next_label = 1;
  std::vector<int> bottom(n);
  for (int p = 0; p < n; ++p) bottom[p] = next_label++;
  std::vector<int> current = bottom;

  std::vector<std::array<int, 4>> tuples;
  std::vector<int> signs;

  if (include_axis) {
    // The axis passes east over every strand (crossings L_p), then back west
    // under them just above (crossings U_p). Axis arcs in traversal order:
    //   west turn (U_1 -> L_1), lower[p] (L_p -> L_{p+1}), east turn
    //   (L_n -> U_n), upper[p] (U_{p+1} -> U_p).
    const int west_turn = next_label++;
    std::vector<int> lower(n > 1 ? n - 1 : 0), upper(n > 1 ? n - 1 : 0);
    for (auto& l : lower) l = next_label++;
    const int east_turn = next_label++;
    for (auto& u : upper) u = next_label++;
    for (int p = 0; p < n; ++p) {
      const int lower_west = p == 0 ? west_turn : lower[p - 1];
      const int lower_east = p == n - 1 ? east_turn : lower[p];
      const int upper_west = p == 0 ? west_turn : upper[p - 1];
      const int upper_east = p == n - 1 ? east_turn : upper[p];
      const int strand_in = current[p];
      const int strand_mid = next_label++;
      const int strand_out = next_label++;
      // Axis over the strand, heading east.
      tuples.push_back({strand_in, lower_east, strand_mid, lower_west});
      signs.push_back(1);
      // Axis under the strand, heading west.
      tuples.push_back({upper_east, strand_out, upper_west, strand_mid});
      signs.push_back(1);
      current[p] = strand_out;
    }
  }

  for (int letter : word.letters) {
    const int k = std::abs(letter) - 1;
    const int left_in = current[k];
    const int right_in = current[k + 1];
    const int left_out = next_label++;
    const int right_out = next_label++;
    if (letter > 0) {
      tuples.push_back({right_in, right_out, left_out, left_in});
      signs.push_back(1);
    } else {
      tuples.push_back({left_in, right_in, right_out, left_out});
      signs.push_back(-1);
    }
    current[k] = left_out;
    current[k + 1] = right_out;
  }

  int free_circles = 0;
  std::map<int, int> rename;
  for (int p = 0; p < n; ++p) {
    if (current[p] == bottom[p]) {
      ++free_circles;
    } else {
      rename[current[p]] = bottom[p];
    }
  }
  for (auto& t : tuples) {
    for (int& label : t) {
      if (auto it = rename.find(label); it != rename.end()) label = it->second;
    }
  }
  // Compact labels to 1..2c so serialized diagrams look like table PD codes.
  std::map<int, int> compact;
  for (const auto& t : tuples) {
    for (int label : t) compact.emplace(label, 0);
  }
  int fresh = 1;
  for (auto& [label, value] : compact) value = fresh++;
  for (auto& t : tuples) {
    for (int& label : t) label = compact[label];
  }
  return LinkDiagram::from_signed_pd(tuples, signs, free_circles);
}

int linking_number(const LinkDiagram& d, int c1, int c2) {
  const int n = d.component_count();
  if (c1 < 0 || c2 < 0 || c1 >= n || c2 >= n) throw DiagramError("component index out of range");
  if (c1 == c2) throw DiagramError("linking number needs two distinct components");
  int sum = 0;
  for (std::size_t c = 0; c < d.crossing_count(); ++c) {
    const int u = d.under_component(c);
    const int o = d.over_component(c);
    if ((u == c1 && o == c2) || (u == c2 && o == c1)) sum += d.crossings()[c].sign;
  }
  return sum / 2;
}

}  // namespace khd
