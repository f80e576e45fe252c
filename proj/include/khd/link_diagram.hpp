#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace khd {

/// One crossing of a planar diagram. `arcs` lists the four arc labels
/// counterclockwise, starting at the incoming under-strand, so the under
/// strand always runs arcs[0] -> arcs[2]. The over strand runs
/// arcs[3] -> arcs[1] when sign == +1 and arcs[1] -> arcs[3] when sign == -1.
struct Crossing {
  std::array<int, 4> arcs{};
  int sign = 0;

  /// Position (1 or 3) at which the over strand enters the crossing.
  int over_entry() const { return sign > 0 ? 3 : 1; }
  int over_exit() const { return sign > 0 ? 1 : 3; }
};

/// Braid word on `strand_count` strands; letter +k is sigma_k, -k its inverse.
struct BraidWord {
  int strand_count = 1;
  std::vector<int> letters;

  /// Throws DiagramError unless strand_count >= 1 and 1 <= |k| < strand_count.
  void validate() const;
};

/// Oriented link diagram built from PD tuples plus a count of crossingless
/// unknotted components. Immutable after construction.
///
/// Components are numbered contiguously from 0: PD components first, in
/// increasing order of their smallest arc label, then free circles. Free
/// circle k is addressed by the synthetic arc label max_pd_label + 1 + k so a
/// basepoint can be placed on it.
class LinkDiagram {
 public:
  LinkDiagram() = default;

  /// Validates arc multiplicities, orients every strand and derives signs.
  /// Components that never pass under a crossing are oriented so that the
  /// traversal leaves their smallest arc towards its lower-labelled neighbour.
  static LinkDiagram from_pd(std::span<const std::array<int, 4>> tuples, int free_circles = 0);
  /// As from_pd, but with crossing signs prescribed. The signs fix the
  /// direction of every over strand and are checked against the under strands.
  static LinkDiagram from_signed_pd(std::span<const std::array<int, 4>> tuples,
                                    std::span<const int> signs, int free_circles = 0);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  int free_circles() const { return free_circles_; }
  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }
  int writhe() const { return n_plus_ - n_minus_; }

  /// Number of link components including free circles.
  int component_count() const { return pd_components_ + free_circles_; }
  int pd_component_count() const { return pd_components_; }

  /// PD arc labels in increasing order (free-circle labels excluded).
  const std::vector<int>& pd_arcs() const { return arc_labels_; }
  /// PD arc labels followed by the synthetic free-circle labels.
  std::vector<int> all_arcs() const;
  bool has_arc(int label) const;
  /// Component index of an arc label; throws DiagramError for unknown labels.
  int component_of(int label) const;
  /// Synthetic label of free circle k.
  int free_circle_arc(int k) const;

  /// Component of the under strand / over strand at crossing `c`.
  int under_component(std::size_t c) const { return component_of(crossings_[c].arcs[0]); }
  int over_component(std::size_t c) const { return component_of(crossings_[c].arcs[1]); }

  /// The PD tuples as stored.
  std::vector<std::array<int, 4>> pd_tuples() const;

  /// Flips every crossing; orientations are kept, so signs negate.
  LinkDiagram mirror() const;
  /// Same diagram with crossings listed in the order given.
  LinkDiagram permuted(std::span<const std::size_t> order) const;
  /// Diagram of a single component: crossings against other components are
  /// deleted and the arcs through them joined.
  LinkDiagram sublink(int component) const;
  /// Disjoint union (arc labels of `other` are shifted past ours).
  LinkDiagram disjoint_union(const LinkDiagram& other) const;

 private:
  std::vector<Crossing> crossings_;
  int free_circles_ = 0;
  int pd_components_ = 0;
  int n_plus_ = 0;
  int n_minus_ = 0;
  std::vector<int> arc_labels_;
  std::map<int, int> component_of_;
};

/// Braid closure with strands oriented along the braid. With `include_axis`
/// an unknotted circle encircling all strands is added; it meets each strand
/// in two positive crossings, so its linking number with the closure equals
/// strand_count.
LinkDiagram from_braid_closure(const BraidWord& word, bool include_axis = false);

/// Half the signed count of crossings between components c1 and c2.
int linking_number(const LinkDiagram& d, int c1, int c2);

inline int component_count(const LinkDiagram& d) { return d.component_count(); }

}  // namespace khd
