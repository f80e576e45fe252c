#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "khd/exact_matrix.hpp"
#include "khd/link_diagram.hpp"
#include "khd/smith.hpp"

namespace khd {

/// Largest diagram the cube construction accepts.
inline constexpr std::size_t kMaxCrossings = 20;

struct Bidegree {
  int i = 0;  // homological
  int j = 0;  // quantum
  auto operator<=>(const Bidegree&) const = default;
};

/// A resolution of the cube (bit k set = 1-smoothing at crossing k) with
/// every state circle labelled; bit t of `labels` set means circle t carries x.
struct EnhancedState {
  std::uint32_t resolution = 0;
  std::uint32_t labels = 0;
  bool operator==(const EnhancedState&) const = default;
};

/// Homology as a finitely supported map (i, j) -> group. Zero groups are
/// never stored.
class BigradedGroup {
 public:
  explicit BigradedGroup(Domain ring = Domain::integers()) : ring_(ring) {}

  const Domain& ring() const { return ring_; }
  const std::map<Bidegree, GroupSummand>& groups() const { return groups_; }
  /// Adds (or replaces) a group; zero groups are dropped.
  void set(Bidegree at, GroupSummand g);
  /// Zero group when unsupported.
  GroupSummand at(Bidegree at) const;
  bool empty() const { return groups_.empty(); }

  std::size_t total_free_rank() const;

  /// {"ring": ..., "groups": [{"i","j","free","torsion"}]} sorted by (i, j).
  std::string to_json() const;
  static BigradedGroup from_json(const std::string& text);
  /// Human-readable table, one line per nonzero group.
  std::string to_text() const;

  bool operator==(const BigradedGroup&) const = default;

 private:
  Domain ring_;
  std::map<Bidegree, GroupSummand> groups_;
};

/// Ranks graded by a single integer.
struct GradedRanks {
  std::map<int, std::size_t> ranks;

  std::size_t total() const;
  std::size_t at(int k) const;
  bool operator==(const GradedRanks&) const = default;
};

/// Cube complex split into blocks. Every block is keyed by (i, j); the Lee
/// complex does not preserve j and keeps all of its blocks at j = 0.
struct ChainComplex {
  Domain ring = Domain::integers();
  bool quantum_graded = true;
  std::map<Bidegree, std::vector<EnhancedState>> generators;
  /// Differential leaving block (i, j), as a matrix from C(i, j) to
  /// C(i + 1, j). Present exactly for blocks that have generators.
  std::map<Bidegree, SparseMatrix> differentials;

  std::size_t dimension(Bidegree b) const;
};

enum class ComplexKind { Khovanov, Reduced, Lee };

struct ComplexOptions {
  ComplexKind kind = ComplexKind::Khovanov;
  /// Arc carrying the basepoint, for ComplexKind::Reduced.
  int basepoint = 0;
  /// Verify d o d = 0 block by block.
  bool check_square_zero = true;
};

/// Cube of resolutions. Gradings: i = r - n_-, j = i + n_+ - n_- + #1 - #x.
/// Edge signs are (-1)^(number of 1-smoothings before the changing crossing).
/// Reduced complexes keep states whose basepoint circle is labelled 1 and shift
/// j down by one, so the unknot sits at (0, 0). Throws ResourceError beyond
/// kMaxCrossings crossings.
ChainComplex build_complex(const LinkDiagram& d, Domain ring, const ComplexOptions& options = {});

struct HomologyOptions {
  /// Threads used for the per-block reductions.
  std::size_t workers = 1;
};

BigradedGroup homology(const ChainComplex& complex, const HomologyOptions& options = {});

BigradedGroup khovanov_homology(const LinkDiagram& d, Domain ring, const HomologyOptions& options = {});
BigradedGroup reduced_khovanov(const LinkDiagram& d, int basepoint, Domain ring,
                               const HomologyOptions& options = {});
/// Lee homology over Q, graded by i.
GradedRanks lee_homology(const LinkDiagram& d, const HomologyOptions& options = {});

enum class Collapse { Homological, HomologicalMinusQuantum, DeltaPrime };

/// How a group contributes to a rank: its free rank (the ring's own ranks, or
/// ranks over Q for integer groups), or its rank after reduction modulo a prime
/// through the universal coefficient theorem (integer groups only).
struct RankRule {
  enum class Kind { Native, ModPrime } kind = Kind::Native;
  std::uint32_t p = 0;

  static RankRule native() { return {}; }
  static RankRule mod(std::uint32_t prime) { return {Kind::ModPrime, prime}; }
};

/// Per-(i, j) ranks under a rank rule.
std::map<Bidegree, std::size_t> bigraded_ranks(const BigradedGroup& g, RankRule rule = RankRule::native());

/// Collapses to i, i - j or delta' = j - 2i.
GradedRanks graded_projection(const BigradedGroup& g, Collapse mode, RankRule rule = RankRule::native());

/// Rank sum over all (i, j).
std::size_t total_rank(const BigradedGroup& g, RankRule rule = RankRule::native());

}  // namespace khd
