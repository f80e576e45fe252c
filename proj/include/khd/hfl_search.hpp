#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace khd::hfl {

/// Maslov and Alexander gradings, all stored doubled: m2 = 2M (even),
/// a1_2 = 2 a1 and a2_2 = 2 a2 (odd for a two-component link).
struct TriGrading {
  int m2 = 0;
  int a1_2 = 0;
  int a2_2 = 0;

  auto operator<=>(const TriGrading&) const = default;

  /// Doubled Alexander grading along axis 1 or 2.
  int along(int axis) const { return axis == 1 ? a1_2 : a2_2; }
  /// (M, a1, a2) -> (M - 2a1 - 2a2, -a1, -a2).
  TriGrading mirror_image() const { return {m2 - 2 * a1_2 - 2 * a2_2, -a1_2, -a2_2}; }
  /// Twice a1 + a2 - M - 1/2.
  int delta2() const { return a1_2 + a2_2 - m2 - 1; }

  /// "(M, a1, a2)" with halves written as fractions.
  std::string to_string() const;
};

/// Formats a doubled grading: 3 -> "3/2", -4 -> "-2".
std::string half(int doubled);
/// Parses "3/2", "-1/2", "2"; returns the doubled value.
std::optional<int> parse_half(const std::string& text);

/// Multiplicities of candidate generators, all positive.
class RankFunction {
 public:
  RankFunction() = default;
  explicit RankFunction(std::map<TriGrading, int> m);

  const std::map<TriGrading, int>& support() const { return mult_; }
  int at(const TriGrading& g) const;
  void add(const TriGrading& g, int count = 1);
  int total() const;
  bool empty() const { return mult_.empty(); }

  /// Sum of multiplicities with doubled a_axis grading `value`.
  int rank_along(int axis, int value) const;
  /// Largest doubled a_axis grading in the support.
  int top(int axis) const;

  bool single_delta() const;
  bool symmetric() const;
  /// Even total rank in every a1 grading and every a2 grading.
  bool even_rows() const;
  /// All four invariants, including total <= 12.
  bool valid() const;

  RankFunction mirrored() const;
  std::string to_string() const;

  bool operator==(const RankFunction&) const = default;
  auto operator<=>(const RankFunction&) const = default;

 private:
  std::map<TriGrading, int> mult_;
};

inline constexpr int kMaxRank = 12;

struct CaseSpec {
  enum class Kind { Fixed, Above, Below };
  Kind kind = Kind::Fixed;
  /// Doubled x for fixed cases, or the doubled representative being run.
  int x2 = 3;
  /// Doubled bound on |a_i| for added generators; defaults to the largest
  /// |a_i| among the seed generators.
  std::optional<int> window2;
  /// Number of representatives sampled for the open regions.
  int samples = 2;

  static CaseSpec fixed(int x2);
  static CaseSpec above(int samples = 2);
  static CaseSpec below(int samples = 2);
  /// "3/2", "-1/2", ">5/2", "<-3/2" (also "x>5/2", "x<-3/2").
  static CaseSpec parse(const std::string& text);

  std::string name() const;
  /// Doubled representatives: {x2} for fixed cases, 7, 9, ... above and
  /// -5, -7, ... below.
  std::vector<int> representatives() const;
};

/// The seven cases, in the order x > 5/2, 5/2, 3/2, 1/2, -1/2, -3/2, x < -3/2.
std::vector<CaseSpec> all_cases(int samples = 2);

/// Forced generators (0, 3/2, x), (-1, 3/2, x-1), (0, x, 3/2), (-1, x-1, 3/2)
/// and their mirror images, coincidences merged. Throws RuleError unless x2 is odd.
RankFunction seed_generators(int x2);

/// Doubled grading determined by a (a1, a2) pair on the seed's delta level.
TriGrading on_level(int x2, int a1_2, int a2_2);

/// Every symmetric superset of the seed with even rows and total <= 12 whose
/// added generators satisfy max |a_i| <= window, in a fixed order.
std::vector<RankFunction> enumerate_completions(const CaseSpec& c);
std::vector<RankFunction> enumerate_completions(int x2, int window2);

enum class Contract {
  /// Differentials keep the off-axis grading and lower M and the axis grading by 1.
  Strict,
  /// Differentials lower M by 1 and do not raise the off-axis grading.
  Lax,
};

struct MatchingCertificate {
  int axis = 1;
  std::vector<std::pair<TriGrading, TriGrading>> pairs;  // (source, target)
  std::vector<TriGrading> survivors;
};

/// Cancellation pattern leaving exactly rank one at (M, a_off) = (0, 3/2) and
/// (-1, 3/2), where a_off is the grading that is not `axis`. Returns nothing if
/// no perfect matching exists. Throws RuleError unless rf is non-empty and on a
/// single delta level.
std::optional<MatchingCertificate> check_spectral_sequence(const RankFunction& rf, int axis,
                                                           Contract contract = Contract::Strict);

/// Whether a (source, target) pair is an allowed cancellation along `axis`.
bool allowed_move(const TriGrading& from, const TriGrading& to, int axis, Contract contract);

/// Rank exactly 2 in the top a1 grading or in the top a2 grading.
bool braided_conclusion(const RankFunction& rf);

struct SampleReport {
  int x2 = 0;
  std::size_t enumerated = 0;
  std::size_t admissible = 0;
  std::size_t braided = 0;
  std::vector<RankFunction> witnesses;
  std::vector<RankFunction> counterexamples;

  /// Shape of the report independent of x: counts and the sorted list of
  /// (total, top a1 rank, top a2 rank) over admissible configurations.
  std::vector<std::size_t> signature() const;
};

struct CaseReport {
  std::string name;
  std::vector<SampleReport> samples;
  /// All samples have the same signature.
  bool stable = true;

  std::size_t enumerated() const { return samples.front().enumerated; }
  std::size_t admissible() const { return samples.front().admissible; }
  std::size_t braided() const { return samples.front().braided; }
  std::size_t counterexample_count() const;

  std::string to_json() const;
  std::string to_text() const;
};

struct SearchOptions {
  Contract contract = Contract::Strict;
  /// Extra doubled width beyond the case's window. Configurations using the
  /// extra room are checked like the others; the base verdict needs 0.
  int window_extension = 0;
};

/// Enumerates, filters to configurations with certificates along both axes
/// and checks the braided conclusion on each.
CaseReport run_case(const CaseSpec& c, const SearchOptions& options = {});
std::vector<CaseReport> run_all(int samples = 2, const SearchOptions& options = {});

/// Throws RuleError naming the first admissible non-braided configuration.
void require_no_counterexample(const std::vector<CaseReport>& reports);

std::string reports_to_json(const std::vector<CaseReport>& reports);

}  // namespace khd::hfl
