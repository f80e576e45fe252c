#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khd/hfl_search.hpp"
#include "khd/khovanov.hpp"
#include "khd/link_diagram.hpp"

namespace khd {

/// Integral Khovanov homology of T(2,6): Z at (0,4), (0,6), (2,8), (3,12),
/// (4,12), (5,16), (6,16), (6,18) and Z/2 at (3,10), (5,14).
const BigradedGroup& t26_template();

/// Exact equality with the template. Groups over other rings never match.
bool match_template(const BigradedGroup& g);

/// First cell where the groups differ, scanning the support of `a` and then
/// that of `b`, each by increasing i and decreasing j.
std::optional<Bidegree> first_difference(const BigradedGroup& a, const BigradedGroup& b);

enum class Parity { Even, Odd };

/// Common parity of every supported quantum grading. Throws RuleError for an
/// empty group or mixed parities.
Parity component_parity_rule(const BigradedGroup& g);

struct LeeRuleResult {
  int components = 0;
  std::vector<int> survivor_gradings;
  std::optional<int> linking_number;
};

/// Component count from the total Lee rank, plus a linking number when two
/// components leave survivors at exactly {0, 2 lk}. Throws RuleError when the
/// total is not a power of two or some rank_i(Kh, Q) < rank_i(Lee).
LeeRuleResult lee_rule(const GradedRanks& kh_by_i, const GradedRanks& lee_by_i);

/// Rank sequence of a tensor product: the convolution of the parts.
GradedRanks tensor_ranks(const std::vector<GradedRanks>& parts);

/// All shifts A with rank_tensor(s + A) <= rank_whole(s) for every s, in
/// increasing order. Throws RuleError when `parts` is empty.
std::vector<int> splitting_shift_rule(const GradedRanks& whole, const std::vector<GradedRanks>& parts);

/// Ordered pairs (r1, r2) with r1 * r2 = total and both r_k = 2 mod 4.
std::vector<std::pair<std::size_t, std::size_t>> component_rank_factorization_rule(std::size_t total_rank_f2);

enum class Verdict { Pass, Fail, NotApplicable };
const char* verdict_name(Verdict v);

struct RuleRecord {
  std::string rule;
  std::string inputs;
  Verdict verdict = Verdict::NotApplicable;
  /// Short statement of the fact the rule relies on.
  std::string basis;
};

struct DetectionReport {
  std::size_t crossings = 0;
  int components = 0;
  std::vector<RuleRecord> rules;
  bool overall = false;
  std::string message;
  std::optional<Bidegree> first_difference;
  std::optional<int> linking_number;
  /// Components inferred by the Lee rule (0 when it did not run).
  int inferred_components = 0;
  std::size_t total_rank_q = 0;
  std::size_t total_rank_f2 = 0;

  const RuleRecord* find(const std::string& rule) const;
  std::string to_json() const;
  std::string to_text() const;
};

struct DetectionOptions {
  std::size_t workers = 1;
  /// Case reports backing the braidedness rule; computed once on demand.
  const std::vector<hfl::CaseReport>* case_reports = nullptr;
};

/// Template comparison followed, on a match, by the parity, Lee,
/// factorization, splitting and braidedness audits.
DetectionReport detect_t26(const LinkDiagram& d, const DetectionOptions& options = {});

/// The case reports used when DetectionOptions::case_reports is null.
const std::vector<hfl::CaseReport>& default_case_reports();

}  // namespace khd
