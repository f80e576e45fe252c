#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "khd/error.hpp"
#include "khd/hfl_search.hpp"

using namespace khd;
using namespace khd::hfl;

namespace {

// Gradings written with undoubled Maslov index and doubled Alexander gradings.
TriGrading g(int m, int a1_2, int a2_2) { return {2 * m, a1_2, a2_2}; }

RankFunction rf(std::initializer_list<TriGrading> gens) {
  RankFunction r;
  for (const auto& x : gens) r.add(x);
  return r;
}

// Six forced generators at x = 3/2 plus (-2, 1/2, 1/2) and (-4, -1/2, -1/2).
RankFunction eight_generator_configuration() {
  return rf({g(0, 3, 3), g(-1, 1, 3), g(-1, 3, 1), g(-5, -3, -1), g(-5, -1, -3), g(-6, -3, -3), g(-2, 1, 1),
             g(-4, -1, -1)});
}

std::vector<TriGrading> expand(const RankFunction& r) {
  std::vector<TriGrading> out;
  for (const auto& [x, k] : r.support()) out.insert(out.end(), k, x);
  return out;
}

// Exhaustive pairing search, independent of the bipartite matcher.
bool brute_certificate(const RankFunction& r, int axis, Contract contract) {
  const int off = 3 - axis;
  std::vector<TriGrading> rest = expand(r);
  for (const int m2 : {0, -2}) {
    auto it = std::find_if(rest.begin(), rest.end(), [&](const TriGrading& x) { return x.m2 == m2 && x.along(off) == 3; });
    if (it == rest.end()) return false;
    rest.erase(it);
  }
  std::function<bool(std::vector<TriGrading>)> pair_up = [&](std::vector<TriGrading> left) {
    if (left.empty()) return true;
    const TriGrading first = left.front();
    for (std::size_t k = 1; k < left.size(); ++k) {
      if (allowed_move(first, left[k], axis, contract) || allowed_move(left[k], first, axis, contract)) {
        std::vector<TriGrading> next(left.begin() + 1, left.end());
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(k - 1));
        if (pair_up(next)) return true;
      }
    }
    return false;
  };
  return pair_up(rest);
}

const RankFunction& seed_of(int x2) {
  static std::map<int, RankFunction> cache;
  auto it = cache.find(x2);
  if (it == cache.end()) it = cache.emplace(x2, seed_generators(x2)).first;
  return it->second;
}

bool admissible(const RankFunction& r, Contract contract = Contract::Strict) {
  return check_spectral_sequence(r, 1, contract).has_value() && check_spectral_sequence(r, 2, contract).has_value();
}

// Direct invariant checks, written against the definitions rather than the class helpers.
bool independently_valid(const RankFunction& r) {
  int total = 0;
  std::set<int> deltas;
  std::map<int, int> row1;
  std::map<int, int> row2;
  for (const auto& [x, k] : r.support()) {
    if (k <= 0) return false;
    total += k;
    deltas.insert(x.a1_2 + x.a2_2 - x.m2);
    row1[x.a1_2] += k;
    row2[x.a2_2] += k;
    const TriGrading partner{x.m2 - 2 * x.a1_2 - 2 * x.a2_2, -x.a1_2, -x.a2_2};
    if (r.at(partner) != k) return false;
  }
  for (const auto& [a, k] : row1) {
    if (k % 2) return false;
  }
  for (const auto& [a, k] : row2) {
    if (k % 2) return false;
  }
  return total <= 12 && deltas.size() == 1;
}

// All multisets of lattice points inside the window added to the seed, filtered by
// the invariants. Slow, but independent of the orbit enumeration.
std::set<RankFunction> brute_completions(int x2, int window2) {
  const RankFunction seed = seed_generators(x2);
  std::vector<TriGrading> lattice;
  for (int a1 = -window2; a1 <= window2; a1 += 2) {
    for (int a2 = -window2; a2 <= window2; a2 += 2) lattice.push_back(on_level(x2, a1, a2));
  }
  std::set<RankFunction> out;
  std::function<void(std::size_t, RankFunction&)> walk = [&](std::size_t from, RankFunction& cur) {
    if (independently_valid(cur)) out.insert(cur);
    if (cur.total() == kMaxRank) return;
    for (std::size_t k = from; k < lattice.size(); ++k) {
      RankFunction next = cur;
      next.add(lattice[k]);
      walk(k, next);
    }
  };
  RankFunction start = seed;
  walk(0, start);
  return out;
}

}  // namespace

TEST_SUITE("hfl_search") {

TEST_CASE("half-integer formatting") {
  CHECK(half(3) == "3/2");
  CHECK(half(-4) == "-2");
  CHECK(half(-1) == "-1/2");
  CHECK(parse_half("3/2") == 3);
  CHECK(parse_half("-5/2") == -5);
  CHECK(parse_half("2") == 4);
  CHECK_FALSE(parse_half("3/4").has_value());
  CHECK_FALSE(parse_half("abc").has_value());
  CHECK_FALSE(parse_half("1.5").has_value());
  CHECK(g(0, 3, 3).to_string() == "(0, 3/2, 3/2)");
}

TEST_CASE("symmetry and delta level") {
  const TriGrading x = g(0, 3, 5);
  CHECK(x.mirror_image() == g(-8, -3, -5));
  CHECK(x.mirror_image().mirror_image() == x);
  CHECK(x.mirror_image().delta2() == x.delta2());
  // (0, 3/2, x) pairs with (-3 - 2x, -3/2, -x).
  for (int x2 = -9; x2 <= 9; x2 += 2) CHECK(on_level(x2, 3, x2).mirror_image() == TriGrading{-6 - 2 * x2, -3, -x2});
}

TEST_CASE("seed generators") {
  CHECK(seed_generators(3) == rf({g(0, 3, 3), g(-1, 1, 3), g(-1, 3, 1), g(-5, -3, -1), g(-5, -1, -3), g(-6, -3, -3)}));
  const RankFunction five = seed_generators(5);
  CHECK(five.support().size() == 6);
  CHECK(five.at(g(0, 5, 3)) == 1);
  CHECK(five.at(g(0, 3, 5)) == 1);
  CHECK(five.at(g(-1, 3, 3)) == 1);
  // Mirror partners, from the symmetry formula.
  CHECK(five.at(g(-8, -5, -3)) == 1);
  CHECK(five.at(g(-8, -3, -5)) == 1);
  CHECK(five.at(g(-7, -3, -3)) == 1);
  CHECK(seed_generators(7).support().size() == 8);
  CHECK(seed_generators(7).total() == 8);
  CHECK(seed_generators(1).total() == 8);
  CHECK_THROWS_AS(seed_generators(4), RuleError);
}

TEST_CASE("rank function invariants") {
  const RankFunction fig = eight_generator_configuration();
  CHECK(fig.valid());
  CHECK(fig.symmetric());
  CHECK(fig.single_delta());
  CHECK(fig.even_rows());
  CHECK(fig.mirrored() == fig);
  CHECK(fig.top(1) == 3);
  CHECK(fig.rank_along(1, 3) == 2);
  CHECK_FALSE(seed_generators(3).even_rows());
  RankFunction off = fig;
  off.add(g(0, 1, 1));
  CHECK_FALSE(off.single_delta());
  CHECK_THROWS_AS(off.add(g(0, 1, 1), -1), RuleError);
  CHECK_THROWS_AS(RankFunction().top(1), RuleError);
}

TEST_CASE("case names and parsing") {
  CHECK(CaseSpec::parse("3/2").x2 == 3);
  CHECK(CaseSpec::parse("-1/2").x2 == -1);
  CHECK(CaseSpec::parse(">5/2").kind == CaseSpec::Kind::Above);
  CHECK(CaseSpec::parse("x<-3/2").kind == CaseSpec::Kind::Below);
  CHECK(CaseSpec::parse("x > 5/2").name() == "x>5/2");
  CHECK_THROWS_AS(CaseSpec::parse("2"), ParseError);
  CHECK_THROWS_AS(CaseSpec::parse("1/3"), ParseError);
  CHECK_THROWS_AS(CaseSpec::parse(">7/2"), ParseError);
  CHECK_THROWS_AS(CaseSpec::parse(""), ParseError);
  CHECK_THROWS_AS(CaseSpec::fixed(2), RuleError);
  CHECK(CaseSpec::above(3).representatives() == std::vector<int>{7, 9, 11});
  CHECK(CaseSpec::below(2).representatives() == std::vector<int>{-5, -7});
  CaseSpec none = CaseSpec::above(0);
  CHECK_THROWS_AS(none.representatives(), RuleError);
  std::vector<std::string> names;
  for (const auto& c : all_cases()) names.push_back(c.name());
  CHECK(names == std::vector<std::string>{"x>5/2", "5/2", "3/2", "1/2", "-1/2", "-3/2", "x<-3/2"});
}

TEST_CASE("certificates for the eight-generator configuration") {
  const RankFunction fig = eight_generator_configuration();
  const auto two = check_spectral_sequence(fig, 2);
  REQUIRE(two.has_value());
  CHECK(two->axis == 2);
  using Pair = std::pair<TriGrading, TriGrading>;
  std::set<Pair> pairs(two->pairs.begin(), two->pairs.end());
  CHECK(pairs == std::set<Pair>{{g(-1, 1, 3), g(-2, 1, 1)}, {g(-4, -1, -1), g(-5, -1, -3)},
                                {g(-5, -3, -1), g(-6, -3, -3)}});
  CHECK(two->survivors == std::vector<TriGrading>{g(0, 3, 3), g(-1, 3, 1)});
  const auto one = check_spectral_sequence(fig, 1);
  REQUIRE(one.has_value());
  CHECK(one->pairs.size() == 3);
  CHECK(braided_conclusion(fig));

  RankFunction crowded = fig;
  crowded.add(g(0, 3, 3), 2);
  CHECK_FALSE(check_spectral_sequence(crowded, 2).has_value());
  CHECK_FALSE(brute_certificate(crowded, 2, Contract::Strict));

  const auto trivial = check_spectral_sequence(rf({g(0, 3, 3), g(-1, 3, 1)}), 2);
  REQUIRE(trivial.has_value());
  CHECK(trivial->pairs.empty());
  CHECK(trivial->survivors.size() == 2);

  CHECK_THROWS_AS(check_spectral_sequence(RankFunction(), 1), RuleError);
  CHECK_THROWS_AS(check_spectral_sequence(fig, 3), RuleError);
  RankFunction mixed = fig;
  mixed.add(g(0, 1, 1));
  CHECK_THROWS_AS(check_spectral_sequence(mixed, 1), RuleError);
}

TEST_CASE("corner additions at x = 3/2 leave one spectral sequence without a certificate") {
  const TriGrading top = on_level(3, 3, 3);
  const TriGrading side = on_level(3, 3, -3);
  const std::vector<std::vector<TriGrading>> patterns{{top, top}, {side, side}, {top, side}};
  for (const auto& pattern : patterns) {
    RankFunction r = eight_generator_configuration();
    for (const auto& x : pattern) {
      r.add(x);
      r.add(x.mirror_image());
    }
    CAPTURE(r.to_string());
    CHECK(r.total() == 12);
    CHECK(r.symmetric());
    CHECK_FALSE(braided_conclusion(r));
    CHECK_FALSE(admissible(r));
    CHECK_FALSE((brute_certificate(r, 1, Contract::Strict) && brute_certificate(r, 2, Contract::Strict)));
  }
}

TEST_CASE("braided conclusion") {
  CHECK(braided_conclusion(eight_generator_configuration()));
  RankFunction square;
  square.add(g(0, 3, 3), 4);
  CHECK_FALSE(braided_conclusion(square));
  CHECK_THROWS_AS(braided_conclusion(RankFunction()), RuleError);
}

TEST_CASE("enumerated completions satisfy every invariant") {
  for (int x2 : {-7, -5, -3, -1, 1, 3, 5, 7, 9}) {
    int window = 0;
    for (const auto& [x, k] : seed_of(x2).support()) window = std::max({window, std::abs(x.a1_2), std::abs(x.a2_2)});
    for (int ext : {0, 2}) {
      const auto list = enumerate_completions(x2, window + ext);
      for (const auto& r : list) {
        CAPTURE(r.to_string());
        CHECK(independently_valid(r));
        CHECK(r.mirrored() == r);
        for (const auto& [x, k] : seed_of(x2).support()) CHECK(r.at(x) >= k);
      }
      CHECK(std::is_sorted(list.begin(), list.end()));
      CHECK(std::adjacent_find(list.begin(), list.end()) == list.end());
    }
  }
}

TEST_CASE("enumeration agrees with a brute-force multiset search") {
  for (int x2 : {3, 1, -1, 7}) {
    CAPTURE(x2);
    const CaseSpec c = CaseSpec::fixed(x2);
    const auto fast = enumerate_completions(c);
    int window = 0;
    for (const auto& [x, k] : seed_of(x2).support()) window = std::max({window, std::abs(x.a1_2), std::abs(x.a2_2)});
    const auto slow = brute_completions(x2, window);
    CHECK(std::set<RankFunction>(fast.begin(), fast.end()) == slow);
    CHECK(fast.size() == slow.size());
  }
}

TEST_CASE("eight-generator configuration is an admissible completion at x = 3/2") {
  const auto list = enumerate_completions(CaseSpec::fixed(3));
  CHECK(std::find(list.begin(), list.end(), eight_generator_configuration()) != list.end());
  const CaseReport r = run_case(CaseSpec::fixed(3));
  CHECK(std::find(r.samples[0].witnesses.begin(), r.samples[0].witnesses.end(), eight_generator_configuration()) !=
        r.samples[0].witnesses.end());
  CHECK(r.counterexample_count() == 0);
}

TEST_CASE("x = 1/2 has a unique admissible completion of rank 12") {
  const CaseReport r = run_case(CaseSpec::fixed(1));
  REQUIRE(r.admissible() == 1);
  const RankFunction& only = r.samples[0].witnesses.front();
  CHECK(only.total() == 12);
  CHECK(braided_conclusion(only));
  CHECK(only.rank_along(1, only.top(1)) == 2);
  std::size_t rank_twelve = 0;
  for (const auto& c : enumerate_completions(CaseSpec::fixed(1))) {
    if (admissible(c)) CHECK(c == only);
    if (c.total() == 12 && admissible(c)) ++rank_twelve;
  }
  CHECK(rank_twelve == 1);
}

TEST_CASE("x = 5/2 includes the ten-generator branch") {
  // Generators at (5/2, 1/2) and (1/2, 5/2) together with their mirror partners.
  RankFunction branch = seed_generators(5);
  for (const auto& x : {on_level(5, 5, 1), on_level(5, 1, 5)}) {
    branch.add(x);
    branch.add(x.mirror_image());
  }
  CHECK(branch.total() == 10);
  const auto list = enumerate_completions(CaseSpec::fixed(5));
  std::size_t containing = 0;
  for (const auto& c : list) {
    bool contains = true;
    for (const auto& [x, k] : branch.support()) contains = contains && c.at(x) >= k;
    if (!contains) continue;
    ++containing;
    CHECK(c.total() <= 12);
    if (admissible(c)) CHECK(braided_conclusion(c));
  }
  CHECK(containing > 0);
}

TEST_CASE("matcher agrees with exhaustive pairing") {
  for (const auto& c : all_cases(1)) {
    for (int extra : {0, 2}) {
      CaseSpec spec = c;
      for (const int x2 : spec.representatives()) {
        int window = 0;
        for (const auto& [x, k] : seed_of(x2).support()) window = std::max({window, std::abs(x.a1_2), std::abs(x.a2_2)});
        for (const auto& r : enumerate_completions(x2, window + extra)) {
          for (const Contract contract : {Contract::Strict, Contract::Lax}) {
            for (int axis : {1, 2}) {
              CAPTURE(r.to_string());
              CHECK(check_spectral_sequence(r, axis, contract).has_value() == brute_certificate(r, axis, contract));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("certificates partition the generators and respect the move contract") {
  for (const auto& c : all_cases(1)) {
    for (const int x2 : c.representatives()) {
      for (const auto& r : enumerate_completions(x2, 5)) {
        for (const Contract contract : {Contract::Strict, Contract::Lax}) {
          for (int axis : {1, 2}) {
            const auto cert = check_spectral_sequence(r, axis, contract);
            if (!cert) continue;
            CAPTURE(r.to_string());
            std::multiset<TriGrading> used(cert->survivors.begin(), cert->survivors.end());
            for (const auto& [from, to] : cert->pairs) {
              used.insert(from);
              used.insert(to);
              CHECK(to.m2 == from.m2 - 2);
              CHECK(to.delta2() == from.delta2());
              const int off = 3 - axis;
              if (contract == Contract::Strict) {
                CHECK(to.along(off) == from.along(off));
                CHECK(to.along(axis) == from.along(axis) - 2);
              } else {
                CHECK(to.along(off) <= from.along(off));
              }
            }
            const auto all = expand(r);
            CHECK(used == std::multiset<TriGrading>(all.begin(), all.end()));
            REQUIRE(cert->survivors.size() == 2);
            CHECK(cert->survivors[0].m2 == 0);
            CHECK(cert->survivors[1].m2 == -2);
            CHECK(cert->survivors[0].along(3 - axis) == 3);
            CHECK(cert->survivors[1].along(3 - axis) == 3);
          }
        }
      }
    }
  }
}

TEST_CASE("certificate existence does not depend on insertion order") {
  std::mt19937 rng(5);
  for (const auto& r : enumerate_completions(CaseSpec::fixed(3))) {
    auto gens = expand(r);
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(gens.begin(), gens.end(), rng);
      RankFunction rebuilt;
      for (const auto& x : gens) rebuilt.add(x);
      CHECK(rebuilt == r);
      for (int axis : {1, 2}) {
        const auto a = check_spectral_sequence(rebuilt, axis);
        const auto b = check_spectral_sequence(r, axis);
        CHECK(a.has_value() == b.has_value());
        if (a && b) CHECK(a->pairs == b->pairs);
      }
    }
  }
}

TEST_CASE("all seven cases are braided under the strict contract") {
  const auto reports = run_all(2);
  REQUIRE(reports.size() == 7);
  for (const auto& r : reports) {
    CAPTURE(r.name);
    CHECK(r.counterexample_count() == 0);
    CHECK(r.stable);
    for (const auto& s : r.samples) {
      CHECK(s.braided == s.admissible);
      CHECK(s.witnesses.size() == s.admissible);
      for (const auto& w : s.witnesses) CHECK(braided_conclusion(w));
    }
  }
  CHECK_NOTHROW(require_no_counterexample(reports));
  CHECK(reports[2].admissible() >= 1);

  // Widening the window beyond the case's own grading range keeps the verdict.
  SearchOptions wide;
  wide.window_extension = 2;
  CHECK_NOTHROW(require_no_counterexample(run_all(2, wide)));
}

TEST_CASE("open regions give the same report for every representative") {
  for (const auto& c : {CaseSpec::above(3), CaseSpec::below(3)}) {
    const CaseReport r = run_case(c);
    CAPTURE(r.name);
    REQUIRE(r.samples.size() == 3);
    CHECK(r.stable);
    CHECK(r.samples[0].signature() == r.samples[1].signature());
    CHECK(r.samples[1].signature() == r.samples[2].signature());
  }
}

TEST_CASE("the lax contract admits more configurations") {
  SearchOptions lax;
  lax.contract = Contract::Lax;
  for (const auto& c : all_cases(1)) {
    const auto x2 = c.representatives().front();
    for (const auto& r : enumerate_completions(x2, 5)) {
      if (admissible(r, Contract::Strict)) CHECK(admissible(r, Contract::Lax));
    }
  }
  // Dropping the off-axis constraint lets non-braided configurations through.
  const auto reports = run_all(1, lax);
  std::size_t counter = 0;
  for (const auto& r : reports) counter += r.counterexample_count();
  CHECK(counter > 0);
  CHECK_THROWS_AS(require_no_counterexample(reports), RuleError);
}

TEST_CASE("empty window") {
  // No added generators: the seed alone, if its rows already have even rank.
  CHECK(enumerate_completions(3, -1).empty());
  const auto half = enumerate_completions(1, -1);
  REQUIRE(half.size() == 1);
  CHECK(half.front() == seed_generators(1));
}

TEST_CASE("report serialization") {
  const CaseReport r = run_case(CaseSpec::fixed(3));
  const std::string json = r.to_json();
  CHECK(json.rfind("{\"case\":\"3/2\",\"enumerated\":", 0) == 0);
  CHECK(json.find("\"counterexamples\":[]") != std::string::npos);
  CHECK(json == run_case(CaseSpec::fixed(3)).to_json());
  CHECK(run_case(CaseSpec::above(2)).to_json().find("\"samples\"") != std::string::npos);
  CHECK(r.to_text().find("3/2") != std::string::npos);
  CHECK(reports_to_json(run_all(2)).front() == '[');
}

}  // TEST_SUITE
