#include "khd/hfl_search.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "khd/error.hpp"

namespace khd::hfl {

std::string half(int doubled) {
  if (doubled % 2 == 0) return std::to_string(doubled / 2);
  return std::to_string(doubled) + "/2";
}

std::optional<int> parse_half(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      const int v = std::stoi(text, &used);
      if (used != text.size()) return std::nullopt;
      return 2 * v;
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (den != "2") return std::nullopt;
    const int v = std::stoi(num, &used);
    if (used != num.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string TriGrading::to_string() const {
  return "(" + half(m2) + ", " + half(a1_2) + ", " + half(a2_2) + ")";
}

// ---------------------------------------------------------------------------
// RankFunction

RankFunction::RankFunction(std::map<TriGrading, int> m) {
  for (const auto& [g, k] : m) add(g, k);
}

int RankFunction::at(const TriGrading& g) const {
  auto it = mult_.find(g);
  return it == mult_.end() ? 0 : it->second;
}

void RankFunction::add(const TriGrading& g, int count) {
  if (count < 0) throw RuleError("negative multiplicity at " + g.to_string());
  if (count > 0) mult_[g] += count;
}

int RankFunction::total() const {
  int n = 0;
  for (const auto& [g, k] : mult_) n += k;
  return n;
}

int RankFunction::rank_along(int axis, int value) const {
  int n = 0;
  for (const auto& [g, k] : mult_) {
    if (g.along(axis) == value) n += k;
  }
  return n;
}

int RankFunction::top(int axis) const {
  if (mult_.empty()) throw RuleError("empty rank function has no top grading");
  int t = mult_.begin()->first.along(axis);
  for (const auto& [g, k] : mult_) t = std::max(t, g.along(axis));
  return t;
}

bool RankFunction::single_delta() const {
  if (mult_.empty()) return true;
  const int d = mult_.begin()->first.delta2();
  return std::all_of(mult_.begin(), mult_.end(), [d](const auto& e) { return e.first.delta2() == d; });
}

bool RankFunction::symmetric() const {
  return std::all_of(mult_.begin(), mult_.end(),
                     [this](const auto& e) { return at(e.first.mirror_image()) == e.second; });
}

bool RankFunction::even_rows() const {
  std::map<int, int> rows1;
  std::map<int, int> rows2;
  for (const auto& [g, k] : mult_) {
    rows1[g.a1_2] += k;
    rows2[g.a2_2] += k;
  }
  auto even = [](const std::map<int, int>& m) {
    return std::all_of(m.begin(), m.end(), [](const auto& e) { return e.second % 2 == 0; });
  };
  return even(rows1) && even(rows2);
}

bool RankFunction::valid() const {
  for (const auto& [g, k] : mult_) {
    if (k <= 0 || g.a1_2 % 2 == 0 || g.a2_2 % 2 == 0 || g.m2 % 2 != 0) return false;
  }
  return single_delta() && symmetric() && even_rows() && total() <= kMaxRank;
}

RankFunction RankFunction::mirrored() const {
  RankFunction out;
  for (const auto& [g, k] : mult_) out.add(g.mirror_image(), k);
  return out;
}

std::string RankFunction::to_string() const {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& [g, k] : mult_) {
    out << (first ? "" : ", ") << g.to_string();
    if (k > 1) out << "x" << k;
    first = false;
  }
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------------------
// Cases

CaseSpec CaseSpec::fixed(int x2) {
  if (x2 % 2 == 0) throw RuleError("x must be a half-integer, got " + half(x2));
  CaseSpec c;
  c.kind = Kind::Fixed;
  c.x2 = x2;
  return c;
}

CaseSpec CaseSpec::above(int samples) {
  CaseSpec c;
  c.kind = Kind::Above;
  c.x2 = 7;
  c.samples = samples;
  return c;
}

CaseSpec CaseSpec::below(int samples) {
  CaseSpec c;
  c.kind = Kind::Below;
  c.x2 = -5;
  c.samples = samples;
  return c;
}

CaseSpec CaseSpec::parse(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (ch != ' ') text.push_back(ch);
  }
  if (text.starts_with("x")) text.erase(0, 1);
  if (text == ">5/2") return above();
  if (text == "<-3/2") return below();
  const auto v = parse_half(text);
  if (!v || *v % 2 == 0) throw ParseError("malformed case '" + raw + "': expected a half-integer, >5/2 or <-3/2");
  return fixed(*v);
}

std::string CaseSpec::name() const {
  switch (kind) {
    case Kind::Above: return "x>5/2";
    case Kind::Below: return "x<-3/2";
    case Kind::Fixed: break;
  }
  return half(x2);
}

std::vector<int> CaseSpec::representatives() const {
  if (kind == Kind::Fixed) return {x2};
  if (samples < 1) throw RuleError("open-region cases need at least one sample");
  std::vector<int> out;
  for (int k = 0; k < samples; ++k) out.push_back(kind == Kind::Above ? 7 + 2 * k : -5 - 2 * k);
  return out;
}

std::vector<CaseSpec> all_cases(int samples) {
  return {CaseSpec::above(samples), CaseSpec::fixed(5), CaseSpec::fixed(3), CaseSpec::fixed(1),
          CaseSpec::fixed(-1),      CaseSpec::fixed(-3), CaseSpec::below(samples)};
}

TriGrading on_level(int x2, int a1_2, int a2_2) { return {a1_2 + a2_2 - x2 - 3, a1_2, a2_2}; }

RankFunction seed_generators(int x2) {
  if (x2 % 2 == 0) throw RuleError("x must be a half-integer, got " + half(x2));
  const TriGrading forced[4] = {on_level(x2, 3, x2), on_level(x2, 3, x2 - 2), on_level(x2, x2, 3),
                                on_level(x2, x2 - 2, 3)};
  std::map<TriGrading, int> m;
  for (const auto& g : forced) {
    m[g] = 1;
    m[g.mirror_image()] = 1;
  }
  return RankFunction(std::move(m));
}

namespace {

int seed_window(const RankFunction& seed) {
  int w = 0;
  for (const auto& [g, k] : seed.support()) w = std::max({w, std::abs(g.a1_2), std::abs(g.a2_2)});
  return w;
}

}  // namespace

std::vector<RankFunction> enumerate_completions(int x2, int window2) {
  const RankFunction seed = seed_generators(x2);
  // One representative per {p, -p} pair inside the window.
  std::vector<TriGrading> orbits;
  for (int a1 = -window2; a1 <= window2; ++a1) {
    for (int a2 = -window2; a2 <= window2; ++a2) {
      if (a1 % 2 == 0 || a2 % 2 == 0) continue;
      if (std::pair{a1, a2} < std::pair{-a1, -a2}) continue;
      orbits.push_back(on_level(x2, a1, a2));
    }
  }
  const int budget = std::max(0, (kMaxRank - seed.total()) / 2);
  std::vector<RankFunction> out;
  std::vector<int> chosen(orbits.size(), 0);
  std::function<void(std::size_t, int)> walk = [&](std::size_t k, int left) {
    if (k == orbits.size()) {
      RankFunction rf = seed;
      for (std::size_t o = 0; o < orbits.size(); ++o) {
        rf.add(orbits[o], chosen[o]);
        rf.add(orbits[o].mirror_image(), chosen[o]);
      }
      if (rf.even_rows()) {
        if (!rf.valid()) throw RuleError("internal: enumerated configuration fails validation: " + rf.to_string());
        out.push_back(std::move(rf));
      }
      return;
    }
    for (int m = 0; m <= left; ++m) {
      chosen[k] = m;
      walk(k + 1, left - m);
    }
    chosen[k] = 0;
  };
  walk(0, budget);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RankFunction> enumerate_completions(const CaseSpec& c) {
  return enumerate_completions(c.x2, c.window2.value_or(seed_window(seed_generators(c.x2))));
}

// ---------------------------------------------------------------------------
// Spectral sequence certificates

bool allowed_move(const TriGrading& from, const TriGrading& to, int axis, Contract contract) {
  const int off = 3 - axis;
  if (to.m2 != from.m2 - 2 || to.delta2() != from.delta2()) return false;
  if (contract == Contract::Strict) {
    return to.along(off) == from.along(off) && to.along(axis) == from.along(axis) - 2;
  }
  return to.along(off) <= from.along(off);
}

std::optional<MatchingCertificate> check_spectral_sequence(const RankFunction& rf, int axis, Contract contract) {
  if (axis != 1 && axis != 2) throw RuleError("axis must be 1 or 2");
  if (rf.empty()) throw RuleError("empty rank function");
  if (!rf.single_delta()) throw RuleError("rank function is not on a single delta level: " + rf.to_string());
  const int off = 3 - axis;

  std::map<TriGrading, int> rest = rf.support();
  MatchingCertificate cert;
  cert.axis = axis;
  for (const int m2 : {0, -2}) {
    auto it = std::find_if(rest.begin(), rest.end(),
                           [&](const auto& e) { return e.first.m2 == m2 && e.first.along(off) == 3 && e.second > 0; });
    if (it == rest.end()) return std::nullopt;
    cert.survivors.push_back(it->first);
    --it->second;
  }

  std::vector<TriGrading> upper;  // even M
  std::vector<TriGrading> lower;  // odd M
  for (const auto& [g, k] : rest) {
    for (int c = 0; c < k; ++c) ((g.m2 / 2) % 2 == 0 ? upper : lower).push_back(g);
  }
  if (upper.size() != lower.size()) return std::nullopt;

  // An edge joins generators whose M differs by one, oriented downhill.
  auto edge = [&](const TriGrading& u, const TriGrading& l) {
    return allowed_move(u, l, axis, contract) || allowed_move(l, u, axis, contract);
  };
  std::vector<int> match_of_lower(lower.size(), -1);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (std::size_t l = 0; l < lower.size(); ++l) {
      if (visited[l] || !edge(upper[u], lower[l])) continue;
      visited[l] = 1;
      if (match_of_lower[l] < 0 || augment(static_cast<std::size_t>(match_of_lower[l]))) {
        match_of_lower[l] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < upper.size(); ++u) {
    visited.assign(lower.size(), 0);
    if (!augment(u)) return std::nullopt;
  }
  for (std::size_t l = 0; l < lower.size(); ++l) {
    const TriGrading& u = upper[match_of_lower[l]];
    const TriGrading& v = lower[l];
    cert.pairs.push_back(u.m2 > v.m2 ? std::pair{u, v} : std::pair{v, u});
  }
  std::sort(cert.pairs.begin(), cert.pairs.end(), [](const auto& p, const auto& q) {
    return std::tie(q.first, q.second) < std::tie(p.first, p.second);
  });
  return cert;
}

bool braided_conclusion(const RankFunction& rf) {
  if (rf.empty()) throw RuleError("empty rank function");
  return rf.rank_along(1, rf.top(1)) == 2 || rf.rank_along(2, rf.top(2)) == 2;
}

// ---------------------------------------------------------------------------
// Case reports

std::vector<std::size_t> SampleReport::signature() const {
  std::vector<std::size_t> s{enumerated, admissible, braided, counterexamples.size()};
  std::vector<std::array<std::size_t, 3>> shapes;
  for (const auto* list : {&witnesses, &counterexamples}) {
    for (const auto& rf : *list) {
      shapes.push_back({static_cast<std::size_t>(rf.total()), static_cast<std::size_t>(rf.rank_along(1, rf.top(1))),
                        static_cast<std::size_t>(rf.rank_along(2, rf.top(2)))});
    }
  }
  std::sort(shapes.begin(), shapes.end());
  for (const auto& t : shapes) s.insert(s.end(), t.begin(), t.end());
  return s;
}

std::size_t CaseReport::counterexample_count() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.counterexamples.size();
  return n;
}

namespace {

nlohmann::ordered_json configuration_json(const RankFunction& rf) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [g, k] : rf.support()) {
    nlohmann::ordered_json cell;
    cell["M"] = half(g.m2);
    cell["a1"] = half(g.a1_2);
    cell["a2"] = half(g.a2_2);
    cell["rank"] = k;
    out.push_back(std::move(cell));
  }
  return out;
}

nlohmann::ordered_json case_json(const CaseReport& r) {
  nlohmann::ordered_json doc;
  const SampleReport& first = r.samples.front();
  doc["case"] = r.name;
  doc["enumerated"] = first.enumerated;
  doc["admissible"] = first.admissible;
  doc["braided"] = first.braided;
  doc["witnesses"] = nlohmann::ordered_json::array();
  for (const auto& rf : first.witnesses) doc["witnesses"].push_back(configuration_json(rf));
  doc["counterexamples"] = nlohmann::ordered_json::array();
  for (const auto& s : r.samples) {
    for (const auto& rf : s.counterexamples) doc["counterexamples"].push_back(configuration_json(rf));
  }
  if (r.samples.size() > 1) {
    doc["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : r.samples) {
      nlohmann::ordered_json e;
      e["x"] = half(s.x2);
      e["enumerated"] = s.enumerated;
      e["admissible"] = s.admissible;
      e["braided"] = s.braided;
      doc["samples"].push_back(std::move(e));
    }
    doc["stable"] = r.stable;
  }
  return doc;
}

}  // namespace

std::string CaseReport::to_json() const { return case_json(*this).dump(); }

std::string CaseReport::to_text() const {
  std::ostringstream out;
  out << "case " << name << ":";
  for (const auto& s : samples) {
    out << " [x=" << half(s.x2) << " enumerated " << s.enumerated << ", admissible " << s.admissible
        << ", braided " << s.braided << ", counterexamples " << s.counterexamples.size() << "]";
  }
  if (samples.size() > 1) out << (stable ? " stable" : " UNSTABLE");
  out << "\n";
  for (const auto& s : samples) {
    for (const auto& rf : s.counterexamples) out << "  counterexample " << rf.to_string() << "\n";
  }
  return out.str();
}

CaseReport run_case(const CaseSpec& c, const SearchOptions& options) {
  CaseReport report;
  report.name = c.name();
  for (const int x2 : c.representatives()) {
    SampleReport s;
    s.x2 = x2;
    const int window = c.window2.value_or(seed_window(seed_generators(x2))) + options.window_extension;
    for (auto& rf : enumerate_completions(x2, window)) {
      ++s.enumerated;
      if (!check_spectral_sequence(rf, 1, options.contract) || !check_spectral_sequence(rf, 2, options.contract)) {
        continue;
      }
      ++s.admissible;
      if (braided_conclusion(rf)) {
        ++s.braided;
        s.witnesses.push_back(std::move(rf));
      } else {
        s.counterexamples.push_back(std::move(rf));
      }
    }
    report.samples.push_back(std::move(s));
  }
  const auto sig = report.samples.front().signature();
  report.stable = std::all_of(report.samples.begin(), report.samples.end(),
                              [&](const SampleReport& s) { return s.signature() == sig; });
  return report;
}

std::vector<CaseReport> run_all(int samples, const SearchOptions& options) {
  std::vector<CaseReport> out;
  for (const auto& c : all_cases(samples)) out.push_back(run_case(c, options));
  return out;
}

void require_no_counterexample(const std::vector<CaseReport>& reports) {
  for (const auto& r : reports) {
    for (const auto& s : r.samples) {
      if (!s.counterexamples.empty()) {
        throw RuleError("case " + r.name + " (x=" + half(s.x2) +
                        ") has an admissible configuration that is not braided: " +
                        s.counterexamples.front().to_string());
      }
    }
    if (!r.stable) throw RuleError("case " + r.name + " gives different reports for its sampled representatives");
  }
}

std::string reports_to_json(const std::vector<CaseReport>& reports) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) doc.push_back(case_json(r));
  return doc.dump();
}

}  // namespace khd::hfl
