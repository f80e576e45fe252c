#include "khd/khovanov.hpp"

#include <bit>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "khd/error.hpp"
#include "khd/parallel.hpp"

namespace khd {

// ---------------------------------------------------------------------------
// BigradedGroup / GradedRanks

void BigradedGroup::set(Bidegree at, GroupSummand g) {
  if (g.is_zero()) {
    groups_.erase(at);
  } else {
    groups_[at] = std::move(g);
  }
}

GroupSummand BigradedGroup::at(Bidegree b) const {
  auto it = groups_.find(b);
  return it == groups_.end() ? GroupSummand{} : it->second;
}

std::size_t BigradedGroup::total_free_rank() const {
  std::size_t n = 0;
  for (const auto& [b, g] : groups_) n += g.free_rank;
  return n;
}

std::string BigradedGroup::to_json() const {
  nlohmann::ordered_json doc;
  doc["ring"] = ring_.name();
  doc["groups"] = nlohmann::ordered_json::array();
  for (const auto& [b, g] : groups_) {
    nlohmann::ordered_json cell;
    cell["i"] = b.i;
    cell["j"] = b.j;
    cell["free"] = g.free_rank;
    cell["torsion"] = nlohmann::ordered_json::array();
    for (const auto& t : g.torsion) {
      if (t.fits_slong_p()) {
        cell["torsion"].push_back(t.get_si());
      } else {
        cell["torsion"].push_back(t.get_str());
      }
    }
    doc["groups"].push_back(std::move(cell));
  }
  return doc.dump();
}

BigradedGroup BigradedGroup::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    BigradedGroup g(Domain::parse(doc.at("ring").get<std::string>()));
    for (const auto& cell : doc.at("groups")) {
      GroupSummand s;
      s.free_rank = cell.at("free").get<std::size_t>();
      for (const auto& t : cell.at("torsion")) {
        s.torsion.push_back(t.is_string() ? mpz_class(t.get<std::string>()) : mpz_class(t.get<long>()));
      }
      g.set({cell.at("i").get<int>(), cell.at("j").get<int>()}, std::move(s));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed homology JSON: ") + e.what());
  }
}

std::string BigradedGroup::to_text() const {
  std::ostringstream out;
  out << "ring " << ring_.name() << "\n";
  const std::string base = ring_.kind() == Domain::Kind::PrimeField ? ring_.name() : ring_.name();
  for (const auto& [b, g] : groups_) {
    out << "i=" << b.i << " j=" << b.j << ": ";
    bool first = true;
    if (g.free_rank > 0) {
      out << base;
      if (g.free_rank > 1) out << "^" << g.free_rank;
      first = false;
    }
    for (const auto& t : g.torsion) {
      out << (first ? "" : " + ") << "Z/" << t.get_str();
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

std::size_t GradedRanks::total() const {
  std::size_t n = 0;
  for (const auto& [k, r] : ranks) n += r;
  return n;
}

std::size_t GradedRanks::at(int k) const {
  auto it = ranks.find(k);
  return it == ranks.end() ? 0 : it->second;
}

std::size_t ChainComplex::dimension(Bidegree b) const {
  auto it = generators.find(b);
  return it == generators.end() ? 0 : it->second.size();
}

// ---------------------------------------------------------------------------
// Cube of resolutions

namespace {

class Cube {
 public:
  explicit Cube(const LinkDiagram& d) : diagram_(d), n_(d.crossing_count()) {
    if (n_ > kMaxCrossings) {
      throw ResourceError("diagram has " + std::to_string(n_) + " crossings; the limit is " +
                          std::to_string(kMaxCrossings));
    }
    const auto& arcs = d.pd_arcs();
    for (std::size_t k = 0; k < arcs.size(); ++k) slot_of_[arcs[k]] = static_cast<int>(k);
    for (const auto& c : d.crossings()) {
      std::array<int, 4> s{};
      for (int p = 0; p < 4; ++p) s[p] = slot_of_.at(c.arcs[p]);
      crossings_.push_back(s);
    }
    arc_count_ = arcs.size();
    const std::size_t states = std::size_t{1} << n_;
    first_slot_.resize(states);
    circle_of_.resize(states);
    circles_.resize(states);
    for (std::size_t s = 0; s < states; ++s) resolve(static_cast<std::uint32_t>(s));
  }

  std::size_t crossings() const { return n_; }
  std::size_t states() const { return circles_.size(); }
  int circles(std::uint32_t s) const { return circles_[s]; }
  int pd_circles(std::uint32_t s) const { return circles_[s] - diagram_.free_circles(); }
  int circle_of_slot(std::uint32_t s, int slot) const { return circle_of_[s][slot]; }
  const std::array<int, 4>& slots(std::size_t c) const { return crossings_[c]; }

  /// Circle carrying `arc` (a PD label or a free-circle label) in state s.
  int circle_of_arc(std::uint32_t s, int arc) const {
    if (auto it = slot_of_.find(arc); it != slot_of_.end()) return circle_of_[s][it->second];
    for (int k = 0; k < diagram_.free_circles(); ++k) {
      if (diagram_.free_circle_arc(k) == arc) return pd_circles(s) + k;
    }
    throw DiagramError("basepoint arc " + std::to_string(arc) + " is not in the diagram");
  }

  /// Image in state `to` of every circle of state `from` (edge from -> to).
  std::vector<int> carry(std::uint32_t from, std::uint32_t to) const {
    std::vector<int> image(circles_[from]);
    const int pd = pd_circles(from);
    for (int t = 0; t < pd; ++t) image[t] = circle_of_[to][first_slot_[from][t]];
    for (int t = pd; t < circles_[from]; ++t) image[t] = pd_circles(to) + (t - pd);
    return image;
  }

 private:
  void resolve(std::uint32_t s) {
    std::vector<int> parent(arc_count_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (std::size_t c = 0; c < n_; ++c) {
      const auto& [a, b, cc, dd] = crossings_[c];
      if ((s >> c) & 1u) {
        unite(a, dd);
        unite(b, cc);
      } else {
        unite(a, b);
        unite(cc, dd);
      }
    }
    std::vector<std::uint8_t> circle(arc_count_);
    std::vector<int> number(arc_count_, -1);
    std::vector<int> first;
    for (std::size_t k = 0; k < arc_count_; ++k) {
      const int root = find(static_cast<int>(k));
      if (number[root] < 0) {
        number[root] = static_cast<int>(first.size());
        first.push_back(static_cast<int>(k));
      }
      circle[k] = static_cast<std::uint8_t>(number[root]);
    }
    circles_[s] = static_cast<int>(first.size()) + diagram_.free_circles();
    circle_of_[s] = std::move(circle);
    first_slot_[s] = std::move(first);
  }

  const LinkDiagram& diagram_;
  std::size_t n_;
  std::size_t arc_count_ = 0;
  std::map<int, int> slot_of_;
  std::vector<std::array<int, 4>> crossings_;
  std::vector<int> circles_;
  std::vector<std::vector<std::uint8_t>> circle_of_;
  std::vector<std::vector<int>> first_slot_;
};

inline std::uint32_t bit(int k) { return std::uint32_t{1} << k; }

}  // namespace

ChainComplex build_complex(const LinkDiagram& d, Domain ring, const ComplexOptions& options) {
  const Cube cube(d);
  const std::size_t states = cube.states();
  const bool lee = options.kind == ComplexKind::Lee;
  const bool reduced = options.kind == ComplexKind::Reduced;
  if (lee && ring.kind() != Domain::Kind::Rationals) {
    throw AlgebraError("the Lee complex is built over Q only");
  }

  for (std::uint32_t s = 0; s < states; ++s) {
    if (cube.circles(s) > 30) throw ResourceError("too many state circles for the label encoding");
  }
  std::vector<int> basepoint(reduced ? states : 0);
  if (reduced) {
    for (std::uint32_t s = 0; s < states; ++s) basepoint[s] = cube.circle_of_arc(s, options.basepoint);
  }

  ChainComplex complex;
  complex.ring = ring;
  complex.quantum_graded = !lee;

  const int n_minus = d.n_minus();
  const int n_plus = d.n_plus();
  auto degree = [&](std::uint32_t s, std::uint32_t labels) {
    const int i = std::popcount(s) - n_minus;
    if (lee) return Bidegree{i, 0};
    const int circles = cube.circles(s);
    int j = i + n_plus - n_minus + circles - 2 * std::popcount(labels);
    if (reduced) j -= 1;
    return Bidegree{i, j};
  };
  auto admitted = [&](std::uint32_t s, std::uint32_t labels) {
    return !reduced || ((labels >> basepoint[s]) & 1u) == 0;
  };

  // Local index of every admitted generator inside its block.
  std::vector<std::vector<std::uint32_t>> index(states);
  for (std::uint32_t s = 0; s < states; ++s) {
    const std::uint32_t count = bit(cube.circles(s));
    index[s].assign(count, 0);
    for (std::uint32_t labels = 0; labels < count; ++labels) {
      if (!admitted(s, labels)) continue;
      auto& block = complex.generators[degree(s, labels)];
      index[s][labels] = static_cast<std::uint32_t>(block.size());
      block.push_back({s, labels});
    }
  }

  std::map<Bidegree, std::vector<SparseMatrix::Triplet>> triplets;
  for (const auto& [b, gens] : complex.generators) triplets[b];

  for (std::uint32_t s = 0; s < states; ++s) {
    for (std::size_t c = 0; c < cube.crossings(); ++c) {
      if ((s >> c) & 1u) continue;
      const std::uint32_t target = s | bit(static_cast<int>(c));
      const std::int64_t sign = (std::popcount(s & (bit(static_cast<int>(c)) - 1)) & 1) ? -1 : 1;
      const auto& [a, b, cc, dd] = cube.slots(c);
      const int first = cube.circle_of_slot(s, a);
      const int second = cube.circle_of_slot(s, cc);
      const std::vector<int> image = cube.carry(s, target);
      const bool merge = first != second;
      const int left = cube.circle_of_slot(target, a);   // merged circle, or the a-d half of a split
      const int right = cube.circle_of_slot(target, b);  // the b-c half of a split

      const std::uint32_t count = bit(cube.circles(s));
      for (std::uint32_t labels = 0; labels < count; ++labels) {
        if (!admitted(s, labels)) continue;
        const Bidegree from = degree(s, labels);
        const std::uint32_t col = index[s][labels];
        std::uint32_t carried = 0;
        for (int t = 0; t < cube.circles(s); ++t) {
          if (t == first || t == second) continue;
          if ((labels >> t) & 1u) carried |= bit(image[t]);
        }
        auto emit = [&](std::uint32_t out_labels) {
          if (!admitted(target, out_labels)) return;
          const Bidegree to = degree(target, out_labels);
          if (!lee && to.j != from.j) throw AlgebraError("internal: differential changed the quantum grading");
          triplets[from].push_back({index[target][out_labels], col, sign});
        };
        if (merge) {
          const bool x1 = (labels >> first) & 1u;
          const bool x2 = (labels >> second) & 1u;
          if (x1 && x2) {
            if (lee) emit(carried);  // x * x = 1
          } else {
            emit(carried | ((x1 || x2) ? bit(left) : 0u));
          }
        } else {
          const bool x = (labels >> first) & 1u;
          if (x) {
            emit(carried | bit(left) | bit(right));
            if (lee) emit(carried);  // x -> x(x) + 1(1)
          } else {
            emit(carried | bit(right));
            emit(carried | bit(left));
          }
        }
      }
    }
  }

  for (auto& [b, t] : triplets) {
    const Bidegree next{b.i + 1, b.j};
    complex.differentials.emplace(
        b, SparseMatrix::from_triplets(complex.dimension(next), complex.dimension(b), ring, std::move(t)));
  }

  if (options.check_square_zero) {
    for (const auto& [b, m] : complex.differentials) {
      auto it = complex.differentials.find({b.i + 1, b.j});
      if (it == complex.differentials.end()) continue;
      if (!it->second.multiply(m).is_zero()) {
        throw AlgebraError("internal: d o d != 0 at i=" + std::to_string(b.i) + " j=" + std::to_string(b.j));
      }
    }
  }
  return complex;
}

BigradedGroup homology(const ChainComplex& complex, const HomologyOptions& options) {
  std::vector<Bidegree> blocks;
  for (const auto& [b, m] : complex.differentials) blocks.push_back(b);
  std::vector<Reduction> reductions(blocks.size());
  // Largest blocks first so a parallel run does not end on one long task.
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return complex.differentials.at(blocks[x]).nnz() > complex.differentials.at(blocks[y]).nnz();
  });
  parallel_for(order.size(), options.workers, [&](std::size_t k) {
    const std::size_t b = order[k];
    reductions[b] = reduce(complex.differentials.at(blocks[b]));
  });

  std::map<Bidegree, const Reduction*> by_block;
  for (std::size_t k = 0; k < blocks.size(); ++k) by_block[blocks[k]] = &reductions[k];

  BigradedGroup out(complex.ring);
  const Reduction none;
  for (const auto& [b, gens] : complex.generators) {
    auto in = by_block.find({b.i - 1, b.j});
    const Reduction& incoming = in == by_block.end() ? none : *in->second;
    const Reduction& outgoing = *by_block.at(b);
    out.set(b, homology_from(gens.size(), incoming, outgoing));
  }
  return out;
}

BigradedGroup khovanov_homology(const LinkDiagram& d, Domain ring, const HomologyOptions& options) {
  return homology(build_complex(d, ring), options);
}

BigradedGroup reduced_khovanov(const LinkDiagram& d, int basepoint, Domain ring, const HomologyOptions& options) {
  if (!d.has_arc(basepoint)) throw DiagramError("basepoint arc " + std::to_string(basepoint) + " is not in the diagram");
  ComplexOptions opts;
  opts.kind = ComplexKind::Reduced;
  opts.basepoint = basepoint;
  return homology(build_complex(d, ring, opts), options);
}

GradedRanks lee_homology(const LinkDiagram& d, const HomologyOptions& options) {
  ComplexOptions opts;
  opts.kind = ComplexKind::Lee;
  const BigradedGroup g = homology(build_complex(d, Domain::rationals(), opts), options);
  GradedRanks out;
  for (const auto& [b, s] : g.groups()) out.ranks[b.i] += s.free_rank;
  return out;
}

// ---------------------------------------------------------------------------
// Rank bookkeeping

std::map<Bidegree, std::size_t> bigraded_ranks(const BigradedGroup& g, RankRule rule) {
  std::map<Bidegree, std::size_t> out;
  if (rule.kind == RankRule::Kind::Native ||
      (g.ring().kind() == Domain::Kind::PrimeField && g.ring().characteristic() == rule.p)) {
    for (const auto& [b, s] : g.groups()) {
      if (s.free_rank > 0) out[b] += s.free_rank;
    }
    return out;
  }
  if (g.ring().kind() != Domain::Kind::Integers) {
    throw AlgebraError("reduction modulo a prime needs integral homology");
  }
  for (const auto& [b, s] : g.groups()) {
    std::size_t divisible = 0;
    for (const auto& t : s.torsion) {
      if (mpz_divisible_ui_p(t.get_mpz_t(), rule.p)) ++divisible;
    }
    if (s.free_rank + divisible > 0) out[b] += s.free_rank + divisible;
    // Tor(H^i, F_p) lands in degree i - 1.
    if (divisible > 0) out[{b.i - 1, b.j}] += divisible;
  }
  return out;
}

GradedRanks graded_projection(const BigradedGroup& g, Collapse mode, RankRule rule) {
  GradedRanks out;
  for (const auto& [b, r] : bigraded_ranks(g, rule)) {
    int key = 0;
    switch (mode) {
      case Collapse::Homological: key = b.i; break;
      case Collapse::HomologicalMinusQuantum: key = b.i - b.j; break;
      case Collapse::DeltaPrime: key = b.j - 2 * b.i; break;
    }
    out.ranks[key] += r;
  }
  return out;
}

std::size_t total_rank(const BigradedGroup& g, RankRule rule) {
  std::size_t n = 0;
  for (const auto& [b, r] : bigraded_ranks(g, rule)) n += r;
  return n;
}

}  // namespace khd
