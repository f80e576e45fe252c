#include <doctest.h>

#include <array>
#include <vector>

#include "fixtures.hpp"
#include "khd/diagram_io.hpp"
#include "khd/error.hpp"
#include "khd/link_diagram.hpp"

using namespace khd;
using fixtures::braid;
using fixtures::load;

TEST_SUITE("link_diagram") {

TEST_CASE("positive Hopf link from PD") {
  const std::vector<std::array<int, 4>> pd{{2, 4, 3, 1}, {4, 2, 1, 3}};
  const LinkDiagram d = LinkDiagram::from_pd(pd);
  CHECK(d.crossing_count() == 2);
  CHECK(d.component_count() == 2);
  CHECK(d.n_plus() == 2);
  CHECK(d.n_minus() == 0);
  CHECK(linking_number(d, 0, 1) == 1);
}

TEST_CASE("tabulated Hopf and T(2,6) codes carry the expected linking numbers") {
  CHECK(linking_number(load("hopf_neg.json"), 0, 1) == -1);
  const LinkDiagram t = load("t26_pd.json");
  CHECK(t.component_count() == 2);
  CHECK(linking_number(t, 0, 1) == 3);
  CHECK(t.writhe() == 6);
}

TEST_CASE("trefoil braid closure") {
  const LinkDiagram d = braid(2, {1, 1, 1});
  CHECK(d.crossing_count() == 3);
  CHECK(d.component_count() == 1);
  CHECK(d.writhe() == 3);
  const LinkDiagram m = braid(2, {-1, -1, -1});
  CHECK(m.writhe() == -3);
}

TEST_CASE("braid axis links the closure once per strand") {
  for (int strands = 1; strands <= 4; ++strands) {
    std::vector<int> word;
    for (int k = 1; k < strands; ++k) word.push_back(k);
    const LinkDiagram d = braid(strands, word, true);
    REQUIRE(d.component_count() == 2);
    CHECK(d.crossing_count() == word.size() + 2 * static_cast<std::size_t>(strands));
    CHECK(linking_number(d, 0, 1) == strands);
  }
}

TEST_CASE("closure of the identity braid is an unlink of free circles") {
  const LinkDiagram d = braid(3, {});
  CHECK(d.crossing_count() == 0);
  CHECK(d.free_circles() == 3);
  CHECK(d.component_count() == 3);
}

TEST_CASE("components of a torus link closure") {
  CHECK(braid(2, {1, 1, 1, 1}).component_count() == 2);
  CHECK(braid(3, {1, 2, 1, 2, 1, 2}).component_count() == 3);
  CHECK(braid(3, {1, -2}).component_count() == 1);
}

TEST_CASE("malformed PD codes are rejected") {
  SUBCASE("label used three times") {
    const std::vector<std::array<int, 4>> pd{{1, 2, 1, 1}};
    CHECK_THROWS_AS(LinkDiagram::from_pd(pd), DiagramError);
  }
  SUBCASE("label used once") {
    const std::vector<std::array<int, 4>> pd{{1, 2, 3, 1}, {2, 4, 3, 5}};
    CHECK_THROWS_AS(LinkDiagram::from_pd(pd), DiagramError);
  }
  SUBCASE("non-positive label") {
    const std::vector<std::array<int, 4>> pd{{0, 1, 1, 0}};
    CHECK_THROWS_AS(LinkDiagram::from_pd(pd), DiagramError);
  }
  SUBCASE("empty diagram") { CHECK_THROWS_AS(LinkDiagram::from_pd({}, 0), DiagramError); }
  SUBCASE("inconsistent under strands") {
    // Both crossings claim arc 1 as their incoming under strand.
    const std::vector<std::array<int, 4>> pd{{1, 2, 3, 4}, {1, 4, 3, 2}};
    CHECK_THROWS_AS(LinkDiagram::from_pd(pd), DiagramError);
  }
}

TEST_CASE("bad braid words") {
  CHECK_THROWS_AS(braid(2, {2}), DiagramError);
  CHECK_THROWS_AS(braid(3, {0}), DiagramError);
  CHECK_THROWS_AS(braid(0, {}), DiagramError);
}

TEST_CASE("JSON input formats") {
  CHECK(parse_pd("[[2,4,3,1],[4,2,1,3]]").component_count() == 2);
  CHECK(parse_pd("{\"pd\": [], \"free_circles\": 2}").component_count() == 2);
  CHECK(parse_pd("[[2,4,3,1],[4,2,1,3]]", 1).component_count() == 3);
  CHECK(load_diagram("{\"strands\": 2, \"word\": [1,1,1]}").crossing_count() == 3);
  CHECK(load_diagram("{\"strands\": 3, \"word\": [1,2], \"axis\": true}").crossing_count() == 8);
  CHECK_THROWS_AS(parse_pd("[[1,2,3]]"), ParseError);
  CHECK_THROWS_AS(parse_pd("not json"), ParseError);
  CHECK_THROWS_AS(parse_pd("[[1,2,\"a\",4]]"), ParseError);
  CHECK_THROWS_AS(load_diagram("{\"strands\": 2}"), ParseError);
  CHECK_THROWS_AS(load_diagram_file(fixtures::data("missing.json")), ParseError);
}

TEST_CASE("serialization round trip") {
  for (const auto& name : fixtures::bundled()) {
    CAPTURE(name);
    const LinkDiagram d = load(name);
    const LinkDiagram back = parse_pd(serialize_pd(d));
    CHECK(back.pd_tuples() == d.pd_tuples());
    CHECK(back.free_circles() == d.free_circles());
    CHECK(back.writhe() == d.writhe());
  }
}

TEST_CASE("mirror negates every sign and keeps components") {
  for (const auto& name : fixtures::bundled()) {
    CAPTURE(name);
    const LinkDiagram d = load(name);
    const LinkDiagram m = d.mirror();
    CHECK(m.n_plus() == d.n_minus());
    CHECK(m.n_minus() == d.n_plus());
    CHECK(m.component_count() == d.component_count());
    if (d.component_count() == 2) CHECK(linking_number(m, 0, 1) == -linking_number(d, 0, 1));
  }
}

TEST_CASE("permuting crossings keeps signs") {
  const LinkDiagram d = load("t26_axis.json");
  std::vector<std::size_t> order(d.crossing_count());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = order.size() - 1 - k;
  const LinkDiagram p = d.permuted(order);
  CHECK(p.writhe() == d.writhe());
  CHECK(p.crossings().front().arcs == d.crossings().back().arcs);
  const std::vector<std::size_t> bad(order.size(), 0);
  CHECK_THROWS_AS(d.permuted(bad), DiagramError);
}

TEST_CASE("sublinks of T(2,6) with axis are unknots") {
  const LinkDiagram d = load("t26_axis.json");
  for (int c = 0; c < 2; ++c) {
    const LinkDiagram s = d.sublink(c);
    CHECK(s.component_count() == 1);
  }
  // The closure of sigma_1 sigma_2 keeps its two crossings.
  CHECK(d.sublink(0).crossing_count() + d.sublink(1).crossing_count() == 2);
  CHECK_THROWS_AS(d.sublink(2), DiagramError);
}

TEST_CASE("disjoint union adds components and free circles") {
  const LinkDiagram h = load("hopf_pos.json");
  const LinkDiagram u = h.disjoint_union(braid(2, {1, 1, 1}));
  CHECK(u.component_count() == 3);
  CHECK(u.crossing_count() == 5);
  CHECK(linking_number(u, 0, 1) == 1);
  CHECK(linking_number(u, 0, 2) == 0);
}

TEST_CASE("linking number argument checks") {
  const LinkDiagram d = load("hopf_pos.json");
  CHECK_THROWS_AS(linking_number(d, 0, 0), DiagramError);
  CHECK_THROWS_AS(linking_number(d, 0, 2), DiagramError);
}

TEST_CASE("free circle arcs address basepoints") {
  const LinkDiagram d = load("hopf_unknot.json");
  const int arc = d.free_circle_arc(0);
  CHECK(arc == 5);
  CHECK(d.has_arc(arc));
  CHECK(d.component_of(arc) == 2);
  CHECK_THROWS_AS(d.component_of(99), DiagramError);
}

}  // TEST_SUITE
