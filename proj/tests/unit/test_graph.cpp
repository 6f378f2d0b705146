#include <doctest.h>

#include <cmath>
#include <set>

#include "qbl/error.hpp"
#include "qbl/graph.hpp"
#include "qbl/rng.hpp"

using namespace qbl;

namespace {

GraphInstance triangle() {
  GraphInstance g;
  g.n = 3;
  g.edges = {{0, 1}, {0, 2}, {1, 2}};
  g.label = "k3";
  return g;
}

}  // namespace

TEST_CASE("generate_er forces all edges at probability 1") {
  const GraphInstance g = generate_er(3, 1.0, 7);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("generate_er yields no edges at probability 0") {
  const GraphInstance g = generate_er(5, 0.0, 7);
  CHECK(g.edges.empty());
}

TEST_CASE("generate_er is deterministic in the seed") {
  const GraphInstance a = generate_er(20, 0.5, 42);
  const GraphInstance b = generate_er(20, 0.5, 42);
  CHECK(a.edges == b.edges);
  CHECK(a.label == b.label);
  const GraphInstance c = generate_er(20, 0.5, 43);
  CHECK(a.edges != c.edges);
}

TEST_CASE("generate_er rejects bad arguments") {
  CHECK_THROWS_AS(generate_er(1, 0.5, 0), Error);
  CHECK_THROWS_AS(generate_er(4, 1.5, 0), Error);
}

TEST_CASE("generated instances satisfy the edge invariants") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GraphInstance g = generate_er(12, 0.5, seed);
    validate(g);
    std::set<std::pair<int, int>> seen(g.edges.begin(), g.edges.end());
    CHECK(seen.size() == g.edges.size());
    CHECK(g.edge_count() <= g.n * (g.n - 1) / 2);
  }
}

TEST_CASE("edge count at p=0.5 stays within 5 sigma of the binomial") {
  const int n = 20;
  const int pairs = n * (n - 1) / 2;
  const int draws = 1000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) total += generate_er(n, 0.5, 1000 + i).edge_count();
  const double mean = total / draws;
  const double expected = pairs * 0.5;
  const double sigma_mean = std::sqrt(pairs * 0.25 / draws);
  CHECK(std::abs(mean - expected) < 5.0 * sigma_mean);
}

TEST_CASE("average degree") {
  CHECK(average_degree(triangle()) == 2.0);
  GraphInstance pair;
  pair.n = 2;
  pair.edges = {{0, 1}};
  CHECK(average_degree(pair) == 1.0);
  GraphInstance g;
  g.n = 4;
  g.edges = {{0, 1}, {1, 2}, {2, 3}};
  CHECK(average_degree(g) == doctest::Approx(1.5));
}

TEST_CASE("cut cost on the triangle") {
  const GraphInstance g = triangle();
  Assignment all_up;
  all_up.spins = {1, 1, 1};
  CHECK(cut_cost(g, all_up) == 3);
  Assignment one_down;
  one_down.spins = {1, 1, -1};
  CHECK(cut_cost(g, one_down) == -1);
}

TEST_CASE("cut cost of the empty graph is zero") {
  GraphInstance g;
  g.n = 3;
  Assignment z;
  z.spins = {1, -1, 1};
  CHECK(cut_cost(g, z) == 0);
}

TEST_CASE("cut cost rejects mismatched assignments") {
  Assignment z;
  z.spins = {1, -1};
  CHECK_THROWS_AS(cut_cost(triangle(), z), Error);
}

TEST_CASE("cut cost has the global flip symmetry") {
  Xoshiro256pp rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const GraphInstance g = generate_er(10, 0.5, 100 + trial);
    const std::uint64_t index = rng.next() & ((1u << 10) - 1);
    Assignment z = Assignment::from_index(index, 10);
    Assignment flipped = z;
    for (auto& s : flipped.spins) s = -s;
    CHECK(cut_cost(g, z) == cut_cost(g, flipped));
  }
}

TEST_CASE("all-equal assignment cuts nothing") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GraphInstance g = generate_er(9, 0.4, seed);
    CHECK(cut_cost(g, Assignment::from_index(0, 9)) == g.edge_count());
  }
}

TEST_CASE("assignment integer encoding round-trips") {
  for (std::uint64_t index = 0; index < 64; ++index) {
    const Assignment z = Assignment::from_index(index, 6);
    CHECK(z.to_index() == index);
    for (const auto s : z.spins) CHECK(std::abs(s) == 1);
  }
}

TEST_CASE("instance JSON round-trips and keeps edges sorted") {
  const GraphInstance g = generate_er(8, 0.5, 99);
  const GraphInstance back = instance_from_json_string(to_json_string(g));
  CHECK(back.n == g.n);
  CHECK(back.edges == g.edges);
  CHECK(back.seed == g.seed);
  CHECK(back.label == g.label);
}

TEST_CASE("malformed instance JSON raises a parse error") {
  CHECK_THROWS_AS(instance_from_json_string("{\"n\": 3, \"edges\": [[0,"), Error);
  try {
    instance_from_json_string("not json");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("default labels follow the er{n}_p{prob}_s{seed} convention") {
  CHECK(generate_er(14, 0.5, 3).label == "er14_p0.5_s3");
}
