// Copyright 2026 The dpcolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "dpcolor/dpcolor.hpp"
#include "test_support.hpp"

using namespace dpcolor;

TEST_CASE("load_graph parses the smallest boundary", "[graph]") {
  const auto g = load_graph("v a blue\nv b red\ne a b\n");
  REQUIRE(g.size() == 2);
  const auto bs = boundary(g);
  REQUIRE(bs.boundary_edges == std::vector<Edge>{{"a", "b"}});
}

TEST_CASE("load_graph accepts comments, blank lines and CRLF", "[graph]") {
  const auto g = load_graph("# comment\r\n\nv a blue\r\nv b blue\ne a b\n");
  REQUIRE(g.size() == 2);
  REQUIRE(g.edges().size() == 1);
}

TEST_CASE("load_graph collapses duplicate edges silently", "[graph]") {
  const auto g = load_graph("v a blue\nv b red\ne a b\ne b a\ne a b\n");
  REQUIRE(g.edges().size() == 1);
}

TEST_CASE("load_graph rejects malformed input", "[graph]") {
  REQUIRE_THROWS_AS(load_graph("v a blue\nv a red\n"), ParseError);          // duplicate vertex
  REQUIRE_THROWS_AS(load_graph("v a blue\ne a b\n"), ParseError);            // unknown vertex
  REQUIRE_THROWS_AS(load_graph("v a blue\ne a a\n"), ParseError);            // self-loop
  REQUIRE_THROWS_AS(load_graph("vertex a blue\n"), ParseError);              // malformed line
  REQUIRE_THROWS_AS(load_graph("v a\n"), ParseError);                        // missing color
  REQUIRE_THROWS_AS(load_graph("v a green\n"), ParseError);                  // unknown color
  REQUIRE_THROWS_AS(load_graph("e a b\nv a blue\nv b blue\n"), ParseError);  // edge before vertices
  try {
    load_graph("v a blue\nv b red\ne a a\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 3);
  }
}

TEST_CASE("figure-1 fixture matches its caption", "[graph][fixture]") {
  const auto f = fixture(FixtureName::kFigure1);
  const auto& g = f.graph;
  REQUIRE(g.size() == 22);

  const auto bs = boundary(g);
  const std::vector<Edge> expected_edges = {{"f", "u"}, {"h", "i"}, {"h", "n"},
                                            {"l", "q"}, {"r", "s"}, {"r", "t"}};
  REQUIRE(bs.boundary_edges == expected_edges);
  REQUIRE(bs.blue_vertices == f.vertex_sets.at("boundary-blue"));
  REQUIRE(bs.red_vertices == f.vertex_sets.at("boundary-red"));

  REQUIRE(distance(g, "a", "d") == 5);

  REQUIRE(validate_hitting_set(g, f.vertex_sets.at("hitting-a")).ok);
  REQUIRE(validate_hitting_set(g, f.vertex_sets.at("hitting-b")).ok);
  const auto bad = validate_hitting_set(g, f.vertex_sets.at("not-hitting"));
  REQUIRE_FALSE(bad.ok);
  REQUIRE(bad.uncovered == std::vector<Edge>{{"h", "i"}});
}

TEST_CASE("distance basics", "[graph]") {
  const auto path = fixture(FixtureName::kExample23).graph;
  REQUIRE(distance(path, "v1", "v4") == 3);
  REQUIRE(distance(path, "v2", "v2") == 0);
  REQUIRE_THROWS_AS(distance(path, "v1", "nope"), std::invalid_argument);

  const auto split = load_graph("v a blue\nv b blue\nv c blue\ne a b\n");
  REQUIRE_FALSE(distance(split, "a", "c").has_value());
}

TEST_CASE("distances_from picks the closest source, smallest id on ties", "[graph]") {
  const auto path = fixture(FixtureName::kExample23).graph;
  const auto from_ends = distances_from(path, {"v1", "v4"});
  REQUIRE(from_ends.at("v2") == NearestSource{1, "v1"});
  REQUIRE(from_ends.at("v3") == NearestSource{1, "v4"});

  const auto self = distances_from(path, {"v2"});
  REQUIRE(self.at("v2") == NearestSource{0, "v2"});

  REQUIRE_THROWS_AS(distances_from(path, {}), std::invalid_argument);

  // Both endpoints of a 2-path from both sources: the smaller id wins.
  const auto two = load_graph("v a blue\nv b blue\nv m blue\ne a m\ne b m\n");
  REQUIRE(distances_from(two, {"a", "b"}).at("m") == NearestSource{1, "a"});
}

TEST_CASE("distances_from agrees with the all-pairs oracle", "[graph][property]") {
  const auto check = [](const DatasetGraph& g, const std::vector<std::string>& sources) {
    if (sources.empty()) return;
    const auto oracle = testutil::all_pairs_distances(g);
    const auto got = distances_from(g, sources);
    for (int v = 0; v < g.size(); ++v) {
      int best = testutil::kUnreachable;
      for (const auto& s : sources) best = std::min(best, oracle[v][g.index_of(s)]);
      const auto it = got.find(g.id_of(v));
      if (best == testutil::kUnreachable) {
        REQUIRE(it == got.end());
      } else {
        REQUIRE(it != got.end());
        REQUIRE(it->second.distance == best);
        // The reported source achieves the distance and is the smallest such.
        REQUIRE(oracle[v][g.index_of(it->second.source)] == best);
        for (const auto& s : sources)
          if (oracle[v][g.index_of(s)] == best) REQUIRE(it->second.source <= s);
      }
    }
  };
  const auto fig1 = fixture(FixtureName::kFigure1).graph;
  check(fig1, boundary(fig1).blue_vertices);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testutil::random_colored_graph(3 + static_cast<int>(seed % 10), 0.3, seed);
    std::vector<std::string> sources;
    for (int i = 0; i < g.size(); i += 2) sources.push_back(g.id_of(i));
    check(g, sources);
  }
}

TEST_CASE("distance is a metric and respects the neighbor step bound", "[graph][property]") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto g = testutil::random_colored_graph(4 + static_cast<int>(seed % 8), 0.35, seed);
    const auto d = testutil::all_pairs_distances(g);
    std::vector<std::vector<int>> lib(g.size());
    for (int i = 0; i < g.size(); ++i) lib[i] = g.bfs_from(i);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) {
        const int dij = lib[i][j] < 0 ? testutil::kUnreachable : lib[i][j];
        REQUIRE(dij == d[i][j]);                    // BFS matches the oracle
        REQUIRE(lib[i][j] == lib[j][i]);            // symmetry
        if (i != j) REQUIRE(lib[i][j] != 0);        // zero only on the diagonal
        for (int k = 0; k < g.size(); ++k)
          REQUIRE(d[i][j] <= d[i][k] + d[k][j]);    // triangle inequality
      }
    for (const auto& e : g.edges()) {
      const int u = g.index_of(e.u), v = g.index_of(e.v);
      for (int w = 0; w < g.size(); ++w)
        REQUIRE(d[u][w] <= d[v][w] + 1);            // one edge costs at most one step
    }
  }
}

TEST_CASE("boundary of a monochrome graph is empty", "[graph]") {
  const auto g = load_graph("v a blue\nv b blue\nv c blue\ne a b\ne b c\n");
  const auto bs = boundary(g);
  REQUIRE(bs.boundary_edges.empty());
  REQUIRE(bs.boundary_vertices.empty());
  REQUIRE(bs.blue_vertices.empty());
  REQUIRE(validate_hitting_set(g, {}).ok);
}

TEST_CASE("path fixture has the two expected boundary edges", "[graph]") {
  const auto g = fixture(FixtureName::kExample23).graph;
  REQUIRE(boundary(g).boundary_edges == std::vector<Edge>{{"v1", "v2"}, {"v3", "v4"}});
}

TEST_CASE("boundary edges split colors, non-boundary edges do not", "[graph][property]") {
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    const auto g = testutil::random_colored_graph(3 + static_cast<int>(seed % 9), 0.4, seed);
    const auto bs = boundary(g);
    const std::set<Edge> marked(bs.boundary_edges.begin(), bs.boundary_edges.end());
    for (const auto& e : g.edges())
      REQUIRE((g.color(e.u) != g.color(e.v)) == marked.count(e));
    REQUIRE(validate_hitting_set(g, bs.boundary_vertices).ok);
  }
}

TEST_CASE("validate_hitting_set rejects foreign members", "[graph]") {
  const auto g = fixture(FixtureName::kExample23).graph;
  REQUIRE_THROWS_AS(validate_hitting_set(g, {"v1", "zz"}), std::invalid_argument);
}

TEST_CASE("default hitting sets", "[graph]") {
  const auto path = fixture(FixtureName::kExample23).graph;
  REQUIRE(default_hitting_set(path, HittingStrategy::kAllBoundary).members ==
          std::vector<std::string>{"v1", "v2", "v3", "v4"});

  const auto tiny = load_graph("v a blue\nv b red\ne a b\n");
  REQUIRE(default_hitting_set(tiny, HittingStrategy::kGreedyCover).members ==
          std::vector<std::string>{"a"});

  const auto fig1 = fixture(FixtureName::kFigure1).graph;
  const auto greedy = default_hitting_set(fig1, HittingStrategy::kGreedyCover);
  REQUIRE(validate_hitting_set(fig1, greedy.members).ok);
  REQUIRE(greedy.members.size() <= 6);
  const int optimum = testutil::min_vertex_cover_size(boundary(fig1).boundary_edges);
  REQUIRE(optimum == 4);
  REQUIRE(greedy.members.size() == static_cast<std::size_t>(optimum));
}

TEST_CASE("greedy cover always covers on random graphs", "[graph][property]") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const auto g = testutil::random_colored_graph(3 + static_cast<int>(seed % 10), 0.4, seed);
    for (auto strategy : {HittingStrategy::kAllBoundary, HittingStrategy::kGreedyCover})
      REQUIRE(validate_hitting_set(g, default_hitting_set(g, strategy).members).ok);
  }
}

TEST_CASE("graph text round-trips", "[graph]") {
  const auto f = fixture(FixtureName::kFigure1);
  const auto again = load_graph(f.graph.to_text());
  REQUIRE(again.ids() == f.graph.ids());
  REQUIRE(again.edges() == f.graph.edges());
  for (const auto& id : f.graph.ids()) REQUIRE(again.color(id) == f.graph.color(id));
}
