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

// Graph generators (paths, cycles, complete graphs, hypercubes, random
// connected graphs) and the worked fixtures used across the test suites.

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpcolor/graph.hpp"
#include "dpcolor/synth.hpp"

namespace dpcolor {

enum class GraphKind { kPath, kCycle, kComplete, kHypercube, kRandomConnected };

struct ColoringRule {
  enum class Kind { kAlternating, kThreshold, kRandom, kExplicit };
  Kind kind = Kind::kAlternating;
  int threshold = 0;
  std::vector<Color> colors;  // kExplicit: one entry per vertex, generation order

  static ColoringRule alternating() { return {}; }
  static ColoringRule with_threshold(int t) { return {Kind::kThreshold, t, {}}; }
  static ColoringRule random() { return {Kind::kRandom, 0, {}}; }
  static ColoringRule explicit_colors(std::vector<Color> colors) {
    return {Kind::kExplicit, 0, std::move(colors)};
  }
};

struct GeneratorSpec {
  GraphKind kind = GraphKind::kPath;
  int n = 1;               // vertex count; bit width for hypercubes
  double edge_prob = 0.5;  // random-connected only
  std::uint64_t seed = 0;
  ColoringRule coloring;
};

namespace detail {

// v1..vn, zero-padded so generation order and lexicographic order agree.
inline std::vector<std::string> numbered_ids(int n) {
  const int width = static_cast<int>(std::to_string(n).size());
  std::vector<std::string> ids;
  ids.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back("v" + std::string(width - digits.size(), '0') + digits);
  }
  return ids;
}

inline Color color_for(const GeneratorSpec& spec, int index, int rank, std::mt19937_64& rng) {
  switch (spec.coloring.kind) {
    case ColoringRule::Kind::kAlternating:
      return rank % 2 == 0 ? Color::kBlue : Color::kRed;
    case ColoringRule::Kind::kThreshold:
      return rank >= spec.coloring.threshold ? Color::kBlue : Color::kRed;
    case ColoringRule::Kind::kRandom:
      return (rng() & 1) ? Color::kBlue : Color::kRed;
    case ColoringRule::Kind::kExplicit:
      return spec.coloring.colors.at(index);
  }
  throw std::logic_error("unreachable");
}

inline bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++visited;
        stack.push_back(y);
      }
  }
  return visited == n;
}

}  // namespace detail

// Builds the requested graph. The coloring rank is the vertex index for
// numbered graphs and the popcount for hypercubes, so a threshold rule on a
// hypercube colors a vertex blue iff its popcount reaches the threshold.
// Random-connected graphs redraw the edge set until it is connected (at most
// 10^4 attempts); every outcome is reproducible from the seed.
inline DatasetGraph generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  std::mt19937_64 rng(spec.seed);
  const auto validate_threshold = [&](int max_rank) {
    if (spec.coloring.kind == ColoringRule::Kind::kThreshold &&
        (spec.coloring.threshold < 0 || spec.coloring.threshold > max_rank + 1))
      throw std::invalid_argument("generate: threshold out of range");
  };
  std::vector<std::string> ids;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> ranks;
  switch (spec.kind) {
    case GraphKind::kPath: {
      ids = detail::numbered_ids(spec.n);
      for (int i = 0; i + 1 < spec.n; ++i) edges.emplace_back(i, i + 1);
      break;
    }
    case GraphKind::kCycle: {
      if (spec.n < 3) throw std::invalid_argument("generate: a cycle needs n >= 3");
      ids = detail::numbered_ids(spec.n);
      for (int i = 0; i + 1 < spec.n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(spec.n - 1, 0);
      break;
    }
    case GraphKind::kComplete: {
      ids = detail::numbered_ids(spec.n);
      for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) edges.emplace_back(i, j);
      break;
    }
    case GraphKind::kHypercube: {
      if (spec.n > 20) throw std::invalid_argument("generate: hypercube dimension too large");
      const int count = 1 << spec.n;
      ids.reserve(count);
      ranks.reserve(count);
      for (int x = 0; x < count; ++x) {
        std::string bits(spec.n, '0');
        for (int b = 0; b < spec.n; ++b)
          if (x & (1 << (spec.n - 1 - b))) bits[b] = '1';
        ids.push_back(std::move(bits));
        ranks.push_back(std::popcount(static_cast<unsigned>(x)));
        for (int b = 0; b < spec.n; ++b) {
          const int y = x ^ (1 << b);
          if (y > x) edges.emplace_back(x, y);
        }
      }
      validate_threshold(spec.n);
      break;
    }
    case GraphKind::kRandomConnected: {
      if (spec.edge_prob < 0.0 || spec.edge_prob > 1.0)
        throw std::invalid_argument("generate: edge probability out of [0,1]");
      ids = detail::numbered_ids(spec.n);
      bool ok = false;
      for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
        edges.clear();
        for (int i = 0; i < spec.n; ++i)
          for (int j = i + 1; j < spec.n; ++j)
            if (detail::uniform01(rng) < spec.edge_prob) edges.emplace_back(i, j);
        ok = detail::connected(spec.n, edges);
      }
      if (!ok) throw std::runtime_error("generate: no connected draw after 10000 attempts");
      break;
    }
  }
  const int count = static_cast<int>(ids.size());
  if (ranks.empty())
    for (int i = 0; i < count; ++i) ranks.push_back(i);
  if (spec.kind != GraphKind::kHypercube) validate_threshold(count - 1);
  if (spec.coloring.kind == ColoringRule::Kind::kExplicit &&
      static_cast<int>(spec.coloring.colors.size()) != count)
    throw std::invalid_argument("generate: explicit color list has wrong length");
  std::vector<std::pair<std::string, Color>> vertices;
  vertices.reserve(count);
  for (int i = 0; i < count; ++i)
    vertices.emplace_back(ids[i], detail::color_for(spec, i, ranks[i], rng));
  std::vector<std::pair<std::string, std::string>> named_edges;
  named_edges.reserve(edges.size());
  for (const auto& [a, b] : edges) named_edges.emplace_back(ids[a], ids[b]);
  return DatasetGraph(std::move(vertices), named_edges);
}

// --- fixtures -------------------------------------------------------------

enum class FixtureName { kExample1, kExample23, kFigure1 };

// A worked example: the graph, its file-format source, and the partial
// mechanisms / reference mechanisms / named vertex sets that belong to it.
struct Fixture {
  DatasetGraph graph;
  std::string graph_text;
  std::map<std::string, PartialMechanism> partials;
  std::map<std::string, Mechanism> mechanisms;
  std::map<std::string, std::vector<std::string>> vertex_sets;
};

namespace detail {

inline PartialMechanism make_partial(std::initializer_list<std::pair<const char*, double>> values) {
  PartialMechanism pm;
  for (const auto& [id, v] : values) pm.assignment.emplace(id, Probability(v));
  return pm;
}

}  // namespace detail

inline Fixture fixture(FixtureName name) {
  switch (name) {
    case FixtureName::kExample1: {
      // Two neighboring datasets with opposite true values, and the two
      // incomparable (log 2, 0.1)-private reference mechanisms on them.
      const char* text =
          "v 1 blue\n"
          "v 2 red\n"
          "e 1 2\n";
      Fixture f{DatasetGraph::from_text(text), text, {}, {}, {}};
      f.mechanisms.emplace("m1", make_mechanism(f.graph, {{"1", 0.58}, {"2", 0.24}}));
      f.mechanisms.emplace("m2", make_mechanism(f.graph, {{"1", 0.64}, {"2", 0.27}}));
      return f;
    }
    case FixtureName::kExample23: {
      // Path v1-v2-v3-v4 with red endpoints. Carries the hitting-set
      // restriction {v1: 0.3, v4: 0.1}, the non-hitting restriction
      // {v3: 1/2}, and the two maximal incomparable extensions of the
      // latter at (log 2, 0).
      const char* text =
          "v v1 red\n"
          "v v2 blue\n"
          "v v3 blue\n"
          "v v4 red\n"
          "e v1 v2\n"
          "e v2 v3\n"
          "e v3 v4\n";
      Fixture f{DatasetGraph::from_text(text), text, {}, {}, {}};
      f.partials.emplace("hitting", detail::make_partial({{"v1", 0.3}, {"v4", 0.1}}));
      f.partials.emplace("single", detail::make_partial({{"v3", 0.5}}));
      f.mechanisms.emplace("m1", make_mechanism(f.graph, {{"v1", 0.5}, {"v2", 0.75}, {"v3", 0.5}, {"v4", 0.25}}));
      f.mechanisms.emplace("m2", make_mechanism(f.graph, {{"v1", 0.125}, {"v2", 0.25}, {"v3", 0.5}, {"v4", 0.25}}));
      return f;
    }
    case FixtureName::kFigure1: {
      // 22-vertex graph with six boundary edges; the named vertex sets are
      // the two valid hitting sets, the invalid candidate (misses (h,i)),
      // and the boundary split by color.
      const char* text =
          "v a blue\n"
          "v b blue\n"
          "v c blue\n"
          "v d red\n"
          "v e red\n"
          "v f red\n"
          "v g blue\n"
          "v h blue\n"
          "v i red\n"
          "v j red\n"
          "v k blue\n"
          "v l blue\n"
          "v m red\n"
          "v n red\n"
          "v o red\n"
          "v p red\n"
          "v q red\n"
          "v r red\n"
          "v s blue\n"
          "v t blue\n"
          "v u blue\n"
          "v v blue\n"
          "e a b\n"
          "e a g\n"
          "e b g\n"
          "e c g\n"
          "e c h\n"
          "e c k\n"
          "e k l\n"
          "e l v\n"
          "e v s\n"
          "e v t\n"
          "e v u\n"
          "e s t\n"
          "e t u\n"
          "e l q\n"
          "e h n\n"
          "e h i\n"
          "e r s\n"
          "e r t\n"
          "e f u\n"
          "e d i\n"
          "e i n\n"
          "e j n\n"
          "e j m\n"
          "e d m\n"
          "e d e\n"
          "e e f\n"
          "e f p\n"
          "e p q\n"
          "e o q\n"
          "e o r\n";
      Fixture f{DatasetGraph::from_text(text), text, {}, {}, {}};
      f.vertex_sets.emplace("hitting-a", std::vector<std::string>{"l", "h", "u", "s", "t"});
      f.vertex_sets.emplace("hitting-b",
                            std::vector<std::string>{"a", "q", "n", "i", "s", "t", "u", "v"});
      f.vertex_sets.emplace("not-hitting",
                            std::vector<std::string>{"a", "l", "n", "s", "t", "j", "u"});
      f.vertex_sets.emplace("boundary-blue", std::vector<std::string>{"h", "l", "s", "t", "u"});
      f.vertex_sets.emplace("boundary-red", std::vector<std::string>{"f", "i", "n", "q", "r"});
      return f;
    }
  }
  throw std::invalid_argument("unknown fixture");
}

}  // namespace dpcolor
