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

// Dataset-neighborhood graphs with a two-valued true coloring: parsing,
// shortest-path queries, boundary structure and boundary-hitting sets.
// A graph is immutable once constructed; every query is a pure function.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpcolor {

enum class Color : std::uint8_t { kBlue, kRed };

inline Color opposite(Color c) { return c == Color::kBlue ? Color::kRed : Color::kBlue; }

inline const char* to_string(Color c) { return c == Color::kBlue ? "blue" : "red"; }

inline std::optional<Color> color_from_string(std::string_view s) {
  if (s == "blue") return Color::kBlue;
  if (s == "red") return Color::kRed;
  return std::nullopt;
}

// Error raised while parsing any of the line-oriented text formats.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// Undirected edge, normalized so that u < v.
struct Edge {
  std::string u, v;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return Edge{std::move(a), std::move(b)};
}

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline bool valid_vertex_id(const std::string& id) {
  if (id.empty()) return false;
  for (unsigned char c : id)
    if (std::isspace(c)) return false;
  return true;
}

}  // namespace detail

// Undirected graph of datasets together with the true query value of each.
// Vertices are kept sorted by id, so vertex indices enumerate ids in
// lexicographic order and index-based iteration is deterministic.
class DatasetGraph {
 public:
  DatasetGraph(std::vector<std::pair<std::string, Color>> vertices,
               const std::vector<std::pair<std::string, std::string>>& edge_list) {
    for (const auto& [id, color] : vertices) {
      (void)color;
      if (!detail::valid_vertex_id(id))
        throw std::invalid_argument("invalid vertex id '" + id + "'");
    }
    std::sort(vertices.begin(), vertices.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (vertices[i].first == vertices[i - 1].first)
        throw std::invalid_argument("duplicate vertex id '" + vertices[i].first + "'");
    ids_.reserve(vertices.size());
    colors_.reserve(vertices.size());
    for (auto& [id, color] : vertices) {
      index_.emplace(id, static_cast<int>(ids_.size()));
      ids_.push_back(std::move(id));
      colors_.push_back(color);
    }
    for (const auto& [a, b] : edge_list) {
      if (a == b) throw std::invalid_argument("self-loop at '" + a + "'");
      index_of(a);
      index_of(b);
      edges_.push_back(make_edge(a, b));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    adj_.assign(ids_.size(), {});
    for (const Edge& e : edges_) {
      const int iu = index_of(e.u), iv = index_of(e.v);
      adj_[iu].push_back(iv);
      adj_[iv].push_back(iu);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
  }

  // Parses the graph file format: '#' comment lines, "v <id> <blue|red>"
  // vertex lines, "e <id> <id>" edge lines. Vertices must be declared before
  // the edges that use them. Duplicate edges are collapsed.
  static DatasetGraph from_text(std::string_view text) {
    std::vector<std::pair<std::string, Color>> vertices;
    std::set<std::string> declared;
    std::vector<std::pair<std::string, std::string>> edges;
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto tokens = detail::tokenize(line);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      if (tokens.front() == "v") {
        if (tokens.size() == 2)
          throw ParseError(line_no, "missing color for vertex '" + tokens[1] + "'");
        if (tokens.size() != 3) throw ParseError(line_no, "malformed vertex line");
        const auto color = color_from_string(tokens[2]);
        if (!color)
          throw ParseError(line_no, "unknown color '" + tokens[2] + "' (expected blue or red)");
        if (!declared.insert(tokens[1]).second)
          throw ParseError(line_no, "duplicate vertex id '" + tokens[1] + "'");
        vertices.emplace_back(tokens[1], *color);
      } else if (tokens.front() == "e") {
        if (tokens.size() != 3) throw ParseError(line_no, "malformed edge line");
        for (int k : {1, 2})
          if (!declared.count(tokens[k]))
            throw ParseError(line_no, "edge references unknown vertex '" + tokens[k] + "'");
        if (tokens[1] == tokens[2])
          throw ParseError(line_no, "self-loop at '" + tokens[1] + "'");
        edges.emplace_back(tokens[1], tokens[2]);
      } else {
        throw ParseError(line_no, "malformed line (expected 'v' or 'e')");
      }
    }
    return DatasetGraph(std::move(vertices), edges);
  }

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  int index_of(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown vertex '" + id + "'");
    return it->second;
  }

  const std::string& id_of(int index) const { return ids_.at(index); }
  Color color(int index) const { return colors_.at(index); }
  Color color(const std::string& id) const { return colors_[index_of(id)]; }
  const std::vector<int>& neighbors(int index) const { return adj_.at(index); }

  // Unweighted single-source shortest-path distances; -1 marks unreachable.
  std::vector<int> bfs_from(int source) const {
    std::vector<int> dist(ids_.size(), -1);
    std::queue<int> frontier;
    dist.at(source) = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const int x = frontier.front();
      frontier.pop();
      for (int y : adj_[x])
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          frontier.push(y);
        }
    }
    return dist;
  }

  // Emits the graph file format; parsing the result reproduces the graph.
  std::string to_text() const {
    std::string out;
    for (int i = 0; i < size(); ++i)
      out += "v " + ids_[i] + " " + to_string(colors_[i]) + "\n";
    for (const Edge& e : edges_) out += "e " + e.u + " " + e.v + "\n";
    return out;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<Color> colors_;
  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::map<std::string, int> index_;
};

inline DatasetGraph load_graph(std::string_view text) { return DatasetGraph::from_text(text); }

// Shortest-path length, or nullopt when u and v lie in different components.
inline std::optional<int> distance(const DatasetGraph& g, const std::string& u,
                                   const std::string& v) {
  const int iu = g.index_of(u), iv = g.index_of(v);
  const int d = g.bfs_from(iu)[iv];
  if (d < 0) return std::nullopt;
  return d;
}

struct NearestSource {
  int distance = 0;
  std::string source;
  friend bool operator==(const NearestSource&, const NearestSource&) = default;
};

// Multi-source shortest distances. For every reachable vertex, reports the
// minimum distance to any source together with one achieving source; among
// equally close sources the lexicographically smallest id wins.
inline std::map<std::string, NearestSource> distances_from(const DatasetGraph& g,
                                                           const std::vector<std::string>& sources) {
  if (sources.empty()) throw std::invalid_argument("distances_from: empty source set");
  std::vector<int> dist(g.size(), -1);
  std::queue<int> frontier;
  for (const auto& s : sources) {
    const int i = g.index_of(s);
    if (dist[i] == 0) continue;
    dist[i] = 0;
    frontier.push(i);
  }
  int max_dist = 0;
  while (!frontier.empty()) {
    const int x = frontier.front();
    frontier.pop();
    for (int y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        max_dist = std::max(max_dist, dist[y]);
        frontier.push(y);
      }
  }
  // Resolve achieving sources layer by layer: a vertex at distance k inherits
  // the smallest source among its neighbors at distance k-1.
  std::vector<std::vector<int>> layers(max_dist + 1);
  for (int i = 0; i < g.size(); ++i)
    if (dist[i] >= 0) layers[dist[i]].push_back(i);
  std::vector<const std::string*> src(g.size(), nullptr);
  for (int i : layers[0]) src[i] = &g.id_of(i);
  for (int k = 1; k <= max_dist; ++k)
    for (int i : layers[k]) {
      const std::string* best = nullptr;
      for (int j : g.neighbors(i))
        if (dist[j] == k - 1 && (best == nullptr || *src[j] < *best)) best = src[j];
      src[i] = best;
    }
  std::map<std::string, NearestSource> out;
  for (int i = 0; i < g.size(); ++i)
    if (dist[i] >= 0) out.emplace(g.id_of(i), NearestSource{dist[i], *src[i]});
  return out;
}

// Edges whose endpoints disagree on the true value, their endpoints, and the
// endpoints split by color. All sets are empty when the coloring is constant.
struct BoundaryStructure {
  std::vector<Edge> boundary_edges;
  std::vector<std::string> boundary_vertices;
  std::vector<std::string> blue_vertices;
  std::vector<std::string> red_vertices;

  const std::vector<std::string>& of_color(Color c) const {
    return c == Color::kBlue ? blue_vertices : red_vertices;
  }
};

inline BoundaryStructure boundary(const DatasetGraph& g) {
  BoundaryStructure out;
  std::set<std::string> verts;
  for (const Edge& e : g.edges())
    if (g.color(e.u) != g.color(e.v)) {
      out.boundary_edges.push_back(e);
      verts.insert(e.u);
      verts.insert(e.v);
    }
  for (const auto& v : verts) {
    out.boundary_vertices.push_back(v);
    (g.color(v) == Color::kBlue ? out.blue_vertices : out.red_vertices).push_back(v);
  }
  return out;
}

// A vertex set that contains at least one endpoint of every boundary edge.
struct HittingSet {
  std::vector<std::string> members;  // sorted, unique
};

struct HittingSetReport {
  bool ok = false;
  std::vector<Edge> uncovered;  // boundary edges with no endpoint in the set
};

inline HittingSetReport validate_hitting_set(const DatasetGraph& g,
                                             const std::vector<std::string>& members) {
  std::set<std::string> in_set;
  for (const auto& m : members) {
    g.index_of(m);  // rejects members absent from the graph
    in_set.insert(m);
  }
  HittingSetReport report;
  for (const Edge& e : boundary(g).boundary_edges)
    if (!in_set.count(e.u) && !in_set.count(e.v)) report.uncovered.push_back(e);
  report.ok = report.uncovered.empty();
  return report;
}

enum class HittingStrategy { kAllBoundary, kGreedyCover };

// kAllBoundary returns every boundary vertex. kGreedyCover repeatedly picks
// the vertex covering the most uncovered boundary edges (ties: smallest id).
inline HittingSet default_hitting_set(const DatasetGraph& g, HittingStrategy strategy) {
  const BoundaryStructure bs = boundary(g);
  if (strategy == HittingStrategy::kAllBoundary) return HittingSet{bs.boundary_vertices};
  std::vector<std::pair<int, int>> uncovered;
  uncovered.reserve(bs.boundary_edges.size());
  for (const Edge& e : bs.boundary_edges)
    uncovered.emplace_back(g.index_of(e.u), g.index_of(e.v));
  std::set<std::string> chosen;
  while (!uncovered.empty()) {
    std::vector<int> covers(g.size(), 0);
    for (const auto& [a, b] : uncovered) {
      ++covers[a];
      ++covers[b];
    }
    int best = 0;
    for (int i = 1; i < g.size(); ++i)
      if (covers[i] > covers[best]) best = i;  // ascending scan keeps smallest id on ties
    chosen.insert(g.id_of(best));
    std::erase_if(uncovered,
                  [best](const auto& e) { return e.first == best || e.second == best; });
  }
  HittingSet out;
  out.members.assign(chosen.begin(), chosen.end());
  return out;
}

}  // namespace dpcolor
