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

// Synthesis of the optimal private extension of a partial mechanism given on
// a boundary-hitting set. Feasibility holds iff every pair u,v of hitting-set
// members at distance d satisfies a <= U^d(b) and b <= U^d(a) for the blue
// probabilities; the extension then assigns every free vertex the largest
// probability of its true value that all members jointly allow.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpcolor/bounds.hpp"
#include "dpcolor/graph.hpp"

namespace dpcolor {

// Probability of blue for each member of a boundary-hitting set. The key set
// is the hitting set; extra non-boundary members are allowed and constrain
// the extension like any other member.
struct PartialMechanism {
  std::map<std::string, Probability> assignment;

  std::vector<std::string> members() const {
    std::vector<std::string> out;
    out.reserve(assignment.size());
    for (const auto& [id, value] : assignment) out.push_back(id);
    return out;
  }
};

// Parses the partial-mechanism file format: '#' comment lines and
// "<vertex-id> <prob_blue>" lines.
inline PartialMechanism partial_from_text(std::string_view text, double tol = kDefaultTol) {
  PartialMechanism pm;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = detail::tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected '<vertex-id> <prob_blue>'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(tokens[1], &used);
      if (used != tokens[1].size()) throw std::invalid_argument(tokens[1]);
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed probability '" + tokens[1] + "'");
    }
    try {
      if (!pm.assignment.emplace(tokens[0], Probability(value, tol)).second)
        throw ParseError(line_no, "duplicate vertex '" + tokens[0] + "'");
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return pm;
}

enum class SourceKind : std::uint8_t { kGiven, kBoundBy, kUnconstrained };

// Which constraint fixed a vertex's probability: its own given value, the
// hitting-set member whose bound was binding, or nothing at all (vertex in a
// component with no hitting-set member).
struct Provenance {
  SourceKind kind = SourceKind::kGiven;
  std::string source;  // binding member id when kind == kBoundBy

  std::string label() const {
    switch (kind) {
      case SourceKind::kGiven: return "given";
      case SourceKind::kUnconstrained: return "unconstrained";
      case SourceKind::kBoundBy: return source;
    }
    return "?";
  }
};

// A full mechanism: probability of blue for every vertex plus provenance.
struct Mechanism {
  struct Entry {
    double prob_blue = 0.0;
    Provenance provenance;
  };
  std::map<std::string, Entry> entries;

  double prob_blue(const std::string& id) const {
    const auto it = entries.find(id);
    if (it == entries.end()) throw std::invalid_argument("mechanism has no vertex '" + id + "'");
    return it->second.prob_blue;
  }

  double prob_true(const DatasetGraph& g, const std::string& id) const {
    const double pb = prob_blue(id);
    return g.color(id) == Color::kBlue ? pb : 1.0 - pb;
  }
};

// Builds a mechanism from explicit blue probabilities; every entry is marked
// as given. The assignment must cover the whole graph.
inline Mechanism make_mechanism(const DatasetGraph& g, const std::map<std::string, double>& prob_blue,
                                double tol = kDefaultTol) {
  Mechanism m;
  for (const auto& [id, value] : prob_blue) {
    g.index_of(id);
    m.entries.emplace(id, Mechanism::Entry{Probability(value, tol).value(), {SourceKind::kGiven, ""}});
  }
  for (const auto& id : g.ids())
    if (!m.entries.count(id)) throw std::invalid_argument("mechanism misses vertex '" + id + "'");
  return m;
}

struct FeasibilityViolation {
  std::string u, v;  // the value at u exceeds the bound induced by v
  long d = 0;
  double lhs = 0.0;
  double bound = 0.0;

  std::string message() const {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "pair (%s, %s) at distance %ld: value %.12g exceeds bound %.12g",
                  u.c_str(), v.c_str(), d, lhs, bound);
    return buf;
  }
};

struct InfeasibleError : std::runtime_error {
  FeasibilityViolation violation;
  explicit InfeasibleError(FeasibilityViolation v)
      : std::runtime_error("No (L,U)-private extension exists. " + v.message()),
        violation(std::move(v)) {}
};

namespace detail {

struct MemberTable {
  std::vector<std::string> ids;        // sorted member ids
  std::vector<int> index;              // graph index per member
  std::vector<double> prob_blue;       // given value per member
  std::vector<std::vector<int>> dist;  // BFS distances per member
};

inline MemberTable member_table(const DatasetGraph& g, const PartialMechanism& pm) {
  MemberTable t;
  for (const auto& [id, value] : pm.assignment) {
    t.ids.push_back(id);
    t.index.push_back(g.index_of(id));
    t.prob_blue.push_back(value.value());
  }
  t.dist.reserve(t.index.size());
  for (int idx : t.index) t.dist.push_back(g.bfs_from(idx));
  return t;
}

// Runs the pairwise feasibility scan over hitting-set members in sorted-id
// order, reporting violations through `emit`; stops early once `emit` returns
// false. Unreachable pairs impose no constraint.
template <BoundPairLike P, typename Emit>
void scan_member_pairs(const MemberTable& t, const P& pair, double tol, Emit&& emit) {
  const std::size_t n = t.ids.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const int d = t.dist[i][t.index[j]];
      if (d < 0) continue;
      const double a = t.prob_blue[i], b = t.prob_blue[j];
      const double bound_ab = upper_power(pair, d, b);
      if (a > bound_ab + tol &&
          !emit(FeasibilityViolation{t.ids[i], t.ids[j], d, a, bound_ab}))
        return;
      const double bound_ba = upper_power(pair, d, a);
      if (b > bound_ba + tol &&
          !emit(FeasibilityViolation{t.ids[j], t.ids[i], d, b, bound_ba}))
        return;
    }
}

template <BoundPairLike P>
std::optional<FeasibilityViolation> first_member_violation(const MemberTable& t, const P& pair,
                                                           double tol) {
  std::optional<FeasibilityViolation> out;
  scan_member_pairs(t, pair, tol, [&](FeasibilityViolation v) {
    out = std::move(v);
    return false;
  });
  return out;
}

}  // namespace detail

// Feasibility of extending pm to a private mechanism: every unordered member
// pair must satisfy the distance-d upper bounds in both directions (checked
// for blue; the red and lower-bound conditions follow). Returns the first
// violation in sorted pair order, or nullopt.
template <BoundPairLike P>
std::optional<FeasibilityViolation> check_extensible(const DatasetGraph& g,
                                                     const PartialMechanism& pm, const P& pair,
                                                     double tol = kDefaultTol) {
  return detail::first_member_violation(detail::member_table(g, pm), pair, tol);
}

// All violating member pairs, for diagnostics.
template <BoundPairLike P>
std::vector<FeasibilityViolation> extension_violations(const DatasetGraph& g,
                                                       const PartialMechanism& pm, const P& pair,
                                                       double tol = kDefaultTol) {
  std::vector<FeasibilityViolation> out;
  detail::scan_member_pairs(detail::member_table(g, pm), pair, tol, [&](FeasibilityViolation v) {
    out.push_back(std::move(v));
    return true;
  });
  return out;
}

// The optimal private extension of pm. Members keep their given values; every
// free vertex w receives
//   Pr[M(w) = T(w)] = min over members u of U^{dist(w,u)}(Pr[M'(u) = T(w)])
// with provenance naming an achieving member (ties: smallest id). Vertices in
// components without a member are unconstrained and get probability 1 of
// their true value. Throws InfeasibleError when no extension exists.
template <BoundPairLike P>
Mechanism extend(const DatasetGraph& g, const PartialMechanism& pm, const P& pair,
                 double tol = kDefaultTol) {
  const detail::MemberTable t = detail::member_table(g, pm);
  if (auto violation = detail::first_member_violation(t, pair, tol))
    throw InfeasibleError(std::move(*violation));
  Mechanism m;
  for (int w = 0; w < g.size(); ++w) {
    const std::string& id = g.id_of(w);
    if (const auto it = pm.assignment.find(id); it != pm.assignment.end()) {
      m.entries.emplace(id, Mechanism::Entry{it->second.value(), {SourceKind::kGiven, ""}});
      continue;
    }
    const bool is_blue = g.color(w) == Color::kBlue;
    double best = std::numeric_limits<double>::infinity();
    int best_member = -1;
    for (std::size_t i = 0; i < t.ids.size(); ++i) {
      const int d = t.dist[i][w];
      if (d < 0) continue;
      const double toward_true = is_blue ? t.prob_blue[i] : 1.0 - t.prob_blue[i];
      const double bound = upper_power(pair, d, toward_true);
      if (bound < best) {
        best = bound;
        best_member = static_cast<int>(i);
      }
    }
    Mechanism::Entry entry;
    if (best_member < 0) {
      entry.prob_blue = is_blue ? 1.0 : 0.0;
      entry.provenance = {SourceKind::kUnconstrained, ""};
    } else {
      const double prob_true = std::clamp(best, 0.0, 1.0);
      entry.prob_blue = is_blue ? prob_true : 1.0 - prob_true;
      entry.provenance = {SourceKind::kBoundBy, t.ids[best_member]};
    }
    m.entries.emplace(id, std::move(entry));
  }
  return m;
}

struct EvaluateResult {
  double prob_true = 0.0;
  double prob_blue = 0.0;
  Provenance provenance;
};

// Evaluates the optimal extension at a single vertex without materializing
// the whole mechanism. The search runs breadth-first from the vertex and
// stops as soon as every hitting-set member has been reached, so only the
// ball around the vertex is visited. A hitting-set member returns its given
// value, flagged as such.
template <BoundPairLike P>
EvaluateResult evaluate_at(const DatasetGraph& g, const PartialMechanism& pm, const P& pair,
                           const std::string& vertex, double tol = kDefaultTol) {
  const int w = g.index_of(vertex);
  const detail::MemberTable t = detail::member_table(g, pm);
  if (auto violation = detail::first_member_violation(t, pair, tol))
    throw InfeasibleError(std::move(*violation));
  if (const auto it = pm.assignment.find(vertex); it != pm.assignment.end()) {
    const double pb = it->second.value();
    const double pt = g.color(w) == Color::kBlue ? pb : 1.0 - pb;
    return {pt, pb, {SourceKind::kGiven, ""}};
  }
  std::vector<int> member_of(g.size(), -1);
  for (std::size_t i = 0; i < t.index.size(); ++i) member_of[t.index[i]] = static_cast<int>(i);
  std::size_t remaining = t.index.size();
  std::vector<int> dist(g.size(), -1);
  std::queue<int> frontier;
  dist[w] = 0;
  frontier.push(w);
  const bool is_blue = g.color(w) == Color::kBlue;
  double best = std::numeric_limits<double>::infinity();
  int best_member = -1;
  while (!frontier.empty() && remaining > 0) {
    const int x = frontier.front();
    frontier.pop();
    if (const int i = member_of[x]; i >= 0) {
      --remaining;
      const double toward_true = is_blue ? t.prob_blue[i] : 1.0 - t.prob_blue[i];
      const double bound = upper_power(pair, dist[x], toward_true);
      if (bound < best || (bound == best && t.ids[i] < t.ids[best_member])) {
        best = bound;
        best_member = i;
      }
    }
    for (int y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
  }
  if (best_member < 0) return {1.0, is_blue ? 1.0 : 0.0, {SourceKind::kUnconstrained, ""}};
  const double prob_true = std::clamp(best, 0.0, 1.0);
  return {prob_true, is_blue ? prob_true : 1.0 - prob_true,
          {SourceKind::kBoundBy, t.ids[best_member]}};
}

// Extension for a boundary-homogeneous assignment: every boundary vertex of
// color c gets probability alpha_c of its true value, and every free vertex
// is bound by its nearest boundary vertex of its own color. Must agree with
// extend() run on the same assignment over the full boundary.
inline Mechanism extend_homogeneous(const DatasetGraph& g, double alpha_blue, double alpha_red,
                                    const DpParams& params, double tol = kDefaultTol) {
  const Probability blue_value(alpha_blue, tol);
  const Probability red_value(alpha_red, tol);
  const BoundaryStructure bs = boundary(g);
  PartialMechanism pm;
  for (const auto& id : bs.boundary_vertices) {
    const bool is_blue = g.color(id) == Color::kBlue;
    pm.assignment.emplace(
        id, Probability(is_blue ? blue_value.value() : 1.0 - red_value.value(), tol));
  }
  const DpBoundPair pair(params);
  if (auto violation = check_extensible(g, pm, pair, tol))
    throw InfeasibleError(std::move(*violation));
  std::map<std::string, NearestSource> nearest_blue, nearest_red;
  if (!bs.blue_vertices.empty()) nearest_blue = distances_from(g, bs.blue_vertices);
  if (!bs.red_vertices.empty()) nearest_red = distances_from(g, bs.red_vertices);
  Mechanism m;
  for (int w = 0; w < g.size(); ++w) {
    const std::string& id = g.id_of(w);
    const bool is_blue = g.color(w) == Color::kBlue;
    if (pm.assignment.count(id)) {
      m.entries.emplace(id, Mechanism::Entry{pm.assignment.at(id).value(), {SourceKind::kGiven, ""}});
      continue;
    }
    const auto& nearest = is_blue ? nearest_blue : nearest_red;
    const auto it = nearest.find(id);
    Mechanism::Entry entry;
    if (it == nearest.end()) {
      entry.prob_blue = is_blue ? 1.0 : 0.0;
      entry.provenance = {SourceKind::kUnconstrained, ""};
    } else {
      const double alpha = is_blue ? blue_value.value() : red_value.value();
      const double prob_true = induced_bound(it->second.distance, alpha, params).value;
      entry.prob_blue = is_blue ? prob_true : 1.0 - prob_true;
      entry.provenance = {SourceKind::kBoundBy, it->second.source};
    }
    m.entries.emplace(id, std::move(entry));
  }
  return m;
}

// Probability of the true value at distance d from the boundary under the
// maximal balanced assignment (alpha_blue = alpha_red). Closed form:
//   1 - (e^eps - 1 - delta (e^{eps(d+1)} + e^{d eps} - 2))
//       / (e^{d eps} (e^eps + 1)(e^eps - 1)),
// evaluated in an overflow-safe rearrangement and capped at 1. d = 0 yields
// the boundary value itself. Undefined at epsilon = 0.
inline double balanced_value(long d, const DpParams& params) {
  if (d < 0) throw std::invalid_argument("balanced_value requires d >= 0");
  if (params.epsilon == 0.0)
    throw std::invalid_argument("balanced_value is undefined at epsilon = 0");
  const double lam = params.lambda;
  const double shrink = std::pow(lam, -static_cast<double>(d));
  const double value = 1.0 - shrink / (lam + 1.0) +
                       params.delta * (lam + 1.0 - 2.0 * shrink) / ((lam + 1.0) * (lam - 1.0));
  return std::clamp(value, 0.0, 1.0);
}

// --- mechanism CSV -------------------------------------------------------
// Schema: "vertex,true_color,prob_blue,prob_true,source", rows sorted by
// vertex id, probabilities with 12 significant digits.

inline std::string format_probability(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string mechanism_to_csv(const DatasetGraph& g, const Mechanism& m) {
  std::string out = "vertex,true_color,prob_blue,prob_true,source\n";
  for (const auto& [id, entry] : m.entries) {
    const Color c = g.color(id);
    const double pt = c == Color::kBlue ? entry.prob_blue : 1.0 - entry.prob_blue;
    out += id;
    out += ',';
    out += to_string(c);
    out += ',';
    out += format_probability(entry.prob_blue);
    out += ',';
    out += format_probability(pt);
    out += ',';
    out += entry.provenance.label();
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace detail

// Reads a mechanism CSV. The header must name at least the "vertex" and
// "prob_blue" columns (any order); "true_color" is cross-checked against the
// graph when present and other columns are ignored. The rows must cover the
// graph exactly.
inline Mechanism mechanism_from_csv(const DatasetGraph& g, std::string_view csv,
                                    double tol = kDefaultTol) {
  std::istringstream stream{std::string(csv)};
  std::string line;
  if (!std::getline(stream, line)) throw ParseError(1, "empty mechanism CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv(line);
  int vertex_col = -1, prob_col = -1, color_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "vertex") vertex_col = static_cast<int>(i);
    if (header[i] == "prob_blue") prob_col = static_cast<int>(i);
    if (header[i] == "true_color") color_col = static_cast<int>(i);
  }
  if (vertex_col < 0 || prob_col < 0)
    throw ParseError(1, "header must name 'vertex' and 'prob_blue' columns");
  std::map<std::string, double> values;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != header.size()) throw ParseError(line_no, "wrong number of fields");
    const std::string& id = fields[vertex_col];
    if (!g.contains(id)) throw ParseError(line_no, "unknown vertex '" + id + "'");
    double value = 0.0;
    try {
      value = Probability(std::stod(fields[prob_col]), tol).value();
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed probability '" + fields[prob_col] + "'");
    }
    if (color_col >= 0 && fields[color_col] != to_string(g.color(id)))
      throw ParseError(line_no, "true_color mismatch for vertex '" + id + "'");
    if (!values.emplace(id, value).second)
      throw ParseError(line_no, "duplicate vertex '" + id + "'");
  }
  if (static_cast<int>(values.size()) != g.size())
    for (const auto& id : g.ids())
      if (!values.count(id)) throw ParseError(line_no, "missing vertex '" + id + "'");
  return make_mechanism(g, values, tol);
}

}  // namespace dpcolor
