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

// Verification oracles that are independent of the synthesis path: pairwise
// and per-edge privacy checks, dominance comparison, maximality probing,
// randomized search over feasible extensions, and an empirical sampling
// audit. All are deterministic given their seeds.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpcolor/bounds.hpp"
#include "dpcolor/graph.hpp"
#include "dpcolor/synth.hpp"

namespace dpcolor {

namespace detail {

inline void require_total(const DatasetGraph& g, const Mechanism& m) {
  for (const auto& id : g.ids())
    if (!m.entries.count(id))
      throw std::invalid_argument("mechanism is not total: missing vertex '" + id + "'");
}

}  // namespace detail

// Checks the distance-d bounds for every unordered vertex pair, with j fixed
// to blue in both directions; this is sufficient for the red and lower-bound
// conditions as well. The exhaustive mode checks those redundant conditions
// directly. Returns the first violation in sorted pair order.
template <BoundPairLike P>
std::optional<FeasibilityViolation> check_pairwise_private(const DatasetGraph& g,
                                                           const Mechanism& m, const P& pair,
                                                           double tol = kDefaultTol,
                                                           bool exhaustive = false) {
  detail::require_total(g, m);
  std::vector<double> pb(g.size());
  for (int i = 0; i < g.size(); ++i) pb[i] = m.prob_blue(g.id_of(i));
  for (int i = 0; i < g.size(); ++i) {
    const std::vector<int> dist = g.bfs_from(i);
    for (int j = i + 1; j < g.size(); ++j) {
      const int d = dist[j];
      if (d < 0) continue;
      const double a = pb[i], b = pb[j];
      const double ba = upper_power(pair, d, a);
      if (b > ba + tol) return FeasibilityViolation{g.id_of(j), g.id_of(i), d, b, ba};
      const double ab = upper_power(pair, d, b);
      if (a > ab + tol) return FeasibilityViolation{g.id_of(i), g.id_of(j), d, a, ab};
      if (exhaustive) {
        const double rba = upper_power(pair, d, 1.0 - a);
        if (1.0 - b > rba + tol)
          return FeasibilityViolation{g.id_of(j), g.id_of(i), d, 1.0 - b, rba};
        const double rab = upper_power(pair, d, 1.0 - b);
        if (1.0 - a > rab + tol)
          return FeasibilityViolation{g.id_of(i), g.id_of(j), d, 1.0 - a, rab};
        if (b < lower_power(pair, d, a) - tol)
          return FeasibilityViolation{g.id_of(j), g.id_of(i), d, b, lower_power(pair, d, a)};
        if (a < lower_power(pair, d, b) - tol)
          return FeasibilityViolation{g.id_of(i), g.id_of(j), d, a, lower_power(pair, d, b)};
      }
    }
  }
  return std::nullopt;
}

// One of the four per-edge inequalities Pr[M(x)=c] <= e^eps Pr[M(y)=c] + delta.
struct EdgeCheckViolation {
  Edge edge;
  Color color = Color::kBlue;
  std::string from, to;  // the inequality bounds `from` by `to`
  double lhs = 0.0;
  double rhs = 0.0;

  std::string message() const {
    char buf[200];
    std::snprintf(buf, sizeof buf, "edge (%s, %s): Pr[M(%s)=%s] = %.12g exceeds bound %.12g",
                  edge.u.c_str(), edge.v.c_str(), from.c_str(), to_string(color), lhs, rhs);
    return buf;
  }
};

// Checks the raw definition on every edge only: for both directions and both
// colors, Pr[M(x)=c] <= e^eps Pr[M(y)=c] + delta. Agrees with the pairwise
// check on connected graphs.
inline std::optional<EdgeCheckViolation> check_edge_private(const DatasetGraph& g,
                                                            const Mechanism& m,
                                                            const DpParams& params,
                                                            double tol = kDefaultTol) {
  detail::require_total(g, m);
  for (const Edge& e : g.edges()) {
    const double bu = m.prob_blue(e.u), bv = m.prob_blue(e.v);
    const struct {
      const std::string *from, *to;
      double lhs, rhs_base;
      Color color;
    } checks[] = {
        {&e.u, &e.v, bu, bv, Color::kBlue},
        {&e.v, &e.u, bv, bu, Color::kBlue},
        {&e.u, &e.v, 1.0 - bu, 1.0 - bv, Color::kRed},
        {&e.v, &e.u, 1.0 - bv, 1.0 - bu, Color::kRed},
    };
    for (const auto& c : checks) {
      const double rhs = params.lambda * c.rhs_base + params.delta;
      if (c.lhs > rhs + tol) return EdgeCheckViolation{e, c.color, *c.from, *c.to, c.lhs, rhs};
    }
  }
  return std::nullopt;
}

enum class CompareVerdict { kEqual, kDominates, kDominatedBy, kIncomparable };

inline const char* to_string(CompareVerdict v) {
  switch (v) {
    case CompareVerdict::kEqual: return "equal";
    case CompareVerdict::kDominates: return "dominates";
    case CompareVerdict::kDominatedBy: return "dominated-by";
    case CompareVerdict::kIncomparable: return "incomparable";
  }
  return "?";
}

struct VertexAdvantage {
  std::string vertex;
  int favored = 0;  // +1: first mechanism strictly higher on the true value, -1: second
};

struct ComparisonResult {
  CompareVerdict verdict = CompareVerdict::kEqual;
  std::vector<VertexAdvantage> witnesses;  // up to one per direction
};

// Pointwise comparison of Pr[M(v)=T(v)]; differences within tol count as
// ties, so dominance here is strict somewhere and never worse elsewhere.
inline ComparisonResult compare_mechanisms(const DatasetGraph& g, const Mechanism& a,
                                           const Mechanism& b, double tol = kDefaultTol) {
  detail::require_total(g, a);
  detail::require_total(g, b);
  std::optional<VertexAdvantage> first_a, first_b;
  for (const auto& id : g.ids()) {
    const double pa = a.prob_true(g, id), pb = b.prob_true(g, id);
    if (pa > pb + tol && !first_a) first_a = VertexAdvantage{id, +1};
    if (pb > pa + tol && !first_b) first_b = VertexAdvantage{id, -1};
  }
  ComparisonResult out;
  if (first_a && first_b) {
    out.verdict = CompareVerdict::kIncomparable;
    out.witnesses = {*first_a, *first_b};
  } else if (first_a) {
    out.verdict = CompareVerdict::kDominates;
    out.witnesses = {*first_a};
  } else if (first_b) {
    out.verdict = CompareVerdict::kDominatedBy;
    out.witnesses = {*first_b};
  }
  return out;
}

// Raises Pr[M(w)=T(w)] by eta at each vertex outside the given assignment and
// checks that the perturbed mechanism stops being private (only pairs
// involving w can break, so the scan is restricted to them). Returns the
// first vertex whose bump stays feasible -- a witness against maximality --
// or nullopt when every bump is rejected. Vertices already within eta of
// probability 1 cannot be raised and count as maximal.
template <BoundPairLike P>
std::optional<std::string> probe_maximality(const DatasetGraph& g, const PartialMechanism& pm,
                                            const P& pair, const Mechanism& m, double eta = 1e-6,
                                            double tol = kDefaultTol) {
  detail::require_total(g, m);
  std::vector<double> pb(g.size());
  for (int i = 0; i < g.size(); ++i) pb[i] = m.prob_blue(g.id_of(i));
  for (int w = 0; w < g.size(); ++w) {
    const std::string& id = g.id_of(w);
    if (pm.assignment.count(id)) continue;
    const bool is_blue = g.color(w) == Color::kBlue;
    const double bumped_true = (is_blue ? pb[w] : 1.0 - pb[w]) + eta;
    if (bumped_true > 1.0) continue;
    const double bumped_blue = is_blue ? bumped_true : 1.0 - bumped_true;
    const std::vector<int> dist = g.bfs_from(w);
    bool violated = false;
    for (int v = 0; v < g.size() && !violated; ++v) {
      const int d = dist[v];
      if (v == w || d < 0) continue;
      violated = bumped_blue > upper_power(pair, d, pb[v]) + tol ||
                 pb[v] > upper_power(pair, d, bumped_blue) + tol;
    }
    if (!violated) return id;
  }
  return std::nullopt;
}

// Draws `trials` random feasible extensions of pm by per-vertex rejection
// sampling (uniform proposals on [0,1], accepted when consistent with every
// value assigned so far; up to 1000 proposals per vertex before the whole
// draw restarts). Returns the sample maximizing the summed probability of
// the true values, and reports every sample through on_sample.
template <BoundPairLike P>
std::optional<Mechanism> random_feasible_search(
    const DatasetGraph& g, const PartialMechanism& pm, const P& pair, long trials,
    std::uint64_t seed, double tol = kDefaultTol,
    const std::function<void(const Mechanism&)>& on_sample = {}) {
  if (trials <= 0) return std::nullopt;
  std::vector<std::vector<int>> dist;
  dist.reserve(g.size());
  for (int i = 0; i < g.size(); ++i) dist.push_back(g.bfs_from(i));
  std::vector<int> free_vertices;
  std::vector<double> given(g.size(), -1.0);
  for (int i = 0; i < g.size(); ++i) {
    const auto it = pm.assignment.find(g.id_of(i));
    if (it == pm.assignment.end())
      free_vertices.push_back(i);
    else
      given[i] = it->second.value();
  }
  std::mt19937_64 rng(seed);
  std::optional<Mechanism> best;
  double best_sum = -1.0;
  std::vector<double> values(g.size());
  std::vector<int> assigned;
  for (long trial = 0; trial < trials; ++trial) {
    bool complete = false;
    for (int restart = 0; restart < 1000 && !complete; ++restart) {
      values = given;
      assigned.clear();
      for (int i = 0; i < g.size(); ++i)
        if (given[i] >= 0.0) assigned.push_back(i);
      complete = true;
      for (int w : free_vertices) {
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
          const double x = detail::uniform01(rng);
          accepted = true;
          for (int v : assigned) {
            const int d = dist[w][v];
            if (d < 0) continue;
            if (x > upper_power(pair, d, values[v]) + tol ||
                values[v] > upper_power(pair, d, x) + tol) {
              accepted = false;
              break;
            }
          }
          if (accepted) values[w] = x;
        }
        if (!accepted) {
          complete = false;
          break;
        }
        assigned.push_back(w);
      }
    }
    if (!complete)
      throw std::runtime_error("random_feasible_search: rejection sampling failed to complete a draw");
    std::map<std::string, double> by_id;
    for (int i = 0; i < g.size(); ++i) by_id.emplace(g.id_of(i), values[i]);
    Mechanism sample = make_mechanism(g, by_id, tol);
    double sum = 0.0;
    for (const auto& id : g.ids()) sum += sample.prob_true(g, id);
    if (on_sample) on_sample(sample);
    if (sum > best_sum) {
      best_sum = sum;
      best = std::move(sample);
    }
  }
  return best;
}

// Empirical smoke test of the per-edge definition. Each vertex draws
// `samples` outputs from its own PRNG stream (derived from the seed and the
// vertex id, so results do not depend on evaluation order), and every edge
// inequality is checked against the empirical rates with a three-sigma
// binomial slack. Margins are lhs - (bound + slack); positive means fail.
struct AuditReport {
  long samples = 0;
  std::uint64_t seed = 0;
  bool pass = true;
  std::optional<Edge> worst_edge;
  std::string worst_check;
  double worst_margin = -std::numeric_limits<double>::infinity();

  std::string summary() const {
    char buf[256];
    if (!worst_edge) {
      std::snprintf(buf, sizeof buf, "audit: samples=%ld seed=%llu pass=%s (no edges)", samples,
                    static_cast<unsigned long long>(seed), pass ? "true" : "false");
      return buf;
    }
    std::snprintf(buf, sizeof buf,
                  "audit: samples=%ld seed=%llu pass=%s worst_edge=(%s,%s) worst_check=%s "
                  "worst_margin=%.12g",
                  samples, static_cast<unsigned long long>(seed), pass ? "true" : "false",
                  worst_edge->u.c_str(), worst_edge->v.c_str(), worst_check.c_str(), worst_margin);
    return buf;
  }
};

inline AuditReport audit(const DatasetGraph& g, const Mechanism& m, const DpParams& params,
                         long samples, std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("audit requires samples >= 100");
  detail::require_total(g, m);
  AuditReport report;
  report.samples = samples;
  report.seed = seed;
  std::vector<double> rate(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double pb = m.prob_blue(g.id_of(i));
    std::mt19937_64 rng(detail::fnv1a64(g.id_of(i)) ^ (seed * 0x9e3779b97f4a7c15ULL));
    long count = 0;
    for (long s = 0; s < samples; ++s)
      if (detail::uniform01(rng) < pb) ++count;
    rate[i] = static_cast<double>(count) / static_cast<double>(samples);
  }
  const double n = static_cast<double>(samples);
  const auto sigma = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  for (const Edge& e : g.edges()) {
    const int iu = g.index_of(e.u), iv = g.index_of(e.v);
    const struct {
      double lhs, rhs;
      const char* name;
    } checks[] = {
        {rate[iu], rate[iv], "blue u|v"},
        {rate[iv], rate[iu], "blue v|u"},
        {1.0 - rate[iu], 1.0 - rate[iv], "red u|v"},
        {1.0 - rate[iv], 1.0 - rate[iu], "red v|u"},
    };
    for (const auto& c : checks) {
      const double slack = 3.0 * (sigma(c.lhs) + params.lambda * sigma(c.rhs));
      const double margin = c.lhs - (params.lambda * c.rhs + params.delta + slack);
      if (margin > report.worst_margin) {
        report.worst_margin = margin;
        report.worst_edge = e;
        report.worst_check = c.name;
      }
    }
  }
  report.pass = report.worst_margin <= 0.0 || !report.worst_edge;
  return report;
}

}  // namespace dpcolor
