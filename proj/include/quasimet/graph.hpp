#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quasimet/almost_iso.hpp"
#include "quasimet/geom2d.hpp"
#include "quasimet/parallel.hpp"
#include "quasimet/quasimetric.hpp"

namespace quasimet {

template <class S>
struct Edge {
    int from = 0;
    int to = 0;
    S weight = scalar_traits<S>::zero();
};

// Finite carrier for induced length quasi-metrics: strictly positive
// asymmetric edge weights, no self-loops. Coordinates are optional and only
// used when the graph discretizes a planar chart.
template <class S>
struct DirectedWeightedGraph {
    int n = 0;
    std::vector<Edge<S>> edges;
    std::optional<std::vector<Vec2>> coords;

    void check() const {
        if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
        for (const auto& e : edges) {
            if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
                throw std::out_of_range("edge endpoint out of range");
            }
            if (e.from == e.to) throw std::invalid_argument("self-loops are not allowed");
            if (!scalar_traits<S>::finite(e.weight) || !(e.weight > scalar_traits<S>::zero())) {
                throw std::invalid_argument("edge weights must be positive and finite");
            }
        }
        if (coords && static_cast<int>(coords->size()) != n) {
            throw std::invalid_argument("coordinate count must match vertex count");
        }
    }
};

// All-pairs asymmetric shortest paths. Unreachable pairs stay empty; no
// sentinel values. parent(i, j) is the predecessor of j on the canonical
// minimizing chain from i, chosen as the smallest tight predecessor index
// once distances are final, so reconstruction does not depend on visit order.
template <class S>
struct ShortestPathTable {
    int n = 0;
    std::vector<std::optional<S>> dist;  // row-major n*n
    std::vector<int> parent;             // row-major n*n, -1 when absent

    const std::optional<S>& distance(int from, int to) const { return dist[from * n + to]; }

    bool all_finite() const {
        for (const auto& d : dist) {
            if (!d) return false;
        }
        return true;
    }

    std::optional<std::pair<int, int>> first_unreachable() const {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (!dist[i * n + j]) return std::make_pair(i, j);
            }
        }
        return std::nullopt;
    }

    // Canonical minimizing chain from `from` to `to`, or nullopt when
    // unreachable.
    std::optional<std::vector<int>> chain(int from, int to) const {
        if (!dist[from * n + to]) return std::nullopt;
        std::vector<int> rev{to};
        int cur = to;
        while (cur != from) {
            cur = parent[from * n + cur];
            rev.push_back(cur);
        }
        std::reverse(rev.begin(), rev.end());
        return rev;
    }
};

namespace detail {

template <class S>
std::vector<std::optional<S>> dijkstra(const std::vector<std::vector<std::pair<int, S>>>& adj,
                                       int n, int source) {
    std::vector<std::optional<S>> dist(n);
    std::vector<bool> settled(n, false);
    using Item = std::pair<S, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[source] = scalar_traits<S>::zero();
    queue.push({scalar_traits<S>::zero(), source});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = true;
        for (const auto& [v, w] : adj[u]) {
            S next = d + w;
            if (!dist[v] || next < *dist[v]) {
                dist[v] = next;
                queue.push({next, v});
            }
        }
    }
    return dist;
}

}  // namespace detail

// Induced length quasi-metric of a directed graph: repeated label-setting
// single-source passes with nonnegative weights, parallel over sources.
template <class S>
ShortestPathTable<S> induced_quasimetric(const DirectedWeightedGraph<S>& g) {
    g.check();
    const int n = g.n;
    std::vector<std::vector<std::pair<int, S>>> adj(n);
    std::vector<std::vector<std::pair<int, S>>> incoming(n);
    for (const auto& e : g.edges) {
        adj[e.from].push_back({e.to, e.weight});
        incoming[e.to].push_back({e.from, e.weight});
    }
    ShortestPathTable<S> table;
    table.n = n;
    table.dist.resize(static_cast<std::size_t>(n) * n);
    table.parent.assign(static_cast<std::size_t>(n) * n, -1);

    parallel_for(0, n, [&](int i) {
        auto row = detail::dijkstra(adj, n, i);
        for (int j = 0; j < n; ++j) table.dist[i * n + j] = row[j];
        // Tight predecessor with the smallest index; exact equality holds for
        // the relaxation that produced the final distance.
        for (int j = 0; j < n; ++j) {
            if (j == i || !row[j]) continue;
            int best = -1;
            for (const auto& [u, w] : incoming[j]) {
                if (row[u] && *row[u] + w == *row[j] && (best == -1 || u < best)) best = u;
            }
            table.parent[i * n + j] = best;
        }
    });
    return table;
}

// Converts a finite table into a quasi-metric space. Shortest-path distances
// satisfy the axioms by construction; set `verify` to run the full validator
// anyway (tests do, large grids skip it).
template <class S>
QuasiMetric<S> to_quasimetric(const ShortestPathTable<S>& table,
                              std::vector<std::string> labels = {},
                              S tolerance = scalar_traits<S>::default_tolerance(),
                              bool verify = false) {
    if (auto bad = table.first_unreachable()) {
        throw std::invalid_argument("graph is not strongly connected: no path " +
                                    std::to_string(bad->first) + " -> " +
                                    std::to_string(bad->second));
    }
    std::vector<std::vector<S>> m(table.n, std::vector<S>(table.n, scalar_traits<S>::zero()));
    for (int i = 0; i < table.n; ++i) {
        for (int j = 0; j < table.n; ++j) m[i][j] = *table.distance(i, j);
    }
    if (verify) {
        auto result = QuasiMetric<S>::validate(std::move(m), std::move(labels), tolerance);
        if (!result.ok()) throw std::logic_error("induced distances failed validation");
        return *std::move(result.space);
    }
    return QuasiMetric<S>::from_verified(std::move(m), std::move(labels), tolerance);
}

template <class S>
struct PotentialViolation {
    int edge_index = -1;
    int from = 0, to = 0;
    S slack = scalar_traits<S>::zero();  // w + f(to) - f(from), nonpositive here
};

template <class S>
struct ApplyPotentialResult {
    std::optional<DirectedWeightedGraph<S>> graph;
    std::optional<PotentialViolation<S>> violation;

    bool ok() const { return graph.has_value(); }
};

// Reweights every edge to w + f(to) - f(from). Each path from x to y changes
// length by exactly f(y) - f(x), so induced distances shift by the same
// amount and minimizing chains are untouched. Fails when some new weight
// would be nonpositive.
template <class S>
ApplyPotentialResult<S> apply_potential(const DirectedWeightedGraph<S>& g,
                                        const std::vector<S>& f) {
    g.check();
    if (static_cast<int>(f.size()) != g.n) {
        throw std::invalid_argument("potential size must match vertex count");
    }
    DirectedWeightedGraph<S> out = g;
    for (std::size_t k = 0; k < out.edges.size(); ++k) {
        auto& e = out.edges[k];
        S w = e.weight + f[e.to] - f[e.from];
        if (!(w > scalar_traits<S>::zero())) {
            return {std::nullopt,
                    PotentialViolation<S>{static_cast<int>(k), e.from, e.to, w}};
        }
        e.weight = w;
    }
    return {std::move(out), std::nullopt};
}

// n collinear points with gap `spacing`: the first space carries |x - y|,
// the second the same distance capped at 1. The identity map between them is
// an almost isometry on small balls but not globally once some gap reaches 1.
template <class S>
std::pair<QuasiMetric<S>, QuasiMetric<S>> counterexample_spaces(
    int n, const S& spacing, S tolerance = scalar_traits<S>::default_tolerance()) {
    if (n < 3) throw std::invalid_argument("counterexample needs at least three points");
    if (!(spacing > scalar_traits<S>::zero())) {
        throw std::invalid_argument("spacing must be positive");
    }
    const S one = S(1);
    std::vector<std::vector<S>> line(n, std::vector<S>(n, scalar_traits<S>::zero()));
    std::vector<std::vector<S>> capped = line;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int gap = i > j ? i - j : j - i;
            S d = spacing * S(gap);
            line[i][j] = d;
            capped[i][j] = std::min(d, one);
        }
    }
    auto r1 = QuasiMetric<S>::validate(std::move(line), {}, tolerance);
    auto r2 = QuasiMetric<S>::validate(std::move(capped), {}, tolerance);
    if (!r1.ok() || !r2.ok()) throw std::logic_error("counterexample construction invalid");
    return {*std::move(r1.space), *std::move(r2.space)};
}

template <class S>
struct LocalCheckEntry {
    int vertex = 0;
    bool pass = false;
    bool image_escapes_ball = false;
    std::optional<TripleFailure<S>> failure;
};

template <class S>
struct LocalCheckReport {
    std::vector<LocalCheckEntry<S>> entries;
    bool all_pass = true;
};

// Probes the map around every point: restricts both metrics to the ball of
// the symmetrized metric (which generates the same topology as the
// forward-backward intersections, and is the ball family a potential shift
// preserves) and tests preservation of the triangular function there. An
// image point falling outside the corresponding target ball is flagged and
// counts as failure.
template <class S>
LocalCheckReport<S> check_local_almost_isometry(const QuasiMetric<S>& s1,
                                                const QuasiMetric<S>& s2,
                                                std::span<const int> map, const S& radius) {
    detail::check_bijection(s1, s2, map);
    const S tol = detail::pair_tolerance(s1, s2);
    const auto tilde1 = s1.symmetrized();
    const auto tilde2 = s2.symmetrized();
    LocalCheckReport<S> report;
    for (int v = 0; v < s1.size(); ++v) {
        LocalCheckEntry<S> entry;
        entry.vertex = v;
        const auto ball1 = tilde1.ball(v, radius, BallKind::Forward).members;
        const auto ball2 = tilde2.ball(map[v], radius, BallKind::Forward).members;
        for (int u : ball1) {
            if (!std::binary_search(ball2.begin(), ball2.end(), map[u])) {
                entry.image_escapes_ball = true;
            }
        }
        bool preserved = true;
        for (int a : ball1) {
            for (int b : ball1) {
                for (int c : ball1) {
                    S t1 = s1.triangular(a, b, c);
                    S t2 = s2.triangular(map[a], map[b], map[c]);
                    if (!near(t1, t2, tol)) {
                        preserved = false;
                        if (!entry.failure) entry.failure = TripleFailure<S>{a, b, c, t1, t2};
                    }
                }
            }
        }
        entry.pass = preserved && !entry.image_escapes_ball;
        report.all_pass = report.all_pass && entry.pass;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

// Graph flavour of the local check: both induced quasi-metrics are computed
// first (the graphs must be strongly connected).
template <class S>
LocalCheckReport<S> check_local_almost_isometry(const DirectedWeightedGraph<S>& g1,
                                                const DirectedWeightedGraph<S>& g2,
                                                std::span<const int> map, const S& radius,
                                                S tolerance = scalar_traits<S>::default_tolerance()) {
    auto t1 = induced_quasimetric(g1);
    auto t2 = induced_quasimetric(g2);
    auto s1 = to_quasimetric(t1, {}, tolerance);
    auto s2 = to_quasimetric(t2, {}, tolerance);
    return check_local_almost_isometry(s1, s2, map, radius);
}

// Directed 4-neighbour grid with per-direction weights; a small length-space
// stand-in where local checks extend globally.
template <class S>
DirectedWeightedGraph<S> grid_graph(int rows, int cols, const S& east, const S& west,
                                    const S& north, const S& south) {
    DirectedWeightedGraph<S> g;
    g.n = rows * cols;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                g.edges.push_back({id(r, c), id(r, c + 1), east});
                g.edges.push_back({id(r, c + 1), id(r, c), west});
            }
            if (r + 1 < rows) {
                g.edges.push_back({id(r, c), id(r + 1, c), north});
                g.edges.push_back({id(r + 1, c), id(r, c), south});
            }
        }
    }
    g.check();
    return g;
}

// Samples a planar metric F(x, v) on a res x res grid over the domain and
// connects 8-neighbours both ways. Edge weight is the two-point trapezoid
// approximation of the F-length of the straight segment.
DirectedWeightedGraph<double> discretize_planar_metric(
    const std::function<double(Vec2, Vec2)>& metric, const Rect& domain, int res);

std::vector<std::string> grid_labels(int res);
int grid_index(int res, int ix, int iy);

}  // namespace quasimet
