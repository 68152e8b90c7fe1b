#pragma once

// Independent reference implementations for tests. Each follows the
// textbook definition as literally as possible and ignores performance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "spatnet/geometry.hpp"
#include "spatnet/graph.hpp"

namespace oracle {

using spatnet::Edge;
using spatnet::Graph;
using spatnet::NodeId;
using spatnet::Point;

inline double d2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Closed disk on diameter uv must be empty.
inline std::vector<Edge> gabriel(const std::vector<Point>& p) {
    std::vector<Edge> out;
    for (NodeId u = 0; u < p.size(); ++u)
        for (NodeId v = u + 1; v < p.size(); ++v) {
            bool empty = true;
            for (NodeId w = 0; w < p.size() && empty; ++w) {
                if (w == u || w == v) continue;
                if (d2(p[u], p[w]) + d2(p[v], p[w]) <= d2(p[u], p[v])) empty = false;
            }
            if (empty) out.push_back({u, v});
        }
    return out;
}

// Open lune must be empty.
inline std::vector<Edge> relative_neighborhood(const std::vector<Point>& p) {
    std::vector<Edge> out;
    for (NodeId u = 0; u < p.size(); ++u)
        for (NodeId v = u + 1; v < p.size(); ++v) {
            bool empty = true;
            for (NodeId w = 0; w < p.size() && empty; ++w) {
                if (w == u || w == v) continue;
                if (std::max(d2(p[u], p[w]), d2(p[v], p[w])) < d2(p[u], p[v])) empty = false;
            }
            if (empty) out.push_back({u, v});
        }
    return out;
}

// Adjacency lists restricted to alive nodes.
inline std::vector<std::vector<NodeId>> alive_adjacency(const Graph& g) {
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (const auto& e : g.alive_edges()) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

inline std::vector<int> bfs_distances(const std::vector<std::vector<NodeId>>& adj, NodeId s) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<NodeId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (auto w : adj[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

// Betweenness by explicitly walking every shortest s-t path, unordered pairs.
inline std::vector<double> betweenness(const Graph& g) {
    const auto adj = alive_adjacency(g);
    const auto n = g.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<NodeId> path;
    for (NodeId s = 0; s < n; ++s) {
        if (!g.is_alive(s)) continue;
        const auto dist_s = bfs_distances(adj, s);
        for (NodeId t = s + 1; t < n; ++t) {
            if (!g.is_alive(t) || dist_s[t] < 0) continue;
            std::vector<double> through(n, 0.0);
            double paths = 0.0;
            path.assign(1, s);
            std::function<void(NodeId)> walk = [&](NodeId v) {
                if (v == t) {
                    paths += 1.0;
                    for (std::size_t i = 1; i + 1 < path.size(); ++i) through[path[i]] += 1.0;
                    return;
                }
                for (auto w : adj[v]) {
                    if (dist_s[w] == dist_s[v] + 1 && dist_s[w] <= dist_s[t]) {
                        path.push_back(w);
                        walk(w);
                        path.pop_back();
                    }
                }
            };
            walk(s);
            for (NodeId v = 0; v < n; ++v) score[v] += through[v] / paths;
        }
    }
    return score;
}

inline std::size_t largest_component(const Graph& g, std::size_t* second = nullptr) {
    const auto adj = alive_adjacency(g);
    std::vector<std::size_t> sizes;
    std::vector<bool> seen(g.node_count(), false);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_alive(v) || seen[v]) continue;
        const auto dist = bfs_distances(adj, v);
        std::size_t size = 0;
        for (NodeId w = 0; w < g.node_count(); ++w) {
            if (dist[w] >= 0) {
                seen[w] = true;
                ++size;
            }
        }
        sizes.push_back(size);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    if (second) *second = sizes.size() > 1 ? sizes[1] : 0;
    return sizes.empty() ? 0 : sizes[0];
}

// RB by recomputing brute-force betweenness from scratch at every step.
inline std::vector<NodeId> recalculated_betweenness_order(Graph g) {
    std::vector<NodeId> order;
    while (g.alive_count() > 0) {
        const auto b = betweenness(g);
        double best = -1.0;
        for (NodeId v = 0; v < g.node_count(); ++v)
            if (g.is_alive(v)) best = std::max(best, b[v]);
        const double slack = 1e-9 * std::max(1.0, best);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (g.is_alive(v) && b[v] >= best - slack) {
                order.push_back(v);
                g.remove_node(v);
                break;
            }
        }
    }
    return order;
}

// Q = (1/2M) sum_ij [A_ij - k_i k_j / 2M] delta(c_i, c_j), literal double sum.
inline double modularity(const Graph& g, const std::vector<int>& community) {
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    double q = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (!g.is_alive(i)) continue;
        for (NodeId j = 0; j < g.node_count(); ++j) {
            if (!g.is_alive(j) || community[i] != community[j]) continue;
            const double a = g.has_edge(i, j) ? 1.0 : 0.0;
            q += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / two_m;
        }
    }
    return q / two_m;
}

// Best modularity over every set partition (restricted growth strings).
inline double best_modularity(const Graph& g) {
    const auto n = g.node_count();
    std::vector<int> labels(n, 0);
    double best = -1.0;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
        if (i == n) {
            best = std::max(best, modularity(g, labels));
            return;
        }
        for (int c = 0; c <= used; ++c) {
            labels[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    return best;
}

// SI from its pairwise form: sum over ordered edge pairs of the smaller
// normalised length, divided by N^2 times the total normalised length.
inline double sparsity_index(const Graph& g) {
    std::vector<double> w;
    for (const auto& e : g.alive_edges()) w.push_back(std::sqrt(d2(g.coord(e.u), g.coord(e.v))));
    const double longest = *std::max_element(w.begin(), w.end());
    double total = 0.0;
    for (auto& x : w) {
        x /= longest;
        total += x;
    }
    double pairs = 0.0;
    for (double a : w)
        for (double b : w) pairs += std::min(a, b);
    const double n = static_cast<double>(g.alive_count());
    return 1.0 - pairs / (n * n * total);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

struct Anova {
    double f;
    double eta_squared;
};

// Textbook one-way ANOVA via total and within sums of squares.
inline Anova anova(const std::vector<std::vector<double>>& groups) {
    std::vector<double> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    const double grand = mean(all);
    double ss_total = 0.0;
    for (double x : all) ss_total += (x - grand) * (x - grand);
    double ss_within = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        for (double x : g) ss_within += (x - m) * (x - m);
    }
    const double ss_between = ss_total - ss_within;
    const double k = static_cast<double>(groups.size());
    const double n = static_cast<double>(all.size());
    return {(ss_between / (k - 1)) / (ss_within / (n - k)), ss_between / ss_total};
}

// Random simple graph on n nodes with edge probability p.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) edges.push_back({u, v});
    return Graph::without_coords(n, edges);
}

inline std::vector<Point> random_points(std::size_t n, std::mt19937_64& rng, double extent = 1.0) {
    std::uniform_real_distribution<double> u(0.0, extent);
    std::set<std::pair<double, double>> seen;
    std::vector<Point> out;
    while (out.size() < n) {
        Point p{u(rng), u(rng)};
        if (seen.insert({p.x, p.y}).second) out.push_back(p);
    }
    return out;
}

// Integer grid points, which exercise cocircular and collinear ties.
inline std::vector<Point> random_grid_points(std::size_t n, int side, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(0, side - 1);
    std::set<std::pair<int, int>> seen;
    std::vector<Point> out;
    while (out.size() < n) {
        const int x = u(rng), y = u(rng);
        if (seen.insert({x, y}).second) out.push_back({double(x), double(y)});
    }
    return out;
}

}  // namespace oracle
