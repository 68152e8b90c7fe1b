#include "spatnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "spatnet/error.hpp"
#include "spatnet/random.hpp"

namespace spatnet {

Partition make_partition(const Graph& g, const std::vector<std::int64_t>& labels) {
    if (labels.size() != g.node_count()) {
        throw ContractError("partition labels cover " + std::to_string(labels.size()) +
                            " nodes, graph has " + std::to_string(g.node_count()));
    }
    Partition p;
    p.assignment.assign(g.node_count(), Partition::kUnassigned);
    std::unordered_map<std::int64_t, std::int32_t> dense;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_alive(v)) continue;
        auto [it, inserted] = dense.try_emplace(labels[v], static_cast<std::int32_t>(dense.size()));
        p.assignment[v] = it->second;
    }
    p.community_count = dense.size();
    return p;
}

double modularity(const Graph& g, const Partition& partition) {
    if (partition.assignment.size() != g.node_count()) {
        throw ContractError("partition size does not match graph");
    }
    const auto m = g.edge_count();
    if (m == 0) throw UndefinedMetric("modularity undefined for a graph without edges");

    std::vector<double> internal(partition.community_count, 0.0);
    std::vector<double> degree_sum(partition.community_count, 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_alive(v)) continue;
        const auto c = partition.assignment[v];
        if (c < 0 || static_cast<std::size_t>(c) >= partition.community_count) {
            throw ContractError("alive node " + std::to_string(v) + " has no valid community");
        }
        degree_sum[c] += static_cast<double>(g.degree(v));
        for (NodeId w : g.neighbors(v)) {
            if (v < w && g.is_alive(w) && partition.assignment[w] == c) internal[c] += 1.0;
        }
    }
    const double md = static_cast<double>(m);
    double q = 0.0;
    for (std::size_t c = 0; c < partition.community_count; ++c) {
        const double share = degree_sum[c] / (2.0 * md);
        q += internal[c] / md - share * share;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Louvain

namespace {

// Weighted graph used across aggregation levels. Self-loop weight counts
// edges inside a super-node once; strength counts it twice.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self;

    std::size_t size() const { return adj.size(); }
    double strength(std::size_t i) const {
        double k = 2.0 * self[i];
        for (const auto& [j, w] : adj[i]) k += w;
        return k;
    }
};

// One round of local moving. Returns the community of each node.
std::vector<std::uint32_t> local_moves(const LevelGraph& lg, double two_m, Rng& rng,
                                       bool& moved_any) {
    const auto n = lg.size();
    std::vector<std::uint32_t> community(n);
    std::iota(community.begin(), community.end(), 0U);
    std::vector<double> strength(n), total(n);
    for (std::size_t i = 0; i < n; ++i) total[i] = strength[i] = lg.strength(i);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    shuffle(std::span<std::uint32_t>(order), rng);

    std::vector<double> link_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    moved_any = false;
    while (true) {
        std::size_t moves = 0;
        for (auto i : order) {
            const auto own = community[i];
            touched.clear();
            for (const auto& [j, w] : lg.adj[i]) {
                const auto c = community[j];
                if (link_to[c] == 0.0) touched.push_back(c);
                link_to[c] += w;
            }
            const double k = strength[i];
            total[own] -= k;
            auto best = own;
            double best_gain = link_to[own] - total[own] * k / two_m;
            for (auto c : touched) {
                const double gain = link_to[c] - total[c] * k / two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            total[best] += k;
            community[i] = best;
            if (best != own) ++moves;
            for (auto c : touched) link_to[c] = 0.0;
        }
        if (moves == 0) break;
        moved_any = true;
    }
    return community;
}

}  // namespace

LouvainResult louvain(const Graph& g, std::uint64_t seed) {
    const auto m = g.edge_count();
    if (m == 0) throw UndefinedMetric("louvain needs at least one edge");

    // Compact ids over alive nodes.
    std::vector<std::uint32_t> compact(g.node_count(), UINT32_MAX);
    std::vector<NodeId> original;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v)) {
            compact[v] = static_cast<std::uint32_t>(original.size());
            original.push_back(v);
        }
    }
    LevelGraph lg;
    lg.adj.resize(original.size());
    lg.self.assign(original.size(), 0.0);
    for (std::size_t i = 0; i < original.size(); ++i) {
        for (NodeId w : g.neighbors(original[i])) {
            if (g.is_alive(w)) lg.adj[i].push_back({compact[w], 1.0});
        }
    }

    const double two_m = 2.0 * static_cast<double>(m);
    auto rng = make_rng(seed);
    // membership[i] = current super-node of compact node i
    std::vector<std::uint32_t> membership(original.size());
    std::iota(membership.begin(), membership.end(), 0U);

    auto flatten = [&]() {
        std::vector<std::int64_t> labels(g.node_count(), -1);
        for (std::size_t i = 0; i < original.size(); ++i) labels[original[i]] = membership[i];
        return make_partition(g, labels);
    };

    LouvainResult result;
    result.trace.push_back(modularity(g, flatten()));
    while (true) {
        bool moved = false;
        const auto community = local_moves(lg, two_m, rng, moved);
        if (!moved) break;

        // Dense renumbering in order of first appearance.
        std::vector<std::uint32_t> dense(lg.size(), UINT32_MAX);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            if (dense[community[i]] == UINT32_MAX) dense[community[i]] = next++;
        }
        for (auto& mbr : membership) mbr = dense[community[mbr]];

        LevelGraph agg;
        agg.adj.resize(next);
        agg.self.assign(next, 0.0);
        std::vector<std::map<std::uint32_t, double>> links(next);
        for (std::size_t i = 0; i < lg.size(); ++i) {
            const auto ci = dense[community[i]];
            agg.self[ci] += lg.self[i];
            for (const auto& [j, w] : lg.adj[i]) {
                const auto cj = dense[community[j]];
                if (ci == cj) {
                    agg.self[ci] += 0.5 * w;  // seen from both ends
                } else {
                    links[ci][cj] += w;
                }
            }
        }
        for (std::uint32_t c = 0; c < next; ++c) {
            agg.adj[c].assign(links[c].begin(), links[c].end());
        }
        lg = std::move(agg);
        result.trace.push_back(modularity(g, flatten()));
        if (next == 1) break;
    }
    result.partition = flatten();
    return result;
}

// ---------------------------------------------------------------------------
// Sparsity index

WeightedEdgeProfile weighted_edge_profile(const Graph& g) {
    const auto edges = g.alive_edges();
    if (edges.empty()) throw UndefinedMetric("sparsity index needs at least one edge");
    std::vector<double> lengths;
    lengths.reserve(edges.size());
    double longest = 0.0;
    for (const auto& e : edges) {
        lengths.push_back(std::sqrt(squared_distance(g.coord(e.u), g.coord(e.v))));
        longest = std::max(longest, lengths.back());
    }
    if (!(longest > 0.0)) throw UndefinedMetric("all links have zero length");

    const double scale = std::pow(10.0, kWeightQuantizationDigits);
    std::map<std::int64_t, std::size_t> classes;
    for (double len : lengths) {
        const auto key = std::max<std::int64_t>(std::llround(len / longest * scale), 1);
        ++classes[key];
    }
    WeightedEdgeProfile profile;
    profile.edge_count = edges.size();
    for (const auto& [key, freq] : classes) {
        const double w = static_cast<double>(key) / scale;
        profile.classes.push_back({w, freq});
        profile.total_weight += w * static_cast<double>(freq);
    }
    return profile;
}

double sparsity_index(const WeightedEdgeProfile& profile, std::size_t n, WeightOrder order) {
    if (n == 0 || profile.classes.empty()) throw UndefinedMetric("sparsity index of empty graph");
    std::vector<WeightClass> seq = profile.classes;
    if (order == WeightOrder::descending) std::reverse(seq.begin(), seq.end());

    double sum = 0.0;
    double trailing = 0.0;  // f_{j+1} + ... + f_k
    for (std::size_t j = seq.size(); j-- > 0;) {
        const double f = static_cast<double>(seq[j].frequency);
        sum += seq[j].weight * f * (f + 2.0 * trailing);
        trailing += f;
    }
    const double nn = static_cast<double>(n);
    return 1.0 - sum / (nn * nn * profile.total_weight);
}

double sparsity_index(const Graph& g) {
    return sparsity_index(weighted_edge_profile(g), g.alive_count());
}

double grid_like_ratio(const Graph& g) {
    if (g.alive_count() == 0) return 0.0;
    std::size_t grid = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_alive(v) || g.degree(v) != 4) continue;
        bool all_four = true;
        for (NodeId w : g.neighbors(v)) {
            if (g.is_alive(w) && g.degree(w) != 4) {
                all_four = false;
                break;
            }
        }
        if (all_four) ++grid;
    }
    return static_cast<double>(grid) / static_cast<double>(g.alive_count());
}

void write_partition(std::ostream& out, const Partition& partition) {
    out << "node,community\n";
    for (std::size_t v = 0; v < partition.assignment.size(); ++v) {
        if (partition.assignment[v] != Partition::kUnassigned) {
            out << v << ',' << partition.assignment[v] << '\n';
        }
    }
}

}  // namespace spatnet
