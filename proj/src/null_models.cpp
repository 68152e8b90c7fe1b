#include "spatnet/null_models.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "spatnet/error.hpp"
#include "spatnet/random.hpp"

namespace spatnet {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

Graph with_dead_nodes_of(const Graph& source, Graph result) {
    for (NodeId v = 0; v < source.node_count(); ++v) {
        if (!source.is_alive(v)) result.remove_node(v);
    }
    return result;
}

}  // namespace

Graph rewire_degree_preserving(const Graph& g, const RewireSpec& spec, RewireReport* report) {
    if (spec.swaps_per_edge < 1) throw ContractError("swaps_per_edge must be at least 1");
    auto edges = g.alive_edges();
    const auto m = edges.size();
    if (m < 2) throw ContractError("rewiring needs at least two edges");

    std::unordered_set<std::uint64_t> present;
    present.reserve(2 * m);
    for (const auto& e : edges) present.insert(edge_key(e.u, e.v));

    auto rng = make_rng(spec.seed);
    RewireReport tally;
    tally.attempted = spec.swaps_per_edge * m;
    for (std::size_t attempt = 0; attempt < tally.attempted; ++attempt) {
        const auto i = static_cast<std::size_t>(uniform_index(rng, m));
        auto j = static_cast<std::size_t>(uniform_index(rng, m - 1));
        if (j >= i) ++j;
        NodeId a = edges[i].u, b = edges[i].v;
        NodeId c = edges[j].u, d = edges[j].v;
        if (rng() & 1U) std::swap(c, d);
        // (a,b),(c,d) -> (a,d),(c,b)
        if (a == d || c == b || present.count(edge_key(a, d)) || present.count(edge_key(c, b))) {
            ++tally.rejected;
            continue;
        }
        present.erase(edge_key(a, b));
        present.erase(edge_key(c, d));
        present.insert(edge_key(a, d));
        present.insert(edge_key(c, b));
        edges[i] = {std::min(a, d), std::max(a, d)};
        edges[j] = {std::min(c, b), std::max(c, b)};
        ++tally.accepted;
    }
    if (report) *report = tally;

    Graph out = g.has_coords() ? Graph(g.coords(), std::move(edges))
                               : Graph::without_coords(g.node_count(), std::move(edges));
    return with_dead_nodes_of(g, std::move(out));
}

Graph relocate_to_lattice(const Graph& g, const RelocationSpec& spec, RelocationReport* report) {
    const auto side = spec.side;
    const auto n = side * side;
    if (side == 0 || n != g.alive_count()) {
        throw ContractError("lattice side " + std::to_string(side) + " does not match " +
                            std::to_string(g.alive_count()) + " alive nodes");
    }

    auto stubs = degree_sequence(g);
    auto rng = make_rng(spec.seed);
    shuffle(std::span<std::size_t>(stubs), rng);

    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> present;
    RelocationReport tally;
    auto link = [&](std::size_t s, std::size_t t) {
        edges.push_back({static_cast<NodeId>(std::min(s, t)), static_cast<NodeId>(std::max(s, t))});
        present.insert(edge_key(static_cast<NodeId>(s), static_cast<NodeId>(t)));
        --stubs[s];
        --stubs[t];
    };

    // First trial: lattice neighbours, East then South, row-major sweep.
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const auto s = r * side + c;
            if (c + 1 < side && stubs[s] > 0 && stubs[s + 1] > 0) link(s, s + 1);
            if (r + 1 < side && stubs[s] > 0 && stubs[s + side] > 0) link(s, s + side);
        }
    }
    tally.neighbor_links = edges.size();

    // Second trial: nearest pairs of sites with free stubs. Availability
    // only shrinks, so a single pass over the sorted candidate pairs picks
    // exactly what repeated nearest-pair selection would.
    std::vector<std::size_t> open;
    for (std::size_t s = 0; s < n; ++s) {
        if (stubs[s] > 0) open.push_back(s);
    }
    struct Candidate {
        std::int64_t dist2;
        std::uint32_t s;
        std::uint32_t t;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(open.size() * (open.size() - (open.empty() ? 0 : 1)) / 2);
    for (std::size_t i = 0; i < open.size(); ++i) {
        for (std::size_t j = i + 1; j < open.size(); ++j) {
            const auto s = open[i], t = open[j];
            const auto dr = static_cast<std::int64_t>(s / side) - static_cast<std::int64_t>(t / side);
            const auto dc = static_cast<std::int64_t>(s % side) - static_cast<std::int64_t>(t % side);
            candidates.push_back({dr * dr + dc * dc, static_cast<std::uint32_t>(s),
                                  static_cast<std::uint32_t>(t)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.dist2 != y.dist2) return x.dist2 < y.dist2;
        if (x.s != y.s) return x.s < y.s;
        return x.t < y.t;
    });
    for (const auto& cand : candidates) {
        if (stubs[cand.s] == 0 || stubs[cand.t] == 0) continue;
        if (present.count(edge_key(cand.s, cand.t))) continue;
        link(cand.s, cand.t);
        ++tally.long_links;
    }

    for (auto left : stubs) tally.dropped_stubs += left;

    std::vector<Point> coords(n);
    for (std::size_t s = 0; s < n; ++s) {
        coords[s] = {static_cast<double>(s % side) * spec.spacing,
                     static_cast<double>(s / side) * spec.spacing};
    }
    for (const auto& e : edges) {
        tally.max_link_length =
            std::max(tally.max_link_length, std::sqrt(squared_distance(coords[e.u], coords[e.v])));
    }
    if (report) *report = tally;
    return Graph(std::move(coords), std::move(edges));
}

std::string relocation_report_json(const RelocationReport& report) {
    nlohmann::ordered_json j;
    j["dropped_stubs"] = report.dropped_stubs;
    j["long_link_count"] = report.long_links;
    j["max_link_length"] = report.max_link_length;
    return j.dump();
}

}  // namespace spatnet
