#include "spatnet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "spatnet/csv.hpp"
#include "spatnet/error.hpp"
#include "spatnet/spatial_points.hpp"

namespace spatnet {

Graph::Graph(std::vector<Point> coords, std::vector<Edge> edges)
    : coords_(std::move(coords)), has_coords_(true) {
    const auto n = coords_.size();
    for (auto& e : edges) {
        if (e.u == e.v) throw ContractError("self-loop on node " + std::to_string(e.u));
        if (e.u >= n || e.v >= n) {
            throw ContractError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                ") references a node outside 0.." + std::to_string(n) + "-1");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw ContractError("duplicate edge (" + std::to_string(dup->u) + "," +
                            std::to_string(dup->v) + ")");
    }

    offsets_.assign(n + 1, 0);
    for (const auto& e : edges) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges) {
        adjacency_[fill[e.u]++] = e.v;
        adjacency_[fill[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
    alive_.assign(n, 1);
    alive_count_ = n;
}

Graph Graph::without_coords(std::size_t n, std::vector<Edge> edges) {
    Graph g(std::vector<Point>(n), std::move(edges));
    g.has_coords_ = false;
    return g;
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (NodeId v = 0; v < node_count(); ++v) twice += degree(v);
    return twice / 2;
}

std::size_t Graph::degree(NodeId v) const {
    if (!alive_[v]) return 0;
    if (alive_count_ == node_count()) return offsets_[v + 1] - offsets_[v];
    std::size_t d = 0;
    for (NodeId w : neighbors(v)) d += alive_[w];
    return d;
}

void Graph::remove_node(NodeId v) {
    if (alive_[v]) {
        alive_[v] = 0;
        --alive_count_;
    }
}

void Graph::restore_all() {
    std::fill(alive_.begin(), alive_.end(), 1);
    alive_count_ = alive_.size();
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(adjacency_.size() / 2);
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.push_back({u, v});
        }
    }
    return out;
}

std::vector<Edge> Graph::alive_edges() const {
    std::vector<Edge> out;
    for (NodeId u = 0; u < node_count(); ++u) {
        if (!alive_[u]) continue;
        for (NodeId v : neighbors(u)) {
            if (u < v && alive_[v]) out.push_back({u, v});
        }
    }
    return out;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::vector<NodeId>> components(const Graph& g) {
    const auto n = g.node_count();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start] || !g.is_alive(start)) continue;
        std::vector<NodeId> members;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (NodeId w : g.neighbors(v)) {
                if (!seen[w] && g.is_alive(w)) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    // Discovery order already sorts by smallest member; stable sort keeps it.
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

DegreeDistribution degree_distribution(const Graph& g) {
    DegreeDistribution dist;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!g.is_alive(v)) continue;
        ++dist.counts[g.degree(v)];
        ++dist.n;
    }
    return dist;
}

double average_degree(const Graph& g) {
    if (g.alive_count() == 0) throw UndefinedMetric("average degree of an empty graph");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.alive_count());
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
    std::vector<std::size_t> out;
    out.reserve(g.alive_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v)) out.push_back(g.degree(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Edge-list CSV

void write_edges(std::ostream& out, const std::vector<Edge>& edges) {
    out << "u,v\n";
    for (const auto& e : edges) out << e.u << ',' << e.v << '\n';
}

std::vector<Edge> parse_edges(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!csv::read_line(in, line)) throw ParseError(1, "empty edge file");
    if (line != "u,v") throw ParseError(1, "expected header 'u,v'");

    std::vector<Edge> edges;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::split(line);
        if (fields.size() != 2) throw ParseError(line_no, "expected u,v");
        const auto u = csv::parse_uint(fields[0], line_no);
        const auto v = csv::parse_uint(fields[1], line_no);
        if (u > UINT32_MAX || v > UINT32_MAX) throw ParseError(line_no, "node id too large");
        if (u == v) throw ParseError(line_no, "self-loop");
        if (u > v) throw ParseError(line_no, "edge not canonical (u must be < v)");
        const Edge e{static_cast<NodeId>(u), static_cast<NodeId>(v)};
        if (!edges.empty()) {
            if (edges.back() == e) throw ParseError(line_no, "duplicate edge");
            if (e < edges.back()) throw ParseError(line_no, "edges not sorted");
        }
        edges.push_back(e);
    }
    return edges;
}

std::vector<Edge> load_edges(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot open edge file " + path.string());
    return parse_edges(in);
}

void save_edges(const std::filesystem::path& path, const std::vector<Edge>& edges) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write edge file " + path.string());
    write_edges(out, edges);
}

Graph load_graph(const std::filesystem::path& edges_path,
                 const std::filesystem::path& coords_path) {
    auto points = load_points(coords_path);
    return Graph(std::move(points.points), load_edges(edges_path));
}

void save_graph(const std::filesystem::path& edges_path,
                const std::filesystem::path& coords_path, const Graph& g) {
    save_edges(edges_path, g.edges());
    save_points(coords_path, g.coords());
}

}  // namespace spatnet
