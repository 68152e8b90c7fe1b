#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "spatnet/geometry.hpp"

namespace spatnet {

using NodeId = std::uint32_t;

/// Undirected edge, canonical when u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with node coordinates and an alive mask.
///
/// Structure is immutable after construction. Node removal only flips the
/// alive mask, and every query below (degree, edge_count, components, ...)
/// sees the subgraph induced by the alive nodes.
class Graph {
public:
    Graph() = default;

    /// Validates simplicity: no self-loops, no duplicate edges (in either
    /// orientation), endpoints in range. Edges are canonicalised and sorted.
    Graph(std::vector<Point> coords, std::vector<Edge> edges);

    /// Graph without geometry; coordinates are all zero.
    static Graph without_coords(std::size_t n, std::vector<Edge> edges);

    std::size_t node_count() const { return alive_.size(); }
    std::size_t alive_count() const { return alive_count_; }
    /// Edges with both endpoints alive.
    std::size_t edge_count() const;

    bool has_coords() const { return has_coords_; }
    const std::vector<Point>& coords() const { return coords_; }
    Point coord(NodeId v) const { return coords_[v]; }

    /// Structural neighbours, sorted ascending, including dead ones.
    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    /// Number of alive neighbours; 0 for a dead node.
    std::size_t degree(NodeId v) const;

    bool is_alive(NodeId v) const { return alive_[v] != 0; }
    void remove_node(NodeId v);
    void restore_all();

    /// All structural edges, canonical and sorted.
    std::vector<Edge> edges() const;
    /// Edges with both endpoints alive.
    std::vector<Edge> alive_edges() const;

    bool has_edge(NodeId u, NodeId v) const;

private:
    std::vector<Point> coords_;
    bool has_coords_ = false;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> adjacency_;
    std::vector<std::uint8_t> alive_;
    std::size_t alive_count_ = 0;
};

/// Maximal connected sets of alive nodes, largest first, ties by smallest
/// member. Each set is sorted ascending.
std::vector<std::vector<NodeId>> components(const Graph& g);

struct DegreeDistribution {
    std::map<std::size_t, std::size_t> counts;  ///< degree -> node count
    std::size_t n = 0;
};

DegreeDistribution degree_distribution(const Graph& g);
/// 2M / n over alive nodes. Throws UndefinedMetric when no node is alive.
double average_degree(const Graph& g);
/// Degree of each alive node, dead nodes excluded, in id order.
std::vector<std::size_t> degree_sequence(const Graph& g);

/// Edge-list CSV: header `u,v`, u < v, sorted lexicographically.
void write_edges(std::ostream& out, const std::vector<Edge>& edges);
/// Validates header, u < v, strict lexicographic order (so no duplicates).
std::vector<Edge> parse_edges(std::istream& in);
std::vector<Edge> load_edges(const std::filesystem::path& path);
void save_edges(const std::filesystem::path& path, const std::vector<Edge>& edges);

/// Loads an edge list plus its coordinates sidecar (PointSet CSV).
Graph load_graph(const std::filesystem::path& edges_path,
                 const std::filesystem::path& coords_path);
/// Writes `edges` and the coordinates sidecar.
void save_graph(const std::filesystem::path& edges_path,
                const std::filesystem::path& coords_path, const Graph& g);

}  // namespace spatnet
