#pragma once

#include <span>
#include <vector>

#include "spatnet/graph.hpp"

namespace spatnet {

/// Exact shortest-path betweenness over unordered pairs {s, t} of alive
/// nodes, s != v != t. Disconnected pairs contribute nothing. O(n * M).
std::vector<double> betweenness(const Graph& g);

/// Reusable buffers for repeated betweenness passes on one graph.
class BetweennessWorkspace {
public:
    explicit BetweennessWorkspace(std::size_t n);

    /// Adds the pair-dependency of every source in `sources` to `scores`,
    /// already halved for unordered pairs. Sources must be alive and are
    /// processed in the given order; pass them ascending for results that
    /// are bit-identical to betweenness().
    void accumulate(const Graph& g, std::span<const NodeId> sources, std::span<double> scores);

private:
    std::vector<NodeId> order_;
    std::vector<double> sigma_;
    std::vector<double> delta_;
    std::vector<int> dist_;
};

}  // namespace spatnet
