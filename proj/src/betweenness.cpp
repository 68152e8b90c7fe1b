#include "spatnet/betweenness.hpp"

namespace spatnet {

BetweennessWorkspace::BetweennessWorkspace(std::size_t n)
    : sigma_(n, 0.0), delta_(n, 0.0), dist_(n, -1) {
    order_.reserve(n);
}

void BetweennessWorkspace::accumulate(const Graph& g, std::span<const NodeId> sources,
                                      std::span<double> scores) {
    for (NodeId s : sources) {
        // Forward BFS counting shortest paths.
        order_.clear();
        dist_[s] = 0;
        sigma_[s] = 1.0;
        order_.push_back(s);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeId v = order_[head];
            for (NodeId w : g.neighbors(v)) {
                if (!g.is_alive(w)) continue;
                if (dist_[w] < 0) {
                    dist_[w] = dist_[v] + 1;
                    order_.push_back(w);
                }
                if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
            }
        }
        // Back-propagate dependencies in reverse BFS order. Predecessors are
        // the alive neighbours one level closer to s.
        for (std::size_t i = order_.size(); i-- > 1;) {
            const NodeId w = order_[i];
            const double coeff = (1.0 + delta_[w]) / sigma_[w];
            for (NodeId v : g.neighbors(w)) {
                if (g.is_alive(v) && dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] * coeff;
            }
            scores[w] += 0.5 * delta_[w];
        }
        for (NodeId v : order_) {
            dist_[v] = -1;
            sigma_[v] = 0.0;
            delta_[v] = 0.0;
        }
    }
}

std::vector<double> betweenness(const Graph& g) {
    std::vector<double> scores(g.node_count(), 0.0);
    std::vector<NodeId> sources;
    sources.reserve(g.alive_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v)) sources.push_back(v);
    }
    BetweennessWorkspace workspace(g.node_count());
    workspace.accumulate(g, sources, scores);
    return scores;
}

}  // namespace spatnet
