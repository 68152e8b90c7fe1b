#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "spatnet/graph.hpp"
#include "spatnet/spatial_points.hpp"

namespace spatnet {

/// Blocking rules, in squared distances with no tolerance:
///  - GG:  w blocks (u, v) when d2(u,w) + d2(v,w) <= d2(u,v)  (closed disk)
///  - RNG: w blocks (u, v) when d2(u,w) <  d2(u,v) and d2(v,w) < d2(u,v)
///    (open lune)
enum class ProximityRule { rng, gg };

std::string_view to_string(ProximityRule rule);
ProximityRule parse_proximity_rule(std::string_view text);

enum class Construction {
    /// Every candidate pair checked against every other point, O(N^3).
    literal,
    /// Same predicate; blockers are searched in a uniform grid outward from
    /// the pair midpoint and the search stops at the first blocker.
    indexed,
};

bool blocks(ProximityRule rule, Point u, Point v, Point w);

/// Throws ContractError on duplicate or non-finite points.
Graph build_proximity_graph(const PointSet& points, ProximityRule rule,
                            Construction method = Construction::indexed);
inline Graph build_gg(const PointSet& points, Construction method = Construction::indexed) {
    return build_proximity_graph(points, ProximityRule::gg, method);
}
inline Graph build_rng(const PointSet& points, Construction method = Construction::indexed) {
    return build_proximity_graph(points, ProximityRule::rng, method);
}

struct PlanarityReport {
    bool planar = true;
    /// First offending pair in canonical edge order.
    std::optional<std::pair<Edge, Edge>> crossing;
};

/// Straight-line embedding check over alive edges. Two edges without a
/// shared endpoint conflict when their segments properly cross, or when an
/// endpoint of one lies on the other. O(M^2).
PlanarityReport check_planar_embedding(const Graph& g);

}  // namespace spatnet
