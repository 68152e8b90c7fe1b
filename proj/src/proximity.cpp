#include "spatnet/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spatnet/error.hpp"

namespace spatnet {

std::string_view to_string(ProximityRule rule) { return rule == ProximityRule::rng ? "rng" : "gg"; }

ProximityRule parse_proximity_rule(std::string_view text) {
    if (text == "rng") return ProximityRule::rng;
    if (text == "gg") return ProximityRule::gg;
    throw ContractError("unknown graph kind '" + std::string(text) + "' (expected rng|gg)");
}

bool blocks(ProximityRule rule, Point u, Point v, Point w) {
    const double uv = squared_distance(u, v);
    const double uw = squared_distance(u, w);
    const double vw = squared_distance(v, w);
    if (rule == ProximityRule::gg) return uw + vw <= uv;
    return uw < uv && vw < uv;
}

namespace {

std::vector<Edge> literal_edges(const std::vector<Point>& pts, ProximityRule rule) {
    const auto n = static_cast<NodeId>(pts.size());
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            bool blocked = false;
            for (NodeId w = 0; w < n && !blocked; ++w) {
                if (w != u && w != v) blocked = blocks(rule, pts[u], pts[v], pts[w]);
            }
            if (!blocked) edges.push_back({u, v});
        }
    }
    return edges;
}

// Uniform bucket grid over the point bounding box.
class BucketGrid {
public:
    explicit BucketGrid(const std::vector<Point>& pts) : pts_(pts) {
        min_x_ = max_x_ = pts[0].x;
        min_y_ = max_y_ = pts[0].y;
        for (const auto& p : pts) {
            min_x_ = std::min(min_x_, p.x);
            max_x_ = std::max(max_x_, p.x);
            min_y_ = std::min(min_y_, p.y);
            max_y_ = std::max(max_y_, p.y);
        }
        const double w = max_x_ - min_x_;
        const double h = max_y_ - min_y_;
        const double count = static_cast<double>(pts.size());
        // About two points per bucket; thin or collinear sets fall back to
        // splitting the long side.
        cell_ = std::max(std::sqrt(w * h * 2.0 / count), std::max(w, h) * 2.0 / count);
        if (!(cell_ > 0.0) || !std::isfinite(cell_)) cell_ = 1.0;
        nx_ = static_cast<long>(std::floor(w / cell_)) + 1;
        ny_ = static_cast<long>(std::floor(h / cell_)) + 1;
        start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
        std::vector<std::size_t> bucket_of(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            bucket_of[i] = bucket(cx(pts[i].x), cy(pts[i].y));
            ++start_[bucket_of[i] + 1];
        }
        for (std::size_t b = 0; b + 1 < start_.size(); ++b) start_[b + 1] += start_[b];
        items_.resize(pts.size());
        auto fill = start_;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            items_[fill[bucket_of[i]]++] = static_cast<NodeId>(i);
        }
    }

    /// True when some point other than u, v blocks the pair. Buckets are
    /// visited in square rings around the midpoint out to `radius`.
    bool blocked(ProximityRule rule, NodeId u, NodeId v, double radius) const {
        const Point a = pts_[u];
        const Point b = pts_[v];
        const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        const long mx = cx(mid.x);
        const long my = cy(mid.y);
        const long rings = static_cast<long>(std::ceil(radius / cell_)) + 1;
        auto scan = [&](long x, long y) {
            if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return false;
            const auto bk = bucket(x, y);
            for (auto i = start_[bk]; i < start_[bk + 1]; ++i) {
                const NodeId w = items_[i];
                if (w != u && w != v && blocks(rule, a, b, pts_[w])) return true;
            }
            return false;
        };
        // Far pairs are nearly always blocked by something next to an
        // endpoint, so look there before walking rings from the midpoint.
        for (const Point end : {a, b}) {
            const long ex = cx(end.x), ey = cy(end.y);
            for (long y = ey - 1; y <= ey + 1; ++y) {
                for (long x = ex - 1; x <= ex + 1; ++x) {
                    if (scan(x, y)) return true;
                }
            }
        }
        if (scan(mx, my)) return true;
        for (long k = 1; k <= rings; ++k) {
            if (mx - k < 0 && my - k < 0 && mx + k >= nx_ && my + k >= ny_) break;
            for (long x = mx - k; x <= mx + k; ++x) {
                if (scan(x, my - k) || scan(x, my + k)) return true;
            }
            for (long y = my - k + 1; y <= my + k - 1; ++y) {
                if (scan(mx - k, y) || scan(mx + k, y)) return true;
            }
        }
        return false;
    }

private:
    long cx(double x) const {
        return std::clamp(static_cast<long>(std::floor((x - min_x_) / cell_)), 0L, nx_ - 1);
    }
    long cy(double y) const {
        return std::clamp(static_cast<long>(std::floor((y - min_y_) / cell_)), 0L, ny_ - 1);
    }
    std::size_t bucket(long x, long y) const { return static_cast<std::size_t>(y * nx_ + x); }

    const std::vector<Point>& pts_;
    double min_x_, max_x_, min_y_, max_y_;
    double cell_;
    long nx_, ny_;
    std::vector<std::size_t> start_;
    std::vector<NodeId> items_;
};

std::vector<Edge> indexed_edges(const std::vector<Point>& pts, ProximityRule rule) {
    const auto n = static_cast<NodeId>(pts.size());
    std::vector<Edge> edges;
    if (n < 2) return edges;
    const BucketGrid grid(pts);
    // Any blocker lies within d/2 (GG disk) or d*sqrt(3)/2 (RNG lune) of the
    // midpoint; the margin absorbs rounding in the predicate.
    const double reach = rule == ProximityRule::gg ? 0.5 : 0.8660254037844387;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            const double d = std::sqrt(squared_distance(pts[u], pts[v]));
            const double radius = d * reach * (1.0 + 1e-9);
            if (!grid.blocked(rule, u, v, radius)) edges.push_back({u, v});
        }
    }
    return edges;
}

}  // namespace

Graph build_proximity_graph(const PointSet& points, ProximityRule rule, Construction method) {
    validate_point_set(points);
    auto edges = method == Construction::literal ? literal_edges(points.points, rule)
                                                 : indexed_edges(points.points, rule);
    return Graph(points.points, std::move(edges));
}

// ---------------------------------------------------------------------------
// Planarity

namespace {

double orient(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// c is collinear with ab; is it strictly between a and b?
bool strictly_inside(Point a, Point b, Point c) {
    if (c == a || c == b) return false;
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

bool on_segment(Point a, Point b, Point c) { return orient(a, b, c) == 0.0 && strictly_inside(a, b, c); }

bool conflict(const Graph& g, Edge e, Edge f) {
    const Point a = g.coord(e.u), b = g.coord(e.v);
    const Point c = g.coord(f.u), d = g.coord(f.v);
    const bool shared = e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v;
    if (shared) {
        // Only overlap along a common line counts.
        return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
               on_segment(c, d, b);
    }
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
        return true;
    }
    return (o1 == 0.0 && strictly_inside(a, b, c)) || (o2 == 0.0 && strictly_inside(a, b, d)) ||
           (o3 == 0.0 && strictly_inside(c, d, a)) || (o4 == 0.0 && strictly_inside(c, d, b));
}

}  // namespace

PlanarityReport check_planar_embedding(const Graph& g) {
    const auto edges = g.alive_edges();
    struct Box {
        double x0, x1, y0, y1;
    };
    std::vector<Box> boxes;
    boxes.reserve(edges.size());
    for (const auto& e : edges) {
        const Point a = g.coord(e.u), b = g.coord(e.v);
        boxes.push_back({std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                         std::max(a.y, b.y)});
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto& p = boxes[i];
            const auto& q = boxes[j];
            if (p.x1 < q.x0 || q.x1 < p.x0 || p.y1 < q.y0 || q.y1 < p.y0) continue;
            if (conflict(g, edges[i], edges[j])) {
                return {false, std::make_pair(edges[i], edges[j])};
            }
        }
    }
    return {};
}

}  // namespace spatnet
