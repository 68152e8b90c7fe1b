#include "spatnet/attack.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "spatnet/betweenness.hpp"
#include "spatnet/csv.hpp"
#include "spatnet/error.hpp"
#include "spatnet/random.hpp"

namespace spatnet {

std::string_view to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::rb: return "rb";
        case AttackKind::id: return "id";
        case AttackKind::rf: return "rf";
    }
    return "rf";
}

AttackKind parse_attack_kind(std::string_view text) {
    if (text == "rb") return AttackKind::rb;
    if (text == "id") return AttackKind::id;
    if (text == "rf") return AttackKind::rf;
    throw ContractError("unknown attack '" + std::string(text) + "' (expected rb|id|rf)");
}

std::string_view to_string(QNormalization norm) {
    return norm == QNormalization::by_n ? "n" : "n-1";
}

QNormalization parse_q_normalization(std::string_view text) {
    if (text == "n") return QNormalization::by_n;
    if (text == "n-1") return QNormalization::by_n_minus_1;
    throw ContractError("unknown q normalization '" + std::string(text) + "' (expected n|n-1)");
}

double AttackCurve::q(std::size_t step, QNormalization norm) const {
    if (norm == QNormalization::by_n_minus_1) {
        return n > 1 ? static_cast<double>(step) / static_cast<double>(n - 1) : 0.0;
    }
    return n > 0 ? static_cast<double>(step) / static_cast<double>(n) : 0.0;
}

namespace {

std::vector<NodeId> alive_nodes(const Graph& g) {
    std::vector<NodeId> out;
    out.reserve(g.alive_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v)) out.push_back(v);
    }
    return out;
}

// Union-find over node ids with component sizes.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), NodeId{0});
    }
    NodeId find(NodeId v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    std::size_t size(NodeId root) const { return size_[root]; }
    /// Returns the merged root, or the common root if already joined.
    NodeId unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

private:
    std::vector<NodeId> parent_;
    std::vector<std::size_t> size_;
};

// Multiset of component sizes with O(1) insert/erase and top-two lookup by
// scanning down from the largest size.
class SizeHistogram {
public:
    explicit SizeHistogram(std::size_t n) : count_(n + 1, 0) {}

    void add(std::size_t s) {
        ++count_[s];
        largest_ = std::max(largest_, s);
    }
    void remove(std::size_t s) {
        --count_[s];
        while (largest_ > 0 && count_[largest_] == 0) --largest_;
    }
    std::size_t largest() const { return largest_; }
    std::size_t second() const {
        if (largest_ == 0) return 0;
        if (count_[largest_] >= 2) return largest_;
        for (std::size_t s = largest_; s-- > 1;) {
            if (count_[s] > 0) return s;
        }
        return 0;
    }

private:
    std::vector<std::size_t> count_;
    std::size_t largest_ = 0;
};

AttackCurve empty_curve(std::size_t n) {
    AttackCurve curve;
    curve.n = n;
    curve.s1.assign(n + 1, 0.0);
    curve.s2.assign(n + 1, 0.0);
    return curve;
}

}  // namespace

AttackCurve replay_removal_order(const Graph& g, std::span<const NodeId> order) {
    const auto n = g.alive_count();
    if (order.size() != n) {
        throw ContractError("removal order lists " + std::to_string(order.size()) +
                            " nodes but the graph has " + std::to_string(n) + " alive");
    }
    std::vector<std::uint8_t> placed(g.node_count(), 0);
    for (NodeId v : order) {
        if (v >= g.node_count() || !g.is_alive(v) || placed[v]) {
            throw ContractError("removal order is not a permutation of the alive nodes");
        }
        placed[v] = 1;
    }

    auto curve = empty_curve(n);
    curve.removal_order.assign(order.begin(), order.end());
    const double nd = static_cast<double>(n);

    // Add nodes back in reverse removal order; the state after adding
    // order[i] is the state after i removals.
    std::fill(placed.begin(), placed.end(), 0);
    DisjointSets sets(g.node_count());
    SizeHistogram sizes(n);
    for (std::size_t i = n; i-- > 0;) {
        const NodeId v = order[i];
        placed[v] = 1;
        sizes.add(1);
        for (NodeId w : g.neighbors(v)) {
            if (!placed[w]) continue;
            const auto rv = sets.find(v), rw = sets.find(w);
            if (rv == rw) continue;
            sizes.remove(sets.size(rv));
            sizes.remove(sets.size(rw));
            sizes.add(sets.size(sets.unite(rv, rw)));
        }
        curve.s1[i] = static_cast<double>(sizes.largest()) / nd;
        curve.s2[i] = static_cast<double>(sizes.second()) / nd;
    }
    return curve;
}

std::vector<NodeId> initial_degree_order(const Graph& g) {
    auto order = alive_nodes(g);
    std::vector<std::size_t> deg(g.node_count(), 0);
    for (NodeId v : order) deg[v] = g.degree(v);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return deg[a] > deg[b]; });
    return order;
}

std::vector<NodeId> random_failure_order(const Graph& g, std::uint64_t seed) {
    auto order = alive_nodes(g);
    auto rng = make_rng(seed);
    shuffle(std::span<NodeId>(order), rng);
    return order;
}

NodeId select_max_score(const Graph& g, std::span<const double> scores) {
    double best = -1.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v)) best = std::max(best, scores[v]);
    }
    if (best < 0.0) throw ContractError("no alive node to select");
    const double floor = best - kBetweennessTieTolerance * std::max(1.0, best);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_alive(v) && scores[v] >= floor) return v;
    }
    return 0;  // unreachable
}

namespace {

AttackCurve run_recalculated_betweenness(const Graph& source) {
    Graph g = source;
    const auto n = g.alive_count();
    auto curve = empty_curve(n);
    if (n == 0) return curve;
    const double nd = static_cast<double>(n);

    auto scores = betweenness(g);
    BetweennessWorkspace workspace(g.node_count());

    // Component bookkeeping.
    SizeHistogram sizes(n);
    for (const auto& comp : components(g)) sizes.add(comp.size());
    curve.s1[0] = static_cast<double>(sizes.largest()) / nd;
    curve.s2[0] = static_cast<double>(sizes.second()) / nd;

    std::vector<std::uint32_t> mark(g.node_count(), 0);
    std::uint32_t stamp = 0;
    std::vector<NodeId> region, stack;
    curve.removal_order.reserve(n);

    for (std::size_t step = 1; step <= n; ++step) {
        const NodeId target = select_max_score(g, scores);
        curve.removal_order.push_back(target);

        // The component holding the target is the only one whose scores change.
        ++stamp;
        region.clear();
        stack.assign(1, target);
        mark[target] = stamp;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            region.push_back(v);
            for (NodeId w : g.neighbors(v)) {
                if (g.is_alive(w) && mark[w] != stamp) {
                    mark[w] = stamp;
                    stack.push_back(w);
                }
            }
        }
        sizes.remove(region.size());
        g.remove_node(target);
        scores[target] = 0.0;
        region.erase(std::find(region.begin(), region.end(), target));
        std::sort(region.begin(), region.end());

        // Sizes of the pieces the component split into.
        ++stamp;
        for (NodeId start : region) {
            if (mark[start] == stamp) continue;
            std::size_t piece = 0;
            stack.assign(1, start);
            mark[start] = stamp;
            while (!stack.empty()) {
                const auto v = stack.back();
                stack.pop_back();
                ++piece;
                for (NodeId w : g.neighbors(v)) {
                    if (g.is_alive(w) && mark[w] != stamp) {
                        mark[w] = stamp;
                        stack.push_back(w);
                    }
                }
            }
            sizes.add(piece);
        }

        for (NodeId v : region) scores[v] = 0.0;
        workspace.accumulate(g, region, scores);

        curve.s1[step] = static_cast<double>(sizes.largest()) / nd;
        curve.s2[step] = static_cast<double>(sizes.second()) / nd;
    }
    return curve;
}

}  // namespace

std::vector<NodeId> recalculated_betweenness_order(const Graph& g) {
    return run_recalculated_betweenness(g).removal_order;
}

AttackCurve run_attack(const Graph& g, AttackStrategy strategy) {
    switch (strategy.kind) {
        case AttackKind::rb: return run_recalculated_betweenness(g);
        case AttackKind::id: {
            const auto order = initial_degree_order(g);
            return replay_removal_order(g, order);
        }
        case AttackKind::rf: {
            const auto order = random_failure_order(g, strategy.seed);
            return replay_removal_order(g, order);
        }
    }
    throw ContractError("unknown attack kind");
}

AttackCurve average_random_failures(const Graph& g, std::uint64_t seed, std::size_t trials) {
    if (trials == 0) throw ContractError("need at least one RF trial");
    if (trials == 1) return run_attack(g, {AttackKind::rf, seed});
    auto mean = empty_curve(g.alive_count());
    for (std::size_t t = 0; t < trials; ++t) {
        const auto trial_seed = t == 0 ? seed : splitmix64(seed + t);
        const auto curve = run_attack(g, {AttackKind::rf, trial_seed});
        for (std::size_t i = 0; i < curve.s1.size(); ++i) {
            mean.s1[i] += curve.s1[i];
            mean.s2[i] += curve.s2[i];
        }
    }
    const double inv = 1.0 / static_cast<double>(trials);
    for (std::size_t i = 0; i < mean.s1.size(); ++i) {
        mean.s1[i] *= inv;
        mean.s2[i] *= inv;
    }
    return mean;
}

double robustness_index(const AttackCurve& curve) {
    if (curve.n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 1; i <= curve.n; ++i) sum += curve.s1[i];
    return sum / static_cast<double>(curve.n);
}

CriticalFraction critical_fraction(const AttackCurve& curve, QNormalization norm) {
    CriticalFraction out;
    double peak = 0.0;
    for (std::size_t i = 0; i < curve.s2.size(); ++i) {
        if (curve.s2[i] > peak) {
            peak = curve.s2[i];
            out.step = i;
        }
    }
    if (peak == 0.0) {
        out.degenerate = true;
        return out;
    }
    out.q = curve.q(out.step, norm);
    return out;
}

void write_curve(std::ostream& out, const AttackCurve& curve, QNormalization norm) {
    out << "i,q,s1,s2,removed_node\n";
    for (std::size_t i = 0; i < curve.s1.size(); ++i) {
        out << i << ',' << csv::format_double(curve.q(i, norm)) << ','
            << csv::format_double(curve.s1[i]) << ',' << csv::format_double(curve.s2[i]) << ',';
        if (i > 0 && i <= curve.removal_order.size()) out << curve.removal_order[i - 1];
        out << '\n';
    }
}

}  // namespace spatnet
