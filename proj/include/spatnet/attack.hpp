#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "spatnet/graph.hpp"

namespace spatnet {

enum class AttackKind {
    rb,  ///< recalculated betweenness
    id,  ///< initial degree
    rf,  ///< random failure
};

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackStrategy {
    AttackKind kind = AttackKind::rf;
    std::uint64_t seed = 0;  ///< RF only
};

/// How step i maps to a removal fraction.
enum class QNormalization {
    by_n,          ///< q = i / N
    by_n_minus_1,  ///< q = i / (N - 1)
};

std::string_view to_string(QNormalization norm);
QNormalization parse_q_normalization(std::string_view text);

/// Largest / second-largest component sizes after each removal.
/// s1[i], s2[i] hold S1/N and S2/N after i removals, i = 0..N.
struct AttackCurve {
    std::size_t n = 0;
    std::vector<double> s1;
    std::vector<double> s2;
    /// Removed node per step. Empty for averaged curves.
    std::vector<NodeId> removal_order;

    double q(std::size_t step, QNormalization norm = QNormalization::by_n) const;
};

/// Runs the attack on a private copy of the alive mask until every alive
/// node is removed. RB and ID break ties by smallest id.
AttackCurve run_attack(const Graph& g, AttackStrategy strategy);

/// Records the curve for a fixed removal order. `order` must list every
/// alive node exactly once.
AttackCurve replay_removal_order(const Graph& g, std::span<const NodeId> order);

/// Removal orders on their own.
std::vector<NodeId> initial_degree_order(const Graph& g);
std::vector<NodeId> random_failure_order(const Graph& g, std::uint64_t seed);
std::vector<NodeId> recalculated_betweenness_order(const Graph& g);

/// Pointwise mean of `trials` RF curves seeded from `seed`.
AttackCurve average_random_failures(const Graph& g, std::uint64_t seed, std::size_t trials);

/// Relative tolerance under which two betweenness values count as a tie
/// for RB target selection.
inline constexpr double kBetweennessTieTolerance = 1e-9;

/// Index of the RB target: among alive nodes with score within the tie
/// tolerance of the maximum, the smallest id.
NodeId select_max_score(const Graph& g, std::span<const double> scores);

/// R = (1/N) * sum_{i=1..N} s1[i].
double robustness_index(const AttackCurve& curve);

struct CriticalFraction {
    double q = 0.0;
    std::size_t step = 0;
    /// s2 is identically zero; q is reported as 0.
    bool degenerate = false;
};

/// Removal fraction at the first maximum of s2.
CriticalFraction critical_fraction(const AttackCurve& curve,
                                   QNormalization norm = QNormalization::by_n);

/// Curve CSV: header `i,q,s1,s2,removed_node`; removed_node empty at i = 0.
void write_curve(std::ostream& out, const AttackCurve& curve,
                 QNormalization norm = QNormalization::by_n);

}  // namespace spatnet
