#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spatnet/graph.hpp"

namespace spatnet {

/// Node -> community. Dead nodes carry kUnassigned; community ids are dense.
struct Partition {
    static constexpr std::int32_t kUnassigned = -1;

    std::vector<std::int32_t> assignment;
    std::size_t community_count = 0;
};

/// Relabels arbitrary labels densely in order of first appearance over
/// alive nodes; dead nodes become unassigned.
Partition make_partition(const Graph& g, const std::vector<std::int64_t>& labels);

/// Q = (1/2M) sum_ij [A_ij - k_i k_j / 2M] delta(c_i, c_j) over alive nodes.
/// Throws UndefinedMetric when M = 0.
double modularity(const Graph& g, const Partition& partition);

struct LouvainResult {
    Partition partition;
    /// Modularity of the flattened partition at the start and after each
    /// aggregation level.
    std::vector<double> trace;
};

/// Louvain local moving + aggregation at resolution 1. Node visiting order
/// is reshuffled from `seed` on each level.
LouvainResult louvain(const Graph& g, std::uint64_t seed);

enum class WeightOrder { ascending, descending };

/// Order of weight classes in the sparsity sum. The trailing-frequency
/// factor (f_j + 2 f_{j+1} + ... + 2 f_k) depends on it.
inline constexpr WeightOrder kSparsityWeightOrder = WeightOrder::ascending;
/// Decimal places kept when grouping normalised link lengths into classes.
inline constexpr int kWeightQuantizationDigits = 9;

struct WeightClass {
    double weight = 0.0;
    std::size_t frequency = 0;
};

struct WeightedEdgeProfile {
    std::vector<WeightClass> classes;  ///< strictly increasing weight
    double total_weight = 0.0;         ///< T1 = sum w_j f_j
    std::size_t edge_count = 0;
};

/// Link lengths divided by the longest link, grouped after quantisation.
/// Throws UndefinedMetric when there are no alive edges.
WeightedEdgeProfile weighted_edge_profile(const Graph& g);

/// SI = 1 - (1 / (N^2 T1)) sum_j w_j f_j (f_j + 2 sum_{l>j} f_l).
double sparsity_index(const WeightedEdgeProfile& profile, std::size_t n,
                      WeightOrder order = kSparsityWeightOrder);
double sparsity_index(const Graph& g);

/// Fraction of alive nodes of degree 4 whose four neighbours have degree 4.
double grid_like_ratio(const Graph& g);

/// Partition CSV: header `node,community`, alive nodes only.
void write_partition(std::ostream& out, const Partition& partition);

}  // namespace spatnet
