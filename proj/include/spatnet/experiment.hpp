#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spatnet/attack.hpp"
#include "spatnet/proximity.hpp"
#include "spatnet/spatial_points.hpp"

namespace spatnet {

enum class Variant { original, rewired, relocated };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

/// Where Pop/Inv placements get their population mesh.
struct MeshSource {
    std::optional<std::filesystem::path> path;  ///< load from file when set
    MeshSynthesis synthesis;                    ///< otherwise synthesise per replicate

    friend bool operator==(const MeshSource&, const MeshSource&) = default;
};

struct ExperimentConfig {
    std::vector<Placement> placements{Placement::population, Placement::inverse,
                                      Placement::uniform};
    std::vector<ProximityRule> kinds{ProximityRule::rng, ProximityRule::gg};
    std::vector<std::size_t> sizes{1024};
    std::vector<AttackKind> attacks{AttackKind::rb, AttackKind::id, AttackKind::rf};
    /// Null-model variants run in addition to the original network.
    std::vector<Variant> null_models;
    std::vector<std::uint64_t> seeds{1};
    MeshSource mesh;
    std::size_t rewire_swaps_per_edge = 10;
    /// RF curves averaged per record; 1 reproduces a single realisation.
    std::size_t rf_trials = 1;
    QNormalization q_normalization = QNormalization::by_n;
    /// Snap uniform placement to mesh cell centres instead of continuous points.
    bool uniform_snap = false;
    bool write_curves = true;
    /// 0 uses the hardware concurrency.
    std::size_t threads = 0;
    std::filesystem::path output = "results";

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ContractError naming the violated requirement.
void validate(const ExperimentConfig& config);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RecordKey {
    Placement placement = Placement::uniform;
    ProximityRule kind = ProximityRule::rng;
    std::size_t n = 0;
    AttackKind attack = AttackKind::rf;
    Variant variant = Variant::original;
    std::uint64_t seed = 0;

    friend bool operator==(const RecordKey&, const RecordKey&) = default;
    friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
};

std::string key_label(const RecordKey& key);

struct Metrics {
    double robustness = 0.0;        ///< R
    double critical_fraction = 0.0; ///< q_c
    bool qc_degenerate = false;
    double modularity = 0.0;        ///< Q
    double sparsity = 0.0;          ///< SI(G_w)
    double grid_ratio = 0.0;
    double avg_degree = 0.0;
    std::size_t community_count = 0;
};

struct ResultRecord {
    RecordKey key;
    Metrics metrics;
};

/// Seed for one purpose inside a cell. Each purpose hashes only the key
/// fields it depends on, so adding cells never perturbs existing ones.
std::uint64_t derive_seed(std::uint64_t config_seed, std::string_view purpose,
                          std::string_view key_fields);

/// Every key the config expands to, in canonical order.
std::vector<RecordKey> expand_grid(const ExperimentConfig& config);

struct CellOutput {
    ResultRecord record;
    AttackCurve curve;
};

/// Builds the network for one key and runs its attack. Pure in (config, key).
CellOutput run_cell(const ExperimentConfig& config, const RecordKey& key);

struct FailedCell {
    RecordKey key;
    std::string error;
};

struct ExperimentSummary {
    std::vector<ResultRecord> records;  ///< key order
    std::vector<FailedCell> failed;
    std::string summary_json;
};

/// Runs the whole grid on a worker pool and writes into config.output:
/// results.csv, scatter_q_r.csv, scatter_si_r.csv, scatter_si_q.csv,
/// summary.json and (optionally) curves/<key>.csv.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Results CSV text for the records, header included.
std::string results_csv(const std::vector<ResultRecord>& records);

inline constexpr const char* kResultsHeader =
    "placement,kind,n,attack,variant,seed,R,qc,Q,SI,grid_ratio,avg_degree,community_count";

}  // namespace spatnet
