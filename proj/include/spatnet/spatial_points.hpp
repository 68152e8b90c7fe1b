#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "spatnet/geometry.hpp"

namespace spatnet {

enum class Placement { population, inverse, uniform, lattice, external };

std::string_view to_string(Placement placement);
/// Accepts the short CLI spellings: pop, inv, uni, lattice, external.
Placement parse_placement(std::string_view text);

/// Gridded population counts. Cell (row, col) is centred at
/// ((col + 0.5) * cell_size, (row + 0.5) * cell_size).
class PopulationMesh {
public:
    PopulationMesh(std::size_t rows, std::size_t cols, double cell_size = 500.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t cell_count() const { return counts_.size(); }
    double cell_size() const { return cell_size_; }

    std::uint64_t at(std::size_t row, std::size_t col) const { return counts_[index(row, col)]; }
    void set(std::size_t row, std::size_t col, std::uint64_t population) {
        counts_[index(row, col)] = population;
    }

    /// Row-major view of all counts.
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    Point cell_center(std::size_t row, std::size_t col) const;
    Point cell_center(std::size_t flat_index) const {
        return cell_center(flat_index / cols_, flat_index % cols_);
    }
    BoundingBox bounds() const;
    std::size_t nonzero_count() const;
    std::uint64_t total_population() const;

    friend bool operator==(const PopulationMesh&, const PopulationMesh&) = default;

private:
    std::size_t index(std::size_t row, std::size_t col) const;

    std::size_t rows_;
    std::size_t cols_;
    double cell_size_;
    std::vector<std::uint64_t> counts_;
};

/// Mesh CSV: first line `rows,cols,cell_size`, then `row,col,population`
/// per cell. Zero cells may be omitted. An optional literal header line
/// "rows,cols,cell_size" before the values is tolerated.
PopulationMesh parse_mesh(std::istream& in);
PopulationMesh load_mesh(const std::filesystem::path& path);
/// Canonical form: nonzero cells only, row-major.
void write_mesh(std::ostream& out, const PopulationMesh& mesh);
void save_mesh(const std::filesystem::path& path, const PopulationMesh& mesh);

/// How ranked populations are laid out on the grid.
enum class ScatterModel {
    uniform,    ///< ranks go to cells in a seeded uniform random order
    clustered,  ///< ranks follow a noisy multi-centre attractiveness field
};

std::string_view to_string(ScatterModel model);
ScatterModel parse_scatter_model(std::string_view text);

struct MeshSynthesis {
    std::size_t rows = 480;
    std::size_t cols = 480;
    double cell_size = 500.0;
    std::uint64_t total_population = 5'000'000;
    double decay_rate = 1e-3;
    std::uint64_t seed = 0;
    ScatterModel scatter = ScatterModel::uniform;
    // Clustered model only.
    std::size_t centers = 6;
    double jitter = 0.35;

    friend bool operator==(const MeshSynthesis&, const MeshSynthesis&) = default;
};

/// Rank-ordered populations: entry r is round(A * exp(-decay_rate * r)) with
/// A chosen so the unrounded profile sums to `total_population` over `cells`.
std::vector<std::uint64_t> exponential_rank_profile(std::uint64_t total_population,
                                                    std::size_t cells, double decay_rate);

PopulationMesh synthesize_mesh(const MeshSynthesis& spec);

struct PointSet {
    std::vector<Point> points;
    Placement provenance = Placement::external;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return points.size(); }
};

/// Throws ContractError on non-finite coordinates or exact duplicates.
void validate_point_set(const PointSet& points);

/// Centres of the N most-populated nonzero cells. Ties go to the smaller
/// (row, col).
PointSet place_population(const PopulationMesh& mesh, std::size_t n);
/// Centres of the N least-populated nonzero cells: the reverse of the
/// population ranking, so ties go to the larger (row, col).
PointSet place_inverse(const PopulationMesh& mesh, std::size_t n);
/// N continuous i.i.d. uniform points in `region`.
PointSet place_uniform(const BoundingBox& region, std::size_t n, std::uint64_t seed);
/// N distinct cell centres drawn uniformly, population ignored.
PointSet place_uniform_centers(const PopulationMesh& mesh, std::size_t n, std::uint64_t seed);
/// side x side grid, row-major, origin at (0, 0).
PointSet lattice_points(std::size_t side, double spacing = 1.0);

/// PointSet CSV: header `id,x,y`, ids 0..N-1 in placement order.
PointSet parse_points(std::istream& in);
PointSet load_points(const std::filesystem::path& path);
void write_points(std::ostream& out, const std::vector<Point>& points);
void save_points(const std::filesystem::path& path, const std::vector<Point>& points);

}  // namespace spatnet
