#include "spatnet/spatial_points.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "spatnet/csv.hpp"
#include "spatnet/error.hpp"
#include "spatnet/random.hpp"

namespace spatnet {

std::string_view to_string(Placement placement) {
    switch (placement) {
        case Placement::population: return "pop";
        case Placement::inverse: return "inv";
        case Placement::uniform: return "uni";
        case Placement::lattice: return "lattice";
        case Placement::external: return "external";
    }
    return "external";
}

Placement parse_placement(std::string_view text) {
    if (text == "pop") return Placement::population;
    if (text == "inv") return Placement::inverse;
    if (text == "uni") return Placement::uniform;
    if (text == "lattice") return Placement::lattice;
    if (text == "external") return Placement::external;
    throw ContractError("unknown placement '" + std::string(text) +
                        "' (expected pop|inv|uni|lattice)");
}

std::string_view to_string(ScatterModel model) {
    return model == ScatterModel::uniform ? "uniform" : "clustered";
}

ScatterModel parse_scatter_model(std::string_view text) {
    if (text == "uniform") return ScatterModel::uniform;
    if (text == "clustered") return ScatterModel::clustered;
    throw ContractError("unknown scatter model '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// PopulationMesh

PopulationMesh::PopulationMesh(std::size_t rows, std::size_t cols, double cell_size)
    : rows_(rows), cols_(cols), cell_size_(cell_size) {
    if (rows == 0 || cols == 0) throw ContractError("mesh needs at least one row and column");
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw ContractError("mesh cell size must be positive");
    }
    counts_.assign(rows * cols, 0);
}

std::size_t PopulationMesh::index(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
        throw ContractError("mesh cell (" + std::to_string(row) + "," + std::to_string(col) +
                            ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return row * cols_ + col;
}

Point PopulationMesh::cell_center(std::size_t row, std::size_t col) const {
    return {(static_cast<double>(col) + 0.5) * cell_size_,
            (static_cast<double>(row) + 0.5) * cell_size_};
}

BoundingBox PopulationMesh::bounds() const {
    return {0.0, 0.0, static_cast<double>(cols_) * cell_size_,
            static_cast<double>(rows_) * cell_size_};
}

std::size_t PopulationMesh::nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c != 0; }));
}

std::uint64_t PopulationMesh::total_population() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

// ---------------------------------------------------------------------------
// Mesh CSV

PopulationMesh parse_mesh(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() {
        while (csv::read_line(in, line)) {
            ++line_no;
            if (!line.empty()) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError(1, "empty mesh file");
    if (line == "rows,cols,cell_size" && !next_line()) {
        throw ParseError(line_no + 1, "missing mesh dimensions");
    }
    auto header = csv::split(line);
    if (header.size() != 3) throw ParseError(line_no, "expected rows,cols,cell_size");
    const auto rows = csv::parse_uint(header[0], line_no);
    const auto cols = csv::parse_uint(header[1], line_no);
    const auto cell_size = csv::parse_double(header[2], line_no);
    if (rows == 0 || cols == 0) throw ParseError(line_no, "mesh dimensions must be positive");
    if (!(cell_size > 0.0)) throw ParseError(line_no, "cell size must be positive");

    PopulationMesh mesh(rows, cols, cell_size);
    std::vector<bool> seen(rows * cols, false);
    while (next_line()) {
        auto fields = csv::split(line);
        if (fields.size() != 3) throw ParseError(line_no, "expected row,col,population");
        const auto row = csv::parse_uint(fields[0], line_no);
        const auto col = csv::parse_uint(fields[1], line_no);
        const auto pop = csv::parse_uint(fields[2], line_no);
        if (row >= rows || col >= cols) {
            throw ParseError(line_no, "cell (" + std::to_string(row) + "," + std::to_string(col) +
                                          ") outside declared " + std::to_string(rows) + "x" +
                                          std::to_string(cols) + " mesh");
        }
        const auto flat = row * cols + col;
        if (seen[flat]) {
            throw ParseError(line_no, "duplicate cell (" + std::to_string(row) + "," +
                                          std::to_string(col) + ")");
        }
        seen[flat] = true;
        mesh.set(row, col, pop);
    }
    return mesh;
}

PopulationMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot open mesh file " + path.string());
    return parse_mesh(in);
}

void write_mesh(std::ostream& out, const PopulationMesh& mesh) {
    out << mesh.rows() << ',' << mesh.cols() << ',' << csv::format_double(mesh.cell_size())
        << '\n';
    for (std::size_t r = 0; r < mesh.rows(); ++r) {
        for (std::size_t c = 0; c < mesh.cols(); ++c) {
            if (const auto pop = mesh.at(r, c); pop != 0) {
                out << r << ',' << c << ',' << pop << '\n';
            }
        }
    }
}

void save_mesh(const std::filesystem::path& path, const PopulationMesh& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write mesh file " + path.string());
    write_mesh(out, mesh);
}

// ---------------------------------------------------------------------------
// Synthesis

std::vector<std::uint64_t> exponential_rank_profile(std::uint64_t total_population,
                                                    std::size_t cells, double decay_rate) {
    if (cells == 0) throw ContractError("rank profile needs at least one cell");
    if (!(decay_rate > 0.0)) throw ContractError("decay rate must be positive");
    if (total_population == 0) throw ContractError("total population must be positive");

    // Geometric series normalisation, written with expm1 so the flat limit
    // (decay -> 0) stays accurate.
    const double k = static_cast<double>(cells);
    const double amplitude = static_cast<double>(total_population) * std::expm1(-decay_rate) /
                             std::expm1(-decay_rate * k);
    std::vector<std::uint64_t> profile(cells);
    for (std::size_t r = 0; r < cells; ++r) {
        const double value = amplitude * std::exp(-decay_rate * static_cast<double>(r));
        profile[r] = static_cast<std::uint64_t>(std::llround(value));
    }
    return profile;
}

namespace {

// Cell order (most attractive first) for the clustered model: a few urban
// centres with random reach, attractiveness falling linearly with distance
// in units of each centre's reach, plus uniform jitter.
std::vector<std::size_t> clustered_cell_order(const MeshSynthesis& spec, Rng& rng) {
    const auto rows = spec.rows;
    const auto cols = spec.cols;
    const double extent = static_cast<double>(std::min(rows, cols));
    const std::size_t centers = std::max<std::size_t>(spec.centers, 1);

    struct Center {
        double row;
        double col;
        double reach;
    };
    std::vector<Center> sites;
    sites.reserve(centers);
    for (std::size_t c = 0; c < centers; ++c) {
        const double row = (0.1 + 0.8 * uniform01(rng)) * static_cast<double>(rows);
        const double col = (0.1 + 0.8 * uniform01(rng)) * static_cast<double>(cols);
        const double reach = extent * (0.04 + 0.08 * uniform01(rng));
        sites.push_back({row, col, reach});
    }

    std::vector<double> score(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& s : sites) {
                const double dr = static_cast<double>(r) + 0.5 - s.row;
                const double dc = static_cast<double>(c) + 0.5 - s.col;
                best = std::max(best, -std::sqrt(dr * dr + dc * dc) / s.reach);
            }
            score[r * cols + c] = best + spec.jitter * uniform01(rng);
        }
    }
    std::vector<std::size_t> order(rows * cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    return order;
}

}  // namespace

PopulationMesh synthesize_mesh(const MeshSynthesis& spec) {
    if (spec.rows == 0 || spec.cols == 0) throw ContractError("mesh needs rows*cols >= 1");
    PopulationMesh mesh(spec.rows, spec.cols, spec.cell_size);
    const auto cells = spec.rows * spec.cols;
    const auto profile = exponential_rank_profile(spec.total_population, cells, spec.decay_rate);

    auto rng = make_rng(spec.seed);
    std::vector<std::size_t> order;
    if (spec.scatter == ScatterModel::uniform) {
        order.resize(cells);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(std::span<std::size_t>(order), rng);
    } else {
        order = clustered_cell_order(spec, rng);
    }
    for (std::size_t rank = 0; rank < cells; ++rank) {
        const auto flat = order[rank];
        mesh.set(flat / spec.cols, flat % spec.cols, profile[rank]);
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Placements

void validate_point_set(const PointSet& points) {
    for (const auto& p : points.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw ContractError("point set contains a non-finite coordinate");
        }
    }
    std::vector<Point> sorted = points.points;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
        std::ostringstream msg;
        msg << "duplicate point (" << csv::format_double(dup->x) << ", "
            << csv::format_double(dup->y) << ")";
        throw ContractError(msg.str());
    }
}

namespace {

enum class RankDirection { descending, ascending };

PointSet place_ranked(const PopulationMesh& mesh, std::size_t n, RankDirection direction,
                      Placement provenance) {
    std::vector<std::size_t> nonzero;
    const auto& counts = mesh.counts();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != 0) nonzero.push_back(i);
    }
    if (nonzero.size() < n) {
        throw ContractError("placement needs " + std::to_string(n) +
                            " nonzero-population cells but the mesh has " +
                            std::to_string(nonzero.size()));
    }
    // Descending rank breaks ties by ascending (row, col); the ascending
    // rank is its exact reverse, so Pop and Inv never overlap while
    // 2N <= nonzero cells.
    std::stable_sort(nonzero.begin(), nonzero.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    if (direction == RankDirection::ascending) std::reverse(nonzero.begin(), nonzero.end());

    PointSet out;
    out.provenance = provenance;
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.points.push_back(mesh.cell_center(nonzero[i]));
    return out;
}

}  // namespace

PointSet place_population(const PopulationMesh& mesh, std::size_t n) {
    return place_ranked(mesh, n, RankDirection::descending, Placement::population);
}

PointSet place_inverse(const PopulationMesh& mesh, std::size_t n) {
    return place_ranked(mesh, n, RankDirection::ascending, Placement::inverse);
}

PointSet place_uniform(const BoundingBox& region, std::size_t n, std::uint64_t seed) {
    if (!(region.width() > 0.0) || !(region.height() > 0.0)) {
        throw ContractError("uniform placement needs a region with positive area");
    }
    auto rng = make_rng(seed);
    PointSet out;
    out.provenance = Placement::uniform;
    out.seed = seed;
    out.points.reserve(n);
    std::set<Point> taken;
    while (out.points.size() < n) {
        const Point p{region.min_x + uniform01(rng) * region.width(),
                      region.min_y + uniform01(rng) * region.height()};
        if (taken.insert(p).second) out.points.push_back(p);
    }
    return out;
}

PointSet place_uniform_centers(const PopulationMesh& mesh, std::size_t n, std::uint64_t seed) {
    if (n > mesh.cell_count()) {
        throw ContractError("snapped uniform placement needs " + std::to_string(n) +
                            " cells but the mesh has " + std::to_string(mesh.cell_count()));
    }
    auto rng = make_rng(seed);
    // Partial Fisher-Yates over cell indices.
    std::vector<std::size_t> cells(mesh.cell_count());
    std::iota(cells.begin(), cells.end(), std::size_t{0});
    PointSet out;
    out.provenance = Placement::uniform;
    out.seed = seed;
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, cells.size() - i));
        std::swap(cells[i], cells[j]);
        out.points.push_back(mesh.cell_center(cells[i]));
    }
    return out;
}

PointSet lattice_points(std::size_t side, double spacing) {
    if (side < 2) throw ContractError("lattice side must be at least 2");
    if (!(spacing > 0.0)) throw ContractError("lattice spacing must be positive");
    PointSet out;
    out.provenance = Placement::lattice;
    out.points.reserve(side * side);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            out.points.push_back({static_cast<double>(c) * spacing,
                                  static_cast<double>(r) * spacing});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PointSet CSV

PointSet parse_points(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!csv::read_line(in, line)) throw ParseError(1, "empty point file");
    ++line_no;
    if (line != "id,x,y") throw ParseError(line_no, "expected header 'id,x,y'");

    PointSet out;
    while (csv::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = csv::split(line);
        if (fields.size() != 3) throw ParseError(line_no, "expected id,x,y");
        const auto id = csv::parse_uint(fields[0], line_no);
        if (id != out.points.size()) {
            throw ParseError(line_no, "expected id " + std::to_string(out.points.size()));
        }
        out.points.push_back({csv::parse_double(fields[1], line_no),
                              csv::parse_double(fields[2], line_no)});
    }
    return out;
}

PointSet load_points(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractError("cannot open point file " + path.string());
    return parse_points(in);
}

void write_points(std::ostream& out, const std::vector<Point>& points) {
    out << "id,x,y\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << i << ',' << csv::format_double(points[i].x) << ','
            << csv::format_double(points[i].y) << '\n';
    }
}

void save_points(const std::filesystem::path& path, const std::vector<Point>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write point file " + path.string());
    write_points(out, points);
}

}  // namespace spatnet
