// spatnet: point placement, proximity graphs, attacks and experiment grids.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spatnet/attack.hpp"
#include "spatnet/community.hpp"
#include "spatnet/error.hpp"
#include "spatnet/experiment.hpp"
#include "spatnet/null_models.hpp"
#include "spatnet/proximity.hpp"
#include "spatnet/spatial_points.hpp"

namespace fs = std::filesystem;
using namespace spatnet;

namespace {

struct MeshOptions {
    std::string path;
    MeshSynthesis synthesis;
    std::string scatter = "uniform";

    void attach(CLI::App* cmd) {
        cmd->add_option("--mesh", path, "Population mesh CSV (synthesised when omitted)");
        cmd->add_option("--rows", synthesis.rows, "Synthetic mesh rows");
        cmd->add_option("--cols", synthesis.cols, "Synthetic mesh columns");
        cmd->add_option("--cell-size", synthesis.cell_size, "Synthetic mesh cell size");
        cmd->add_option("--total", synthesis.total_population, "Synthetic total population");
        cmd->add_option("--decay", synthesis.decay_rate, "Rank decay rate");
        cmd->add_option("--scatter", scatter, "Rank scatter model")
            ->check(CLI::IsMember({"uniform", "clustered"}));
        cmd->add_option("--centers", synthesis.centers, "Clustered scatter centres");
        cmd->add_option("--jitter", synthesis.jitter, "Clustered scatter jitter");
    }

    PopulationMesh resolve(std::uint64_t seed) {
        if (!path.empty()) return load_mesh(path);
        synthesis.scatter = parse_scatter_model(scatter);
        synthesis.seed = seed;
        return synthesize_mesh(synthesis);
    }
};

std::size_t exact_sqrt(std::size_t n) {
    auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (r * r != n) throw ContractError("n = " + std::to_string(n) + " is not a perfect square");
    return r;
}

Graph read_graph(const std::string& edges, const std::string& coords) {
    if (!fs::exists(edges)) throw ContractError("missing edge file " + edges);
    if (!coords.empty()) {
        if (!fs::exists(coords)) throw ContractError("missing coordinate file " + coords);
        return load_graph(edges, coords);
    }
    auto list = load_edges(edges);
    std::size_t n = 0;
    for (const auto& e : list) n = std::max<std::size_t>(n, e.v + 1);
    return Graph::without_coords(n, std::move(list));
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot write " + path.string());
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial proximity networks: construction, attacks and experiments"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    std::uint64_t seed = 1;

    // generate
    auto* gen = app.add_subcommand("generate", "Place points on a mesh or lattice");
    std::string placement = "uni";
    std::size_t n = 100;
    bool save_generated_mesh = false;
    MeshOptions mesh_opts;
    gen->add_option("--placement", placement, "pop|inv|uni|lattice")->required();
    gen->add_option("--n", n, "Number of points")->required();
    gen->add_option("--seed", seed, "Seed for uniform placement and mesh synthesis");
    gen->add_option("--out", out_dir, "Output directory");
    gen->add_flag("--save-mesh", save_generated_mesh, "Also write the mesh used");
    bool snap = false;
    gen->add_flag("--snap", snap, "Snap uniform points to mesh cell centres");
    mesh_opts.attach(gen);

    // build
    auto* build = app.add_subcommand("build", "Build an RNG or GG from points");
    std::string points_path, kind = "rng", method = "indexed";
    bool check_planar = false;
    build->add_option("--points", points_path, "Point CSV")->required();
    build->add_option("--kind", kind, "rng|gg")->required();
    build->add_option("--method", method, "indexed|literal")
        ->check(CLI::IsMember({"indexed", "literal"}));
    build->add_flag("--check-planar", check_planar, "Fail when the embedding has crossings");
    build->add_option("--out", out_dir, "Output directory");

    // attack
    auto* atk = app.add_subcommand("attack", "Run an attack and write the curve");
    std::string edges_path, coords_path, attack = "rf", qnorm = "n";
    std::size_t trials = 1;
    atk->add_option("--edges", edges_path, "Edge CSV")->required();
    atk->add_option("--coords", coords_path, "Coordinate CSV");
    atk->add_option("--attack", attack, "rb|id|rf")->required();
    atk->add_option("--seed", seed, "RF seed");
    atk->add_option("--trials", trials, "RF realisations to average");
    atk->add_option("--q-norm", qnorm, "n|n-1");
    atk->add_option("--out", out_dir, "Output directory");

    // analyze
    auto* ana = app.add_subcommand("analyze", "Community and spatial metrics of a graph");
    ana->add_option("--edges", edges_path, "Edge CSV")->required();
    ana->add_option("--coords", coords_path, "Coordinate CSV")->required();
    ana->add_option("--seed", seed, "Louvain seed");
    ana->add_option("--out", out_dir, "Output directory");

    // nullmodel
    auto* nul = app.add_subcommand("nullmodel", "Rewire or relocate a graph");
    std::string model;
    std::size_t swaps = 10;
    std::size_t side = 0;
    nul->add_option("--edges", edges_path, "Edge CSV")->required();
    nul->add_option("--coords", coords_path, "Coordinate CSV")->required();
    nul->add_option("--model", model, "rewire|relocate")
        ->required()
        ->check(CLI::IsMember({"rewire", "relocate"}));
    nul->add_option("--seed", seed, "Seed");
    nul->add_option("--swaps", swaps, "Swap attempts per edge (rewire)");
    nul->add_option("--side", side, "Lattice side (relocate, default sqrt N)");
    nul->add_option("--out", out_dir, "Output directory");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a configured experiment grid");
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> threads;
    bool out_given = false;
    exp->add_option("--config", config_path, "Experiment JSON")->required();
    exp->add_option("--out", out_dir, "Output directory (overrides config)")
        ->each([&](const std::string&) { out_given = true; });
    exp->add_option("--seed", seed_override, "Run a single replicate with this seed");
    exp->add_option("--threads", threads, "Worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        const fs::path out = out_dir;

        if (*gen) {
            const auto where = parse_placement(placement);
            PointSet points;
            std::optional<PopulationMesh> mesh;
            switch (where) {
                case Placement::lattice: points = lattice_points(exact_sqrt(n)); break;
                case Placement::population: mesh = mesh_opts.resolve(seed); points = place_population(*mesh, n); break;
                case Placement::inverse: mesh = mesh_opts.resolve(seed); points = place_inverse(*mesh, n); break;
                case Placement::uniform:
                    mesh = mesh_opts.resolve(seed);
                    points = snap ? place_uniform_centers(*mesh, n, seed)
                                  : place_uniform(mesh->bounds(), n, seed);
                    break;
                case Placement::external: throw ContractError("cannot generate external placement");
            }
            save_points(out / "points.csv", points.points);
            if (save_generated_mesh && mesh) save_mesh(out / "mesh.csv", *mesh);
        } else if (*build) {
            if (!fs::exists(points_path)) throw ContractError("missing point file " + points_path);
            const auto points = load_points(points_path);
            const auto g = build_proximity_graph(
                points, parse_proximity_rule(kind),
                method == "literal" ? Construction::literal : Construction::indexed);
            if (check_planar) {
                const auto report = check_planar_embedding(g);
                if (!report.planar) throw ContractError("embedding is not planar");
            }
            save_edges(out / "edges.csv", g.edges());
        } else if (*atk) {
            const auto g = read_graph(edges_path, coords_path);
            const auto kind_of = parse_attack_kind(attack);
            const auto norm = parse_q_normalization(qnorm);
            const auto curve = (kind_of == AttackKind::rf && trials > 1)
                                   ? average_random_failures(g, seed, trials)
                                   : run_attack(g, {kind_of, seed});
            std::ofstream file(out / "curve.csv", std::ios::binary);
            write_curve(file, curve, norm);
            const auto qc = critical_fraction(curve, norm);
            nlohmann::json summary{{"R", robustness_index(curve)},
                                   {"qc", qc.q},
                                   {"qc_degenerate", qc.degenerate}};
            std::cout << summary.dump() << '\n';
        } else if (*ana) {
            const auto g = read_graph(edges_path, coords_path);
            const auto result = louvain(g, seed);
            std::ofstream file(out / "partition.csv", std::ios::binary);
            write_partition(file, result.partition);
            nlohmann::json metrics{{"Q", modularity(g, result.partition)},
                                   {"community_count", result.partition.community_count},
                                   {"louvain_trace", result.trace},
                                   {"SI", sparsity_index(g)},
                                   {"grid_ratio", grid_like_ratio(g)},
                                   {"avg_degree", average_degree(g)}};
            write_file(out / "metrics.json", metrics.dump(2) + "\n");
            std::cout << metrics.dump() << '\n';
        } else if (*nul) {
            const auto g = read_graph(edges_path, coords_path);
            if (model == "rewire") {
                RewireReport report;
                const auto r = rewire_degree_preserving(g, {swaps, seed}, &report);
                save_graph(out / "edges.csv", out / "points.csv", r);
                nlohmann::json j{{"attempted", report.attempted},
                                 {"accepted", report.accepted},
                                 {"rejected", report.rejected}};
                write_file(out / "report.json", j.dump(2) + "\n");
            } else {
                RelocationReport report;
                const auto lattice_side = side ? side : exact_sqrt(g.alive_count());
                const auto r = relocate_to_lattice(g, {lattice_side, seed}, &report);
                save_graph(out / "edges.csv", out / "points.csv", r);
                write_file(out / "report.json", relocation_report_json(report) + "\n");
            }
        } else if (*exp) {
            auto config = load_config(config_path);
            if (out_given) config.output = out_dir;
            if (seed_override) config.seeds = {*seed_override};
            if (threads) config.threads = *threads;
            const auto summary = run_experiment(config);
            std::cout << "cells: " << summary.records.size() + summary.failed.size()
                      << ", failed: " << summary.failed.size() << ", output: "
                      << config.output.string() << '\n';
            if (!summary.failed.empty()) return 3;
        }
    } catch (const ParseError& e) {
        std::cerr << "spatnet: parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "spatnet: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
