#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spatnet/error.hpp"
#include "spatnet/experiment.hpp"

using namespace spatnet;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const fs::path& out) {
    ExperimentConfig c;
    c.placements = {Placement::population, Placement::inverse, Placement::uniform, Placement::lattice};
    c.sizes = {100};
    c.null_models = {Variant::rewired, Variant::relocated};
    c.seeds = {1, 2};
    c.mesh.synthesis.rows = 60;
    c.mesh.synthesis.cols = 60;
    c.mesh.synthesis.total_population = 100'000;
    c.mesh.synthesis.decay_rate = 0.01;
    c.mesh.synthesis.scatter = ScatterModel::clustered;
    c.output = out;
    return c;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("spatnet_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::set<std::string> key_columns(const std::string& csv_text) {
    std::set<std::string> keys;
    std::istringstream in(csv_text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::size_t pos = 0;
        for (int i = 0; i < 6; ++i) pos = line.find(',', pos) + 1;
        keys.insert(line.substr(0, pos - 1));
    }
    return keys;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
    auto c = small_config("out/dir");
    c.mesh.path = "meshes/city.csv";
    c.q_normalization = QNormalization::by_n_minus_1;
    c.rf_trials = 4;
    c.uniform_snap = true;
    c.mesh.synthesis.jitter = 0.123456789012345;
    c.seeds = {0, 18446744073709551615ULL};
    const auto text = config_to_json(c);
    const auto back = config_from_json(text);
    CHECK(back == c);
    CHECK(config_to_json(back) == text);
    CHECK(config_from_json("{}") == ExperimentConfig{});
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(config_from_json("{"), ContractError);
    CHECK_THROWS_AS(config_from_json(R"({"placement": ["pop"]})"), ContractError);
    CHECK_THROWS_AS(config_from_json(R"({"kinds": ["delaunay"]})"), ContractError);
    CHECK_THROWS_AS(config_from_json(R"({"sizes": "many"})"), ContractError);
}

TEST_CASE("validation names the violated requirement") {
    ExperimentConfig c;
    CHECK_NOTHROW(validate(c));
    c.placements = {Placement::lattice};
    c.sizes = {1000};
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("perfect square"), ContractError);
    c.placements = {Placement::uniform};
    c.null_models = {Variant::relocated};
    CHECK_THROWS_AS(validate(c), ContractError);
    c.null_models = {Variant::rewired};
    CHECK_NOTHROW(validate(c));
    c.seeds.clear();
    CHECK_THROWS_AS(validate(c), ContractError);
    c.seeds = {1, 1};
    CHECK_THROWS_AS(validate(c), ContractError);
}

TEST_CASE("grid expansion is complete and canonical") {
    const auto c = small_config("unused");
    const auto keys = expand_grid(c);
    CHECK(keys.size() == 4 * 2 * 1 * 3 * 3 * 2);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::set<RecordKey>(keys.begin(), keys.end()).size() == keys.size());
}

TEST_CASE("seed derivation is stable and purpose specific") {
    const auto a = derive_seed(1, "points", "uni|1024");
    CHECK(a == derive_seed(1, "points", "uni|1024"));
    CHECK(a != derive_seed(2, "points", "uni|1024"));
    CHECK(a != derive_seed(1, "rewire", "uni|1024"));
    CHECK(a != derive_seed(1, "points", "uni|100"));
}

TEST_CASE("cells are pure in their key") {
    const auto c = small_config("unused");
    const RecordKey key{Placement::population, ProximityRule::gg, 100, AttackKind::rb, Variant::rewired, 2};
    const auto first = run_cell(c, key);
    const auto second = run_cell(c, key);
    CHECK(first.curve.s1 == second.curve.s1);
    CHECK(results_csv({first.record}) == results_csv({second.record}));
    CHECK(first.record.metrics.avg_degree > 0.0);
}

TEST_CASE("both proximity kinds share one point set per placement and replicate") {
    const auto c = small_config("unused");
    const RecordKey rng_key{Placement::uniform, ProximityRule::rng, 100, AttackKind::id, Variant::original, 1};
    auto gg_key = rng_key;
    gg_key.kind = ProximityRule::gg;
    // GG contains RNG, so it never has fewer links on the same points.
    CHECK(run_cell(c, gg_key).record.metrics.avg_degree >= run_cell(c, rng_key).record.metrics.avg_degree);
}

TEST_CASE("experiment output is deterministic and independent of thread count") {
    const auto dir_a = scratch("exp_a");
    const auto dir_b = scratch("exp_b");
    auto ca = small_config(dir_a);
    ca.threads = 1;
    auto cb = small_config(dir_b);
    cb.threads = 3;
    const auto sa = run_experiment(ca);
    const auto sb = run_experiment(cb);
    CHECK(sa.failed.empty());
    CHECK(sa.records.size() == expand_grid(ca).size());

    const auto results = slurp(dir_a / "results.csv");
    CHECK(results == slurp(dir_b / "results.csv"));
    CHECK(results.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
    CHECK(results.find('\r') == std::string::npos);

    const auto keys = key_columns(results);
    CHECK(keys.size() == sa.records.size());
    for (const char* name : {"scatter_q_r.csv", "scatter_si_r.csv", "scatter_si_q.csv"}) {
        const auto scatter = key_columns(slurp(dir_a / name));
        CHECK(std::includes(keys.begin(), keys.end(), scatter.begin(), scatter.end()));
    }
    std::size_t curves = 0;
    for (const auto& entry : fs::directory_iterator(dir_a / "curves")) {
        (void)entry;
        ++curves;
    }
    CHECK(curves == sa.records.size());

    const auto summary = nlohmann::json::parse(slurp(dir_a / "summary.json"));
    CHECK(summary.at("cells") == sa.records.size());
    CHECK(summary.at("failed").empty());
    CHECK_FALSE(summary.at("correlations").empty());
    CHECK_FALSE(summary.at("anova").empty());
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("failing cells are reported and the run continues") {
    const auto dir = scratch("exp_fail");
    fs::create_directories(dir);
    {
        std::ofstream mesh(dir / "tiny_mesh.csv");
        mesh << "4,4,500\n0,0,5\n1,1,3\n2,2,1\n";
    }
    ExperimentConfig c;
    c.placements = {Placement::population, Placement::uniform};
    c.kinds = {ProximityRule::rng};
    c.sizes = {16};
    c.attacks = {AttackKind::id};
    c.mesh.path = dir / "tiny_mesh.csv";
    c.output = dir / "out";
    const auto summary = run_experiment(c);
    REQUIRE(summary.failed.size() == 1);
    CHECK(summary.failed[0].key.placement == Placement::population);
    CHECK(summary.failed[0].error.find("16") != std::string::npos);
    CHECK(summary.records.size() == 1);
    const auto json = nlohmann::json::parse(summary.summary_json);
    CHECK(json.at("failed").size() == 1);
    fs::remove_all(dir);
}
