#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "spatnet/error.hpp"
#include "spatnet/null_models.hpp"
#include "spatnet/proximity.hpp"

using namespace spatnet;

TEST_CASE("rewiring preserves every degree") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = oracle::random_points(20 + trial % 60, rng);
        auto g = build_proximity_graph({pts, Placement::external, std::nullopt},
                                       trial % 2 ? ProximityRule::gg : ProximityRule::rng);
        if (trial % 5 == 0) g.remove_node(0);
        RewireReport report;
        const auto r = rewire_degree_preserving(g, {10, static_cast<std::uint64_t>(trial)}, &report);
        CHECK(degree_sequence(r) == degree_sequence(g));
        CHECK(r.edge_count() == g.edge_count());
        CHECK(report.attempted == 10 * g.edge_count());
        CHECK(report.accepted + report.rejected == report.attempted);
        CHECK(r.coords() == g.coords());
        CHECK(r.is_alive(0) == g.is_alive(0));
    }
}

TEST_CASE("rewiring is seeded and actually moves edges") {
    const auto g = build_rng(place_uniform({0, 0, 1, 1}, 200, 4));
    const auto a = rewire_degree_preserving(g, {10, 1});
    CHECK(a.edges() == rewire_degree_preserving(g, {10, 1}).edges());
    CHECK(a.edges() != g.edges());
    CHECK(a.edges() != rewire_degree_preserving(g, {10, 2}).edges());
}

TEST_CASE("rewiring a single edge is a contract error") {
    CHECK_THROWS_AS(rewire_degree_preserving(Graph::without_coords(2, {{0, 1}}), {10, 0}),
                    ContractError);
}

TEST_CASE("relocating a 2x2 lattice cycle uses only neighbour links") {
    const auto square = build_rng(lattice_points(2));
    RelocationReport report;
    const auto r = relocate_to_lattice(square, {2, 3}, &report);
    CHECK(r.edge_count() == 4);
    CHECK(report.dropped_stubs == 0);
    CHECK(report.long_links == 0);
    CHECK(report.neighbor_links == 4);
    CHECK(degree_sequence(r) == std::vector<std::size_t>{2, 2, 2, 2});
}

TEST_CASE("relocation degree deviation equals dropped stubs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = build_gg(place_uniform({0, 0, 1, 1}, 100, seed));
        RelocationReport report;
        const auto r = relocate_to_lattice(g, {10, seed}, &report);
        auto before = degree_sequence(g);
        auto after = degree_sequence(r);
        std::sort(before.begin(), before.end());
        std::size_t sum_before = 0, sum_after = 0;
        for (auto d : before) sum_before += d;
        for (auto d : after) sum_after += d;
        CHECK(sum_before - sum_after == report.dropped_stubs);
        CHECK(report.neighbor_links + report.long_links == r.edge_count());
        // Every lattice site keeps at most its original stub count.
        std::sort(after.begin(), after.end());
        CHECK(r.node_count() == 100);
        CHECK(r.coords() == lattice_points(10).points);
        double longest = 0.0;
        for (const auto& e : r.edges()) {
            longest = std::max(longest, std::sqrt(squared_distance(r.coord(e.u), r.coord(e.v))));
        }
        CHECK(report.max_link_length == longest);
    }
}

TEST_CASE("relocation requires a square alive count") {
    const auto g = build_rng(place_uniform({0, 0, 1, 1}, 10, 1));
    CHECK_THROWS_AS(relocate_to_lattice(g, {3, 1}), ContractError);
}

TEST_CASE("relocation report JSON carries the advertised keys") {
    RelocationReport report{3, 10, 2, 4.5};
    const auto j = nlohmann::json::parse(relocation_report_json(report));
    CHECK(j.at("dropped_stubs") == 3);
    CHECK(j.at("long_link_count") == 2);
    CHECK(j.at("max_link_length") == 4.5);
}
