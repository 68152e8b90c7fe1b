#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spatnet/betweenness.hpp"
#include "spatnet/error.hpp"
#include "spatnet/graph.hpp"

using namespace spatnet;

namespace {

Graph path3() { return Graph::without_coords(3, {{0, 1}, {1, 2}}); }

}  // namespace

TEST_CASE("graph construction validates simplicity") {
    CHECK_THROWS_AS(Graph::without_coords(3, {{1, 1}}), ContractError);
    CHECK_THROWS_AS(Graph::without_coords(3, {{0, 1}, {1, 0}}), ContractError);
    CHECK_THROWS_AS(Graph::without_coords(3, {{0, 3}}), ContractError);
    const auto g = Graph::without_coords(4, {{2, 1}, {0, 3}});
    CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}});
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("triangle plus isolated node") {
    const auto g = Graph::without_coords(4, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(3) == 0);
    const auto dist = degree_distribution(g);
    CHECK(dist.counts.at(2) == 3);
    CHECK(dist.counts.at(0) == 1);
    CHECK(average_degree(g) == 1.5);
    const auto comps = components(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<NodeId>{0, 1, 2});
    CHECK(comps[1] == std::vector<NodeId>{3});
}

TEST_CASE("node removal only changes the alive view") {
    auto g = Graph::without_coords(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    g.remove_node(2);
    CHECK(g.alive_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(2) == 0);
    CHECK(g.edges().size() == 4);
    CHECK(g.alive_edges() == std::vector<Edge>{{0, 1}, {3, 4}});
    const auto comps = components(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<NodeId>{0, 1});
    g.restore_all();
    CHECK(components(g).size() == 1);
}

TEST_CASE("degree sum is twice the edge count") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracle::random_graph(25, 0.15, rng);
        for (NodeId v = 0; v < 25; v += 4) g.remove_node(v);
        std::size_t sum = 0;
        for (auto d : degree_sequence(g)) sum += d;
        CHECK(sum == 2 * g.edge_count());
        std::size_t members = 0;
        for (const auto& c : components(g)) members += c.size();
        CHECK(members == g.alive_count());
    }
}

TEST_CASE("average degree of an empty graph is an error") {
    CHECK_THROWS_AS(average_degree(Graph::without_coords(0, {})), UndefinedMetric);
}

TEST_CASE("edge CSV round-trip and validation") {
    const auto g = Graph::without_coords(5, {{0, 1}, {1, 4}, {2, 3}});
    std::ostringstream out;
    write_edges(out, g.edges());
    CHECK(out.str() == "u,v\n0,1\n1,4\n2,3\n");
    std::istringstream in(out.str());
    CHECK(parse_edges(in) == g.edges());

    std::istringstream reversed("u,v\n1,0\n");
    CHECK_THROWS_AS(parse_edges(reversed), ParseError);
    std::istringstream unsorted("u,v\n1,2\n0,1\n");
    CHECK_THROWS_AS(parse_edges(unsorted), ParseError);
    std::istringstream dup("u,v\n0,1\n0,1\n");
    CHECK_THROWS_AS(parse_edges(dup), ParseError);
}

TEST_CASE("betweenness of small graphs") {
    CHECK(betweenness(path3()) == std::vector<double>{0.0, 1.0, 0.0});

    const auto star = Graph::without_coords(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(betweenness(star)[0] == 6.0);  // C(4, 2) leaf pairs

    const auto cycle4 = Graph::without_coords(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    for (double b : betweenness(cycle4)) CHECK(b == 0.5);

    auto broken = path3();
    broken.remove_node(1);
    for (double b : betweenness(broken)) CHECK(b == 0.0);
}

TEST_CASE("betweenness matches shortest-path enumeration on random graphs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + trial % 26;
        auto g = oracle::random_graph(n, 0.12 + 0.01 * (trial % 7), rng);
        if (trial % 3 == 0) g.remove_node(static_cast<NodeId>(trial % n));
        const auto fast = betweenness(g);
        const auto slow = oracle::betweenness(g);
        for (std::size_t v = 0; v < n; ++v) CHECK(fast[v] == doctest::Approx(slow[v]).epsilon(1e-12));
    }
}

TEST_CASE("workspace accumulation over ascending sources reproduces betweenness") {
    std::mt19937_64 rng(5);
    const auto g = oracle::random_graph(30, 0.1, rng);
    std::vector<NodeId> sources(30);
    for (NodeId v = 0; v < 30; ++v) sources[v] = v;
    std::vector<double> scores(30, 0.0);
    BetweennessWorkspace ws(30);
    ws.accumulate(g, sources, scores);
    CHECK(scores == betweenness(g));
}
