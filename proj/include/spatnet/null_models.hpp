#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "spatnet/graph.hpp"

namespace spatnet {

struct RewireSpec {
    std::size_t swaps_per_edge = 10;
    std::uint64_t seed = 0;
};

struct RewireReport {
    std::size_t attempted = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Double-edge swaps: pick two edges (a,b), (c,d) and try (a,d),(c,b) or
/// (a,c),(b,d) with equal probability, rejecting self-loops and duplicates.
/// Runs swaps_per_edge * M attempts. Coordinates are kept. Requires M >= 2
/// over alive nodes; dead nodes stay dead and isolated.
Graph rewire_degree_preserving(const Graph& g, const RewireSpec& spec,
                               RewireReport* report = nullptr);

struct RelocationSpec {
    std::size_t side = 0;
    std::uint64_t seed = 0;
    double spacing = 1.0;
};

struct RelocationReport {
    std::size_t dropped_stubs = 0;
    std::size_t neighbor_links = 0;
    std::size_t long_links = 0;
    double max_link_length = 0.0;
};

/// Moves the degree sequence of `g` onto a side x side lattice and rewires
/// it from stubs:
///  1. alive-node degrees are shuffled onto sites (seeded);
///  2. row-major sweep linking each site to its East, then South neighbour
///     while both hold free stubs;
///  3. remaining stubs are paired nearest-first (ties by smaller site pair)
///     between non-adjacent sites;
///  4. anything still unmatched is dropped and counted.
/// Requires side * side == alive node count.
Graph relocate_to_lattice(const Graph& g, const RelocationSpec& spec,
                          RelocationReport* report = nullptr);

/// {"dropped_stubs":..,"long_link_count":..,"max_link_length":..}
std::string relocation_report_json(const RelocationReport& report);

}  // namespace spatnet
