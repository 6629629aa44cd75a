#pragma once

#include "recnav/digraph.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace recnav {

struct ComponentReport {
    std::size_t num_scc = 0;
    /// Component label per node; components are numbered by their smallest member.
    std::vector<std::uint32_t> scc_id;
    /// Size per component label.
    std::vector<std::size_t> sizes;
    /// Label of the largest component (smallest label among equally large ones).
    std::uint32_t largest = 0;
    double largest_scc_fraction = 0.0;
    double clustering_coefficient = 0.0;

    std::size_t largest_size() const { return sizes.empty() ? 0 : sizes[largest]; }
};

/// Exact strongly connected components (iterative Tarjan), plus the clustering
/// coefficient of the same graph.
ComponentReport strongly_connected_components(const Digraph& g);

/// Mean over nodes of |{(j,k) in E : j,k in out(i)}| / (d (d - 1)), d = |out(i)|;
/// nodes with fewer than two out-neighbors contribute 0.
double clustering_coefficient(const Digraph& g);

struct EccentricityReport {
    std::vector<NodeId> nodes;           // members of the largest SCC, ascending
    std::vector<std::uint32_t> values;   // eccentricity per entry of `nodes`
    std::uint32_t diameter = 0;

    /// value -> number of nodes.
    std::map<std::uint32_t, std::size_t> histogram() const;
};

/// Eccentricities inside the largest SCC. Throws InvalidArgument when that
/// component has fewer than two nodes.
EccentricityReport eccentricities(const Digraph& g);
EccentricityReport eccentricities(const Digraph& g, const ComponentReport& components);

enum class BowTieRegion : std::uint8_t { scc, in, out, tube, tendril_in, tendril_out, other };
inline constexpr std::size_t kBowTieRegions = 7;
inline constexpr std::array<BowTieRegion, kBowTieRegions> kAllBowTieRegions{
    BowTieRegion::scc,        BowTieRegion::in,          BowTieRegion::out,  BowTieRegion::tube,
    BowTieRegion::tendril_in, BowTieRegion::tendril_out, BowTieRegion::other};

/// SCC, IN, OUT, TUBE, TL_IN, TL_OUT, OTHER.
std::string_view to_string(BowTieRegion region);

struct BowTie {
    std::vector<BowTieRegion> label;
    std::array<std::size_t, kBowTieRegions> sizes{};

    std::size_t size(BowTieRegion r) const { return sizes[static_cast<std::size_t>(r)]; }
};

/// Bow-tie partition relative to the largest SCC. A node that is reachable
/// from IN and also reaches OUT is TUBE, never a tendril.
BowTie bowtie(const Digraph& g);
BowTie bowtie(const Digraph& g, const ComponentReport& components);

using TransitionMatrix = std::array<std::array<std::size_t, kBowTieRegions>, kBowTieRegions>;

/// For each consecutive pair, counts nodes moving from region (row) to region
/// (column). Throws InvalidArgument if node counts differ.
std::vector<TransitionMatrix> membership_change(std::span<const BowTie> series);

} // namespace recnav
