#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "tripeval/dataset.hpp"

namespace tripeval {

// Ordered (pickup zone, dropoff zone) pair.
using ZonePair = std::pair<std::string, std::string>;

// Directed origin-destination graph: one edge count per ordered zone pair.
// Stored counts are >= 1 and sum to total_trips.
struct TripGraph {
    std::set<std::string> zones;
    std::map<ZonePair, std::uint64_t> edge_counts;
    std::uint64_t total_trips = 0;
};

// p(i, j) = n_ij / N over the stored pairs.
struct EdgeDistribution {
    std::map<ZonePair, double> probabilities;
};

struct GraphOptions {
    bool keep_self_loops = true;
};

// One increment per row. Both columns must be categorical; an empty result
// (no rows, or only filtered self-loops) raises DataError("empty graph").
TripGraph build_graph(const DataTable& table, std::string_view pickup_column,
                      std::string_view dropoff_column, const GraphOptions& options = {});

// Multiplies every edge count by `factor` (count-scaling invariance checks).
TripGraph scale_counts(const TripGraph& graph, std::uint64_t factor);

EdgeDistribution edge_distribution(const TripGraph& graph);

// Total variation distance, summed over the union of both supports with
// absent pairs at probability 0.
double total_variation(const EdgeDistribution& a, const EdgeDistribution& b);

// 1 - total_variation(real, synth), in [0, 1].
double graph_similarity(const EdgeDistribution& real, const EdgeDistribution& synth);

// Edge list "src,dst,count,probability", one line per stored pair.
void write_edge_list(std::ostream& out, const TripGraph& graph);
void save_edge_list(const std::filesystem::path& path, const TripGraph& graph);

}  // namespace tripeval
