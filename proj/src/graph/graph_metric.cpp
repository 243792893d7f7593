#include "tripeval/graph_metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "tripeval/error.hpp"

namespace tripeval {

TripGraph build_graph(const DataTable& table, std::string_view pickup_column,
                      std::string_view dropoff_column, const GraphOptions& options) {
    const std::size_t pu = table.schema().index_of(pickup_column);
    const std::size_t dropoff = table.schema().index_of(dropoff_column);
    for (std::size_t j : {pu, dropoff}) {
        if (table.schema()[j].kind != ColumnKind::Categorical) {
            throw UsageError("zone column '" + table.schema()[j].name + "' must be categorical");
        }
    }

    TripGraph graph;
    for (std::size_t i = 0; i < table.rows(); ++i) {
        if (table.is_missing(i, pu) || table.is_missing(i, dropoff)) {
            throw DataError("missing zone cell in row " + std::to_string(i));
        }
        const std::string& from = table.text(i, pu);
        const std::string& to = table.text(i, dropoff);
        if (!options.keep_self_loops && from == to) continue;
        graph.zones.insert(from);
        graph.zones.insert(to);
        ++graph.edge_counts[{from, to}];
        ++graph.total_trips;
    }
    if (graph.total_trips == 0) throw DataError("empty graph");
    return graph;
}

TripGraph scale_counts(const TripGraph& graph, std::uint64_t factor) {
    if (factor == 0) throw UsageError("scale factor must be positive");
    TripGraph out = graph;
    for (auto& [pair, count] : out.edge_counts) count *= factor;
    out.total_trips *= factor;
    return out;
}

EdgeDistribution edge_distribution(const TripGraph& graph) {
    if (graph.total_trips == 0) throw DataError("empty graph");
    EdgeDistribution dist;
    const double total = static_cast<double>(graph.total_trips);
    for (const auto& [pair, count] : graph.edge_counts) {
        dist.probabilities.emplace_hint(dist.probabilities.end(), pair, static_cast<double>(count) / total);
    }
    return dist;
}

double total_variation(const EdgeDistribution& a, const EdgeDistribution& b) {
    // Merge walk over both sorted maps; the summation order depends only on
    // the key set, so swapping the arguments gives the same bits.
    double sum = 0.0;
    auto ia = a.probabilities.begin();
    auto ib = b.probabilities.begin();
    while (ia != a.probabilities.end() || ib != b.probabilities.end()) {
        if (ib == b.probabilities.end() || (ia != a.probabilities.end() && ia->first < ib->first)) {
            sum += std::fabs(ia->second);
            ++ia;
        } else if (ia == a.probabilities.end() || ib->first < ia->first) {
            sum += std::fabs(ib->second);
            ++ib;
        } else {
            sum += std::fabs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

double graph_similarity(const EdgeDistribution& real, const EdgeDistribution& synth) {
    return 1.0 - total_variation(real, synth);
}

void write_edge_list(std::ostream& out, const TripGraph& graph) {
    out << "src,dst,count,probability\n";
    const auto dist = edge_distribution(graph);
    for (const auto& [pair, count] : graph.edge_counts) {
        const std::string fields[] = {pair.first, pair.second, std::to_string(count),
                                      format_number(dist.probabilities.at(pair), ColumnKind::Float)};
        write_csv_record(out, fields);
    }
}

void save_edge_list(const std::filesystem::path& path, const TripGraph& graph) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write edge list " + path.string());
    write_edge_list(out, graph);
}

}  // namespace tripeval
