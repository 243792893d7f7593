#pragma once

#include <cstdint>

#include "tripeval/dataset.hpp"

namespace fixture {

struct TripOptions {
    std::size_t rows = 2000;
    std::uint64_t seed = 1;
    bool zones = false;       // add PULocationID / DOLocationID
    std::size_t zone_count = 40;
    bool raw = false;         // datetime strings and an all-empty Ehail_fee column
};

// Column layout of make_trips for the same options.
tripeval::TableSchema trip_schema(const TripOptions& opt);

// Plausible green-taxi style trips: fares follow distance, tips follow the
// payment type, totals add up, drop-off zones cluster near pick-up zones.
tripeval::DataTable make_trips(const TripOptions& opt);

// Uniform random n x d matrix, entries rounded to `grid` steps when grid > 0
// (creates exact ties).
tripeval::EncodedMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double grid = 0.0);

}  // namespace fixture
