#include "fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tripeval/rng.hpp"

namespace fixture {

using tripeval::ColumnKind;
using tripeval::ColumnSpec;
using tripeval::Rng;

tripeval::TableSchema trip_schema(const TripOptions& opt) {
    std::vector<ColumnSpec> cols;
    cols.push_back({"VendorID", ColumnKind::Categorical});
    if (opt.raw) {
        cols.push_back({"lpep_pickup_datetime", ColumnKind::Categorical});
    } else {
        cols.push_back({"lpep_pickup_datetime_weekday", ColumnKind::Categorical});
        cols.push_back({"lpep_pickup_datetime_time", ColumnKind::Float});
    }
    if (opt.zones) {
        cols.push_back({"PULocationID", ColumnKind::Categorical});
        cols.push_back({"DOLocationID", ColumnKind::Categorical});
    }
    cols.push_back({"RateCodeID", ColumnKind::Integer});
    cols.push_back({"Passenger_count", ColumnKind::Categorical});
    cols.push_back({"Trip_distance", ColumnKind::Float});
    cols.push_back({"Fare_amount", ColumnKind::Float});
    cols.push_back({"Tip_amount", ColumnKind::Float});
    cols.push_back({"Tolls_amount", ColumnKind::Float});
    if (opt.raw) cols.push_back({"Ehail_fee", ColumnKind::Float});
    cols.push_back({"Payment_type", ColumnKind::Categorical});
    cols.push_back({"Total_amount", ColumnKind::Float});
    return tripeval::TableSchema(std::move(cols), std::string("Total_amount"));
}

tripeval::DataTable make_trips(const TripOptions& opt) {
    const auto schema = trip_schema(opt);
    tripeval::TableBuilder b(schema);
    Rng rng(opt.seed);
    auto col = [&](const char* name) { return schema.index_of(name); };
    auto money = [](double v) { return std::round(v * 100.0) / 100.0; };

    for (std::size_t i = 0; i < opt.rows; ++i) {
        b.append_text(col("VendorID"), rng.uniform() < 0.3 ? "1" : "2");

        const int day = 1 + static_cast<int>(rng.below(31));
        // rush hours are busier
        double hour = rng.uniform() < 0.5 ? 7.0 + 3.0 * rng.uniform() : 24.0 * rng.uniform();
        if (rng.uniform() < 0.3) hour = 16.0 + 4.0 * rng.uniform();
        const double seconds = std::floor(hour * 3600.0);
        if (opt.raw) {
            char buf[64];
            const int s = static_cast<int>(seconds);
            std::snprintf(buf, sizeof buf, "2015-01-%02d %02d:%02d:%02d", day, s / 3600, (s / 60) % 60, s % 60);
            b.append_text(col("lpep_pickup_datetime"), buf);
        } else {
            // 2015-01-01 was a Thursday (weekday 3)
            b.append_text(col("lpep_pickup_datetime_weekday"), std::to_string((day - 1 + 3) % 7));
            b.append_number(col("lpep_pickup_datetime_time"), seconds);
        }

        if (opt.zones) {
            // Zipf-like popularity, drop-off near the pick-up zone most of the time
            const auto pick = [&] {
                const double u = rng.uniform();
                return static_cast<std::size_t>(std::floor(std::pow(u, 2.0) * static_cast<double>(opt.zone_count)));
            };
            const std::size_t pu = pick();
            std::size_t dof = pick();
            if (rng.uniform() < 0.6) dof = (pu + rng.below(3)) % opt.zone_count;
            char buf[16];
            std::snprintf(buf, sizeof buf, "%03zu", pu + 1);
            b.append_text(col("PULocationID"), buf);
            std::snprintf(buf, sizeof buf, "%03zu", dof + 1);
            b.append_text(col("DOLocationID"), buf);
        }

        const double r = rng.uniform();
        b.append_number(col("RateCodeID"), r < 0.95 ? 1.0 : (r < 0.98 ? 5.0 : 2.0));

        const double p = rng.uniform();
        const char* pax = p < 0.7 ? "1" : p < 0.85 ? "2" : p < 0.9 ? "5" : p < 0.95 ? "3" : p < 0.98 ? "6" : "4";
        b.append_text(col("Passenger_count"), pax);

        const double distance = std::min(40.0, std::round(std::exp(0.7 + 0.8 * rng.normal()) * 100.0) / 100.0);
        b.append_number(col("Trip_distance"), distance);
        const double minutes = std::max(1.0, 3.5 * distance + 4.0 * std::abs(rng.normal()));
        const double fare = std::max(2.5, std::round((2.5 + 2.0 * distance + 0.3 * minutes) * 2.0) / 2.0);
        b.append_number(col("Fare_amount"), fare);

        const bool card = rng.uniform() < 0.55;
        const double tip = card ? money(std::max(0.0, fare * (0.18 + 0.05 * rng.normal()))) : 0.0;
        b.append_number(col("Tip_amount"), tip);
        const double tolls = rng.uniform() < 0.05 ? 5.54 : 0.0;
        b.append_number(col("Tolls_amount"), tolls);
        if (opt.raw) b.append_missing(col("Ehail_fee"));
        b.append_text(col("Payment_type"), card ? "1" : (rng.uniform() < 0.95 ? "2" : "3"));
        b.append_number(col("Total_amount"), money(fare + tip + tolls + 0.5 + 0.3));
    }
    return std::move(b).build("fixture");
}

tripeval::EncodedMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double grid) {
    Rng rng(seed);
    std::vector<double> data(n * d);
    for (double& v : data) {
        v = rng.uniform();
        if (grid > 0.0) v = std::round(v / grid) * grid;
    }
    return tripeval::EncodedMatrix(n, d, std::move(data));
}

}  // namespace fixture
