#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tripeval/dataset.hpp"

namespace tripeval {

// Nearest-record distance arrays, each sorted ascending.
//   rs: train row   -> nearest synthetic row
//   hs: holdout row -> nearest synthetic row
//   rr: train row   -> nearest other train row
//   ss: synth row   -> nearest other synthetic row
struct DcrProfile {
    std::vector<double> rs;
    std::vector<double> hs;
    std::vector<double> rr;
    std::vector<double> ss;

    // Checks sortedness, finiteness and non-negativity; throws DataError.
    void validate() const;
};

// All three sets share an encoder and have at least two rows.
DcrProfile dcr_profile(const EncodedMatrix& train, const EncodedMatrix& holdout, const EncodedMatrix& synth);

// Linear interpolation between closest ranks: position (alpha/100)(n-1) on
// the 0-based ranks of the sorted list. 0 < alpha <= 100.
double percentile(std::span<const double> sorted_values, double alpha);

enum class RatioStatus {
    Ok,
    Degenerate,  // d_rs = d_hs = 0, ratio reported as 1
    Infinite,    // d_hs = 0 < d_rs, ratio reported as +inf
};

std::string_view to_string(RatioStatus status);

struct RdcrResult {
    double alpha = 5.0;
    double d_rs = 0.0;
    double d_hs = 0.0;
    double ratio = 1.0;
    RatioStatus status = RatioStatus::Ok;
};

// d_rs / d_hs at percentile alpha. Below 1 means the closest alpha-tail of
// training rows sits nearer the synthetic data than holdout rows do.
RdcrResult rdcr(const DcrProfile& profile, double alpha);

// One result per alpha, in input order. Every alpha must lie in (0, 100].
std::vector<RdcrResult> rdcr_sweep(const DcrProfile& profile, std::span<const double> alphas);

// "alpha,d_rs,d_hs,ratio" plus one line per result.
void write_sweep_csv(std::ostream& out, std::span<const RdcrResult> results);

// {"rs": [...], "hs": [...], "rr": [...], "ss": [...]}
std::string profile_to_json(const DcrProfile& profile);
DcrProfile parse_profile_json(std::string_view text);
DcrProfile load_profile(const std::filesystem::path& path);
void save_profile(const std::filesystem::path& path, const DcrProfile& profile);

}  // namespace tripeval
