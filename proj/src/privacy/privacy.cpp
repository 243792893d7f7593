#include "tripeval/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tripeval/error.hpp"
#include "tripeval/neighbors.hpp"

namespace tripeval {
namespace {

void check_list(const std::vector<double>& values, std::string_view name) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw DataError("DCR list '" + std::string(name) + "' has an invalid entry");
        }
        if (i > 0 && values[i] < values[i - 1]) {
            throw DataError("DCR list '" + std::string(name) + "' is not sorted");
        }
    }
    if (values.empty()) throw DataError("DCR list '" + std::string(name) + "' is empty");
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 100.0)) {
        throw UsageError("percentile alpha must lie in (0, 100], got " + std::to_string(alpha));
    }
}

}  // namespace

void DcrProfile::validate() const {
    check_list(rs, "rs");
    check_list(hs, "hs");
    check_list(rr, "rr");
    check_list(ss, "ss");
    if (rs.size() != rr.size()) throw DataError("DCR lists rs and rr must both have one entry per train row");
}

DcrProfile dcr_profile(const EncodedMatrix& train, const EncodedMatrix& holdout, const EncodedMatrix& synth) {
    require_same_encoding(train, synth, "dcr_profile");
    require_same_encoding(holdout, synth, "dcr_profile");
    if (train.rows() < 2 || holdout.rows() < 2 || synth.rows() < 2) {
        throw UsageError("dcr_profile: every set needs at least two rows");
    }
    DcrProfile p;
    p.rs = sorted(neighbors::nearest_distances(train, synth));
    p.hs = sorted(neighbors::nearest_distances(holdout, synth));
    p.rr = sorted(neighbors::nearest_other_distances(train));
    p.ss = sorted(neighbors::nearest_other_distances(synth));
    return p;
}

double percentile(std::span<const double> sorted_values, double alpha) {
    if (sorted_values.empty()) throw UsageError("percentile of an empty list");
    check_alpha(alpha);
    const double position = alpha / 100.0 * static_cast<double>(sorted_values.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    const std::size_t upper = std::min(lower + 1, sorted_values.size() - 1);
    const double frac = position - static_cast<double>(lower);
    const double lo = sorted_values[lower];
    const double hi = sorted_values[upper];
    return frac == 0.0 ? lo : lo + frac * (hi - lo);
}

std::string_view to_string(RatioStatus status) {
    switch (status) {
        case RatioStatus::Ok: return "ok";
        case RatioStatus::Degenerate: return "degenerate";
        case RatioStatus::Infinite: return "infinite";
    }
    return "unknown";
}

RdcrResult rdcr(const DcrProfile& profile, double alpha) {
    check_alpha(alpha);
    RdcrResult r;
    r.alpha = alpha;
    r.d_rs = percentile(profile.rs, alpha);
    r.d_hs = percentile(profile.hs, alpha);
    if (r.d_hs > 0.0) {
        r.ratio = r.d_rs / r.d_hs;
    } else if (r.d_rs == 0.0) {
        r.ratio = 1.0;
        r.status = RatioStatus::Degenerate;
    } else {
        r.ratio = std::numeric_limits<double>::infinity();
        r.status = RatioStatus::Infinite;
    }
    return r;
}

std::vector<RdcrResult> rdcr_sweep(const DcrProfile& profile, std::span<const double> alphas) {
    if (alphas.empty()) throw UsageError("rdcr_sweep: empty alpha list");
    for (double a : alphas) check_alpha(a);
    std::vector<RdcrResult> out;
    out.reserve(alphas.size());
    for (double a : alphas) out.push_back(rdcr(profile, a));
    return out;
}

void write_sweep_csv(std::ostream& out, std::span<const RdcrResult> results) {
    out << "alpha,d_rs,d_hs,ratio\n";
    for (const auto& r : results) {
        out << format_number(r.alpha, ColumnKind::Float) << ',' << format_number(r.d_rs, ColumnKind::Float)
            << ',' << format_number(r.d_hs, ColumnKind::Float) << ','
            << (std::isinf(r.ratio) ? std::string("inf") : format_number(r.ratio, ColumnKind::Float)) << '\n';
    }
}

std::string profile_to_json(const DcrProfile& profile) {
    nlohmann::ordered_json doc;
    doc["rs"] = profile.rs;
    doc["hs"] = profile.hs;
    doc["rr"] = profile.rr;
    doc["ss"] = profile.ss;
    return doc.dump() + "\n";
}

DcrProfile parse_profile_json(std::string_view text) {
    DcrProfile p;
    try {
        const auto doc = nlohmann::json::parse(text);
        p.rs = doc.at("rs").get<std::vector<double>>();
        p.hs = doc.at("hs").get<std::vector<double>>();
        p.rr = doc.at("rr").get<std::vector<double>>();
        p.ss = doc.at("ss").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid DCR profile: ") + e.what());
    }
    p.validate();
    return p;
}

DcrProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open profile " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_profile_json(buffer.str());
}

void save_profile(const std::filesystem::path& path, const DcrProfile& profile) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write profile " + path.string());
    out << profile_to_json(profile);
}

}  // namespace tripeval
