#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rnm/errors.hpp"
#include "rnm/graph.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

enum class Outcome { Full, Partial, Failure };
std::string to_string(Outcome o);

struct Diagnostics {
    std::size_t retries = 0;  // extra attempts beyond the first, summed over iterations
    std::size_t clamps = 0;
    std::size_t degraded_iterations = 0;
    std::size_t discards = 0;
    std::size_t resamples = 0;
    std::size_t size_violations = 0;
    std::size_t degree_violations = 0;
    std::size_t a_fraction_violations = 0;
    double discard_bound = 0.0;  // soft reference bound for discards (0 if none)
    std::string path;            // which pipeline branch produced the result
    std::vector<std::string> warnings;
};

struct RunReport {
    std::string algorithm;
    Outcome outcome = Outcome::Failure;
    RainbowMatching matching;
    std::size_t target = 0;  // colors, A-vertices, or q
    bool verified = false;
    std::optional<ErrorCode> error;
    std::string error_message;
    std::vector<TrajectoryRecord> trajectory;
    Diagnostics diagnostics;
    std::uint64_t seed = 0;
    std::map<std::string, double> params;  // numeric echo of the resolved parameters
    CurveParams curve;
    double wall_time_ms = 0.0;  // not part of the deterministic serialization

    std::size_t matched_count() const { return matching.size(); }
};

}  // namespace rnm
