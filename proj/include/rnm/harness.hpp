#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rnm/constructions.hpp"
#include "rnm/graph.hpp"
#include "rnm/report.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

// Parameter overrides on top of each algorithm's defaults.
struct SolverConfig {
    std::string algorithm = "thm1";  // thm1 | thm3 | thmq
    std::optional<double> q, eps, delta, eta, Delta;
    std::optional<std::size_t> retries;
    EnvelopeSpec envelope;
};

// Resolves defaults from g (see README), runs the solver and stamps wall time.
// ConfigInvalid for unknown algorithms or unusable parameters.
RunReport solve(const EdgeColoredGraph& g, const SolverConfig& cfg, std::uint64_t seed);

// Deterministic JSON unless with_wall_time is set.
std::string report_json(const RunReport& rep, bool with_wall_time = false);

// 0 full, 1 target missed / partial, 2 invalid input, 3 internal invariant violation.
int exit_code(const RunReport& rep);
int exit_code(ErrorCode code);

struct CampaignConfig {
    SolverConfig solver;
    std::optional<InstanceSpec> instance;  // regenerated per trial with the trial seed
    std::string instance_file;             // used when instance is empty
    std::size_t trials = 1;
    std::uint64_t base_seed = 0;
    std::string output_dir;  // empty: nothing written
};

// Reads a JSON campaign description; ConfigInvalid on missing or malformed fields.
CampaignConfig parse_campaign_config(const std::string& json_text);

struct TrialRecord {
    std::uint64_t seed = 0;
    RunReport report;
    bool ran = false;  // false if instance generation or parameter resolution threw
    std::optional<ErrorCode> setup_error;
    std::string setup_message;
};

struct CampaignSummary {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t verified = 0;
    double success_rate = 0.0;
    double mean_matched = 0.0;
    double mean_target = 0.0;
    double mean_discards = 0.0;
    double mean_max_abs_size_dev = 0.0;
    double max_abs_size_dev = 0.0;
    std::size_t degraded_iterations = 0;
    std::map<std::string, std::size_t> errors;
};

struct CampaignResult {
    CampaignSummary summary;
    std::vector<TrialRecord> trials;
};

// Worker count: explicit value if nonzero, else RNM_WORKERS, else hardware concurrency.
std::size_t resolve_workers(std::size_t requested);

// Seeds base..base+trials-1, results in trial order regardless of workers.
CampaignResult run_campaign(const CampaignConfig& cfg, std::size_t workers = 0);

std::string summary_json(const CampaignResult& r);

// Exit status: 0 valid, 1 violations (listed on out), 2 parse/input error.
int verify_files(const std::string& graph_path, const std::string& matching_path, std::ostream& out);

}  // namespace rnm
