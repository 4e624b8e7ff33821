#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "sau/harness.hpp"
#include "sau/prop_checks.hpp"

namespace sau {

// %.12g — round-trips every value we emit while keeping files diffable.
std::string format_double(double x);

// Write via a temp file in the same directory plus rename, creating parent
// directories as needed, so readers never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

// Long-format trace table: step,mean_cum_regret,sem,policy,env.
// The sem column is left empty when a result carries no SEM (single trial).
std::string results_csv(std::span<const ExperimentResult> results,
                        const std::string& env_name);

// Final standings: rank,policy,final_mean_cum_regret,final_sem. Ascending
// final regret, ties broken by label so output is deterministic.
std::string ranking_csv(std::span<const ExperimentResult> results);

nlohmann::json run_spec_json(const RunSpec& spec);
nlohmann::json summary_json(const RunSpec& spec, const std::string& env_name,
                            std::span<const ExperimentResult> results);
nlohmann::json prop_check_json(std::span<const PropCheckResult> checks);

}  // namespace sau
