#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "semirec/chain.hpp"
#include "semirec/conjugacy.hpp"
#include "semirec/recurrence.hpp"
#include "semirec/wandering.hpp"

namespace semirec {

using Json = nlohmann::ordered_json;

/// Malformed or semantically invalid configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    int max_cells = 100000; // safety cap on grid sizes
};

/// Parse and execute a config; the report is deterministic given the config
/// (the "timing" block is the only exception).
Json analyze_config(const Json& config, const RunOptions& opts = {});

/// Validate a config without running analyses. Throws ConfigError.
void validate_config(const Json& config, const RunOptions& opts = {});

/// Render one analysis of a report as CSV (schema depends on the kind).
std::string plot_csv(const Json& report, const std::string& analysis_id);

// Shared JSON <-> domain conversions (also used by tests).
PhaseSpace space_from_json(const Json& j);
GeneratorSystem system_from_json(const Json& j);
Grid grid_from_json(const Json& j, const PhaseSpace& space, int max_cells);
Point point_from_json(const Json& j, int dim);
Word word_from_json(const Json& j, const GeneratorSystem& sys);
std::vector<Interval> interval_union_from_json(const Json& j);
Json verdict_to_json(const GeneratorSystem& sys, const Verdict& v);
Json chain_to_json(const GeneratorSystem& sys, const EpsilonChain& chain);

} // namespace semirec
