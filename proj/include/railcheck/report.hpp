#pragma once

#include "railcheck/explorer.hpp"
#include "railcheck/properties.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace railcheck
{

struct RunOptions
{
    // Effective limit of every section, declaration order.
    std::vector< std::pair< std::string, int > > limits;
    int workers = 1;
    SearchStrategy strategy = SearchStrategy::bfs;

    friend bool operator==( const RunOptions&, const RunOptions& ) = default;
};

struct PropertyResults
{
    std::optional< Verdict > safety;
    std::optional< Verdict > ef_arrived;
    std::optional< Verdict > af_arrived;
    std::optional< Verdict > ag_ef_arrived;

    // True when every property that was checked holds.
    [[nodiscard]] bool all_hold() const;
};

struct TraceRecord
{
    std::string kind; // "deadlock", "goal", or the property a counterexample refutes
    std::vector< int > state;
    Trace steps;

    friend bool operator==( const TraceRecord&, const TraceRecord& ) = default;
};

struct RunReport
{
    std::string scenario;
    RunOptions options;
    ExploreStats stats;
    PropertyResults properties;
    std::vector< TraceRecord > traces;
    int exit_status = 0;
};

[[nodiscard]] bool operator==( const Verdict& a, const Verdict& b );
[[nodiscard]] bool operator==( const PropertyResults& a, const PropertyResults& b );
// Compares everything including wall time.
[[nodiscard]] bool operator==( const RunReport& a, const RunReport& b );

[[nodiscard]] nlohmann::ordered_json to_json( const RunReport& report );
[[nodiscard]] RunReport report_from_json( const nlohmann::ordered_json& json );

[[nodiscard]] RunOptions run_options( const Scenario& scenario, const ExploreOptions& options );

// "step k: train i -> endpoint e" per move, 1-based k.
[[nodiscard]] std::string format_trace( const Scenario& scenario, const Trace& trace );

// Human-readable summary of a report.
[[nodiscard]] std::string format_report( const Scenario& scenario, const RunReport& report );

[[nodiscard]] const char* strategy_name( SearchStrategy strategy );

} // namespace railcheck
