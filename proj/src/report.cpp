#include "railcheck/report.hpp"

#include <fmt/format.h>

namespace railcheck
{

using json = nlohmann::ordered_json;

bool PropertyResults::all_hold() const
{
    for ( const auto* verdict : { &safety, &ef_arrived, &af_arrived, &ag_ef_arrived } )
        if ( *verdict && !( *verdict )->holds )
            return false;
    return true;
}

bool operator==( const Verdict& a, const Verdict& b )
{
    return a.holds == b.holds && a.evidence == b.evidence && a.checked_states == b.checked_states;
}

bool operator==( const PropertyResults& a, const PropertyResults& b )
{
    return a.safety == b.safety && a.ef_arrived == b.ef_arrived && a.af_arrived == b.af_arrived &&
           a.ag_ef_arrived == b.ag_ef_arrived;
}

bool operator==( const RunReport& a, const RunReport& b )
{
    return a.scenario == b.scenario && a.options == b.options && a.stats.same_counts( b.stats ) &&
           a.stats.wall_time == b.stats.wall_time && a.properties == b.properties && a.traces == b.traces &&
           a.exit_status == b.exit_status;
}

const char* strategy_name( SearchStrategy strategy )
{
    return strategy == SearchStrategy::dfs ? "dfs" : "bfs";
}

namespace
{

json trace_json( const Trace& trace )
{
    auto out = json::array();
    for ( auto train : trace )
        out.push_back( train.index );
    return out;
}

Trace trace_from( const json& j )
{
    Trace trace;
    for ( const auto& step : j )
        trace.push_back( TrainId{ step.get< std::uint16_t >() } );
    return trace;
}

json verdict_json( const std::optional< Verdict >& verdict )
{
    if ( !verdict )
        return nullptr;
    json out;
    out[ "holds" ] = verdict->holds;
    out[ "checked_states" ] = verdict->checked_states;
    out[ "trace" ] = verdict->evidence ? trace_json( *verdict->evidence ) : json( nullptr );
    return out;
}

std::optional< Verdict > verdict_from( const json& j )
{
    if ( j.is_null() )
        return std::nullopt;
    Verdict verdict;
    verdict.holds = j.at( "holds" ).get< bool >();
    verdict.checked_states = j.at( "checked_states" ).get< std::uint64_t >();
    if ( !j.at( "trace" ).is_null() )
        verdict.evidence = trace_from( j.at( "trace" ) );
    return verdict;
}

} // namespace

json to_json( const RunReport& report )
{
    json out;
    out[ "scenario" ] = report.scenario;

    json limits = json::object();
    for ( const auto& [ name, limit ] : report.options.limits )
        limits[ name ] = limit;
    out[ "options" ] = { { "limits", limits },
                         { "workers", report.options.workers },
                         { "strategy", strategy_name( report.options.strategy ) } };

    const auto& stats = report.stats;
    out[ "stats" ] = { { "states", stats.state_count },       { "move_edges", stats.move_edge_count },
                       { "arrived", stats.arrived_count },    { "deadlocks", stats.deadlock_count },
                       { "max_depth", stats.max_depth },      { "wall_ms", stats.wall_time.count() },
                       { "partial", stats.partial } };

    out[ "properties" ] = { { "safety", verdict_json( report.properties.safety ) },
                            { "ef_arrived", verdict_json( report.properties.ef_arrived ) },
                            { "af_arrived", verdict_json( report.properties.af_arrived ) },
                            { "ag_ef_arrived", verdict_json( report.properties.ag_ef_arrived ) } };

    auto traces = json::array();
    for ( const auto& record : report.traces )
        traces.push_back( { { "kind", record.kind }, { "state", record.state }, { "steps", trace_json( record.steps ) } } );
    out[ "traces" ] = std::move( traces );
    out[ "exit_status" ] = report.exit_status;
    return out;
}

RunReport report_from_json( const json& j )
{
    RunReport report;
    report.scenario = j.at( "scenario" ).get< std::string >();

    const auto& options = j.at( "options" );
    for ( const auto& [ name, limit ] : options.at( "limits" ).items() )
        report.options.limits.emplace_back( name, limit.get< int >() );
    report.options.workers = options.at( "workers" ).get< int >();
    const auto strategy = options.at( "strategy" ).get< std::string >();
    if ( strategy != "bfs" && strategy != "dfs" )
        throw std::invalid_argument{ fmt::format( "unknown strategy '{}'", strategy ) };
    report.options.strategy = strategy == "dfs" ? SearchStrategy::dfs : SearchStrategy::bfs;

    const auto& stats = j.at( "stats" );
    report.stats.state_count = stats.at( "states" ).get< std::uint64_t >();
    report.stats.move_edge_count = stats.at( "move_edges" ).get< std::uint64_t >();
    report.stats.arrived_count = stats.at( "arrived" ).get< std::uint64_t >();
    report.stats.deadlock_count = stats.at( "deadlocks" ).get< std::uint64_t >();
    report.stats.max_depth = stats.at( "max_depth" ).get< std::uint32_t >();
    report.stats.wall_time = std::chrono::milliseconds{ stats.at( "wall_ms" ).get< std::int64_t >() };
    report.stats.partial = stats.value( "partial", false );

    const auto& properties = j.at( "properties" );
    report.properties.safety = verdict_from( properties.at( "safety" ) );
    report.properties.ef_arrived = verdict_from( properties.at( "ef_arrived" ) );
    report.properties.af_arrived = verdict_from( properties.at( "af_arrived" ) );
    report.properties.ag_ef_arrived = verdict_from( properties.at( "ag_ef_arrived" ) );

    for ( const auto& record : j.at( "traces" ) )
        report.traces.push_back( { record.at( "kind" ).get< std::string >(),
                                   record.at( "state" ).get< std::vector< int > >(), trace_from( record.at( "steps" ) ) } );
    report.exit_status = j.value( "exit_status", 0 );
    return report;
}

RunOptions run_options( const Scenario& scenario, const ExploreOptions& options )
{
    RunOptions out;
    for ( const auto& section : scenario.sections )
        out.limits.emplace_back( section.name, section.limit );
    out.workers = options.worker_count;
    out.strategy = options.strategy;
    return out;
}

std::string format_trace( const Scenario& scenario, const Trace& trace )
{
    std::string out;
    auto state = initial_state( scenario );
    for ( std::size_t k = 0; k < trace.size(); ++k )
    {
        state = step( scenario, state, trace[ k ] );
        out += fmt::format( "step {}: train {} -> endpoint {}\n", k + 1, trace[ k ].index,
                            position( scenario, state, trace[ k ] ).value );
    }
    return out;
}

std::string format_report( const Scenario& scenario, const RunReport& report )
{
    std::string out;
    out += fmt::format( "scenario: {}\n", report.scenario );

    std::string limits;
    for ( const auto& [ name, limit ] : report.options.limits )
        limits += fmt::format( "{}{}={}", limits.empty() ? "" : " ", name, limit );
    out += fmt::format( "limits: {}  workers: {}  strategy: {}\n", limits.empty() ? "(none)" : limits,
                        report.options.workers, strategy_name( report.options.strategy ) );

    const auto& stats = report.stats;
    out += fmt::format( "configurations: {}{}\n", stats.state_count, stats.partial ? " (partial)" : "" );
    out += fmt::format( "move edges: {}\n", stats.move_edge_count );
    out += fmt::format( "arrived states: {}  deadlock states: {}\n", stats.arrived_count, stats.deadlock_count );
    out += fmt::format( "max depth: {}\n", stats.max_depth );
    out += fmt::format( "wall time: {} ms\n", stats.wall_time.count() );
    out += "note: counts cover progress-vector configurations and move edges only; tools that add "
           "arrival self-loops or monitor states report slightly larger totals\n";

    const auto line = [ & ]( const char* name, const std::optional< Verdict >& verdict )
    {
        if ( verdict )
            out += fmt::format( "{:<14} {}\n", name, verdict->holds ? "holds" : "FAILS" );
    };
    line( "safety", report.properties.safety );
    line( "EF arrived", report.properties.ef_arrived );
    line( "AF arrived", report.properties.af_arrived );
    line( "AG EF arrived", report.properties.ag_ef_arrived );

    for ( const auto& record : report.traces )
    {
        std::string state;
        for ( auto p : record.state )
            state += fmt::format( "{}{}", state.empty() ? "" : ",", p );
        out += fmt::format( "{} trace to [{}] ({} steps):\n", record.kind, state, record.steps.size() );
        out += format_trace( scenario, record.steps );
    }
    return out;
}

} // namespace railcheck
