#include "railcheck/explorer.hpp"
#include "railcheck/goal.hpp"
#include "railcheck/properties.hpp"
#include "railcheck/report.hpp"
#include "railcheck/scenario_dsl.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>

using namespace railcheck;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_fails = 1;
constexpr int exit_input = 2;

// Cap on deadlock traces attached to a `check` report.
constexpr std::size_t check_trace_cap = 10;

struct CommonArgs
{
    std::string scenario_path;
    std::vector< std::string > set_limits;
    int workers = 1;
    std::uint64_t max_states = ExploreOptions{}.max_states;
    bool dfs = false;
    std::string format = "text";
    std::string output;
};

struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void add_common( CLI::App& cmd, CommonArgs& args, bool with_format = true )
{
    cmd.add_option( "scenario", args.scenario_path, "Scenario file (.rail)" )->required();
    cmd.add_option( "--set-limit", args.set_limits, "Override a section limit, e.g. A=8 (repeatable)" );
    cmd.add_option( "--workers", args.workers, "Worker threads" )->check( CLI::PositiveNumber );
    cmd.add_option( "--max-states", args.max_states, "Abort exploration above this many states" )
        ->check( CLI::PositiveNumber );
    cmd.add_flag( "--dfs", args.dfs, "Depth-first discovery (serial)" );
    if ( with_format )
        cmd.add_option( "--format", args.format, "Output format" )->check( CLI::IsMember( { "text", "json" } ) );
    cmd.add_option( "--output", args.output, "Write output to a file instead of stdout" );
}

LimitOverrides parse_overrides( const std::vector< std::string >& items )
{
    LimitOverrides out;
    for ( const auto& item : items )
    {
        const auto eq = item.find( '=' );
        if ( eq == std::string::npos || eq == 0 )
            throw InputError{ fmt::format( "--set-limit expects <section>=<int>, got '{}'", item ) };
        try
        {
            std::size_t used = 0;
            const auto value = std::stoi( item.substr( eq + 1 ), &used );
            if ( used != item.size() - eq - 1 )
                throw std::invalid_argument{ "trailing characters" };
            out.emplace_back( item.substr( 0, eq ), value );
        }
        catch ( const std::exception& )
        {
            throw InputError{ fmt::format( "--set-limit value in '{}' is not an integer", item ) };
        }
    }
    return out;
}

Scenario load( const CommonArgs& args )
{
    return load_scenario( args.scenario_path, parse_overrides( args.set_limits ) );
}

ExploreOptions explore_options( const CommonArgs& args, bool store_edges )
{
    ExploreOptions options;
    options.store_edges = store_edges;
    options.worker_count = args.workers;
    options.max_states = args.max_states;
    options.strategy = args.dfs ? SearchStrategy::dfs : SearchStrategy::bfs;
    return options;
}

void emit( const CommonArgs& args, const std::string& text )
{
    if ( args.output.empty() )
    {
        std::cout << text;
        return;
    }
    std::ofstream out{ args.output, std::ios::binary };
    if ( !out )
        throw InputError{ fmt::format( "cannot write '{}'", args.output ) };
    out << text;
}

void emit_report( const CommonArgs& args, const Scenario& scenario, const RunReport& report )
{
    if ( args.format == "json" )
        emit( args, to_json( report ).dump( 2 ) + "\n" );
    else
        emit( args, format_report( scenario, report ) );
}

std::vector< int > as_ints( const SystemState& state )
{
    return { state.encoding().begin(), state.encoding().end() };
}

RunReport run_battery( const Scenario& scenario, const ExploreOptions& options )
{
    RunReport report;
    report.scenario = scenario.name;
    report.options = run_options( scenario, options );

    const auto [ graph, stats ] = explore( scenario, options );
    report.stats = stats;
    auto& props = report.properties;
    props.safety = check_safety( scenario, graph, options.worker_count );
    props.ef_arrived = check_ef_arrived( graph );
    props.af_arrived = check_af_arrived( graph );
    props.ag_ef_arrived = check_ag_ef_arrived( graph );

    const auto counterexample = [ & ]( const char* name, const std::optional< Verdict >& verdict )
    {
        if ( verdict && !verdict->holds && verdict->evidence )
            report.traces.push_back( { name, as_ints( replay( scenario, *verdict->evidence ) ), *verdict->evidence } );
    };
    counterexample( "safety", props.safety );
    counterexample( "af_arrived", props.af_arrived );
    counterexample( "ag_ef_arrived", props.ag_ef_arrived );

    const auto deadlocks = find_deadlocks( graph );
    for ( std::size_t i = 0; i < deadlocks.size() && i < check_trace_cap; ++i )
        report.traces.push_back( { "deadlock", as_ints( deadlocks[ i ].state ), deadlocks[ i ].trace } );

    report.exit_status = props.all_hold() ? exit_ok : exit_fails;
    return report;
}

int cmd_check( const CommonArgs& args )
{
    const auto scenario = load( args );
    const auto report = run_battery( scenario, explore_options( args, true ) );
    emit_report( args, scenario, report );
    return report.exit_status;
}

int cmd_count( const CommonArgs& args )
{
    const auto scenario = load( args );
    const auto options = explore_options( args, false );
    RunReport report;
    report.scenario = scenario.name;
    report.options = run_options( scenario, options );
    report.stats = explore( scenario, options ).stats;
    emit_report( args, scenario, report );
    return exit_ok;
}

int cmd_deadlocks( const CommonArgs& args )
{
    const auto scenario = load( args );
    const auto options = explore_options( args, false );
    RunReport report;
    report.scenario = scenario.name;
    report.options = run_options( scenario, options );
    const auto [ graph, stats ] = explore( scenario, options );
    report.stats = stats;
    for ( const auto& deadlock : find_deadlocks( graph ) )
        report.traces.push_back( { "deadlock", as_ints( deadlock.state ), deadlock.trace } );
    report.exit_status = report.traces.empty() ? exit_ok : exit_fails;

    if ( args.format == "json" )
        emit( args, to_json( report ).dump( 2 ) + "\n" );
    else
        emit( args, fmt::format( "{} deadlock state(s)\n", report.traces.size() ) +
                        ( report.traces.empty() ? std::string{} : format_report( scenario, report ) ) );
    return report.exit_status;
}

int cmd_trace( const CommonArgs& args, const std::string& goal_text )
{
    const auto scenario = load( args );
    const auto goal = parse_goal( goal_text, scenario );
    const auto trace = shortest_trace_to( scenario, goal, explore_options( args, false ) );

    if ( args.format == "json" )
    {
        nlohmann::ordered_json out;
        out[ "scenario" ] = scenario.name;
        out[ "goal" ] = goal.to_string();
        out[ "reachable" ] = trace.has_value();
        if ( trace )
        {
            auto steps = nlohmann::ordered_json::array();
            for ( auto train : *trace )
                steps.push_back( train.index );
            out[ "steps" ] = steps;
        }
        emit( args, out.dump( 2 ) + "\n" );
    }
    else if ( trace )
    {
        emit( args, fmt::format( "{}-step trace to {}\n", trace->size(), goal.to_string() ) +
                        format_trace( scenario, *trace ) );
    }
    else
    {
        emit( args, "unreachable\n" );
    }
    return trace ? exit_ok : exit_fails;
}

std::string dot_graph( const StateGraph& graph )
{
    std::string out = "digraph moves {\n";
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        const auto state = graph.state( i );
        out += fmt::format( "  \"{}\" [label=\"{}\"];\n", state.hex(), state.label() );
    }
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        const auto source = graph.state( i ).hex();
        for ( const auto& edge : graph.edges( i ) )
            out += fmt::format( "  \"{}\" -> \"{}\" [label=\"{}\"];\n", source, graph.state( edge.target ).hex(),
                                edge.train.index );
    }
    out += "}\n";
    return out;
}

int cmd_export( const CommonArgs& args, const std::string& format, std::uint64_t max_nodes )
{
    const auto scenario = load( args );
    if ( format == "json" )
    {
        const auto report = run_battery( scenario, explore_options( args, true ) );
        emit( args, to_json( report ).dump( 2 ) + "\n" );
        return exit_ok;
    }

    auto options = explore_options( args, true );
    options.max_states = std::min( options.max_states, max_nodes );
    try
    {
        emit( args, dot_graph( explore( scenario, options ).graph ) );
    }
    catch ( const ResourceLimit& )
    {
        std::cerr << fmt::format( "error: move graph has more than {} states; DOT export refused. "
                                  "Use a smaller scenario or raise --max-nodes.\n",
                                  max_nodes );
        return exit_fails;
    }
    return exit_ok;
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Exhaustive verifier for train-scheduling scenarios with critical-section limits" };
    app.require_subcommand( 1 );

    CommonArgs args;
    std::string goal_text;
    std::uint64_t max_nodes = 100'000;

    auto* check = app.add_subcommand( "check", "Explore and check safety, EF/AF/AG EF arrival" );
    add_common( *check, args );
    auto* count = app.add_subcommand( "count", "Explore and report state-space statistics only" );
    add_common( *count, args );
    auto* deadlocks = app.add_subcommand( "deadlocks", "List every deadlock with a shortest trace" );
    add_common( *deadlocks, args );
    auto* trace = app.add_subcommand( "trace", "Shortest trace to a goal such as \"P0=6 & P4=6\"" );
    add_common( *trace, args );
    trace->add_option( "goal", goal_text, "Goal expression" )->required();
    auto* exporter = app.add_subcommand( "export", "Export the move graph (dot) or a run report (json)" );
    add_common( *exporter, args, false );
    std::string export_format = "dot";
    exporter->add_option( "--format", export_format, "Export format" )->check( CLI::IsMember( { "dot", "json" } ) );
    exporter->add_option( "--max-nodes", max_nodes, "Refuse DOT export above this many states" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const auto code = app.exit( e );
        return code == 0 ? exit_ok : exit_input;
    }

    try
    {
        if ( check->parsed() )
            return cmd_check( args );
        if ( count->parsed() )
            return cmd_count( args );
        if ( deadlocks->parsed() )
            return cmd_deadlocks( args );
        if ( trace->parsed() )
            return cmd_trace( args, goal_text );
        return cmd_export( args, export_format, max_nodes );
    }
    catch ( const ParseError& e )
    {
        std::cerr << args.scenario_path << ":\n" << e.what() << "\n";
    }
    catch ( const GoalError& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    catch ( const ResourceLimit& e )
    {
        const auto& partial = e.partial_stats();
        std::cerr << "error: " << e.what() << "\n"
                  << fmt::format( "partial stats: states>={} move_edges>={}\n", partial.state_count,
                                  partial.move_edge_count );
    }
    catch ( const std::exception& e )
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return exit_input;
}
