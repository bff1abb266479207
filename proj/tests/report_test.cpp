#include "railcheck/goal.hpp"
#include "railcheck/report.hpp"
#include "railcheck/scenario_dsl.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>

#include <random>

using namespace railcheck;
using namespace railcheck::testing;

TEST_CASE( "goal expressions" )
{
    const auto yard = builtin_oneway8();

    const auto goal = parse_goal( "P0=6 & P4 = 6", yard );
    REQUIRE( goal.terms.size() == 2 );
    CHECK( goal.terms[ 1 ].train == 4 );
    CHECK( goal.to_string() == "P0=6 & P4=6" );
    CHECK( goal( SystemState{ std::vector< std::uint8_t >{ 6, 0, 0, 0, 6, 0, 0, 0 } } ) );
    CHECK_FALSE( goal( initial_state( yard ) ) );

    const auto mixed = parse_goal( "P1>=2 && P2!=0 & P3<1 & P5<=4 & P6>0 & P7==3", yard );
    CHECK( mixed.terms.size() == 6 );
    CHECK( mixed( SystemState{ std::vector< std::uint8_t >{ 0, 2, 1, 0, 0, 4, 1, 3 } } ) );
    CHECK_FALSE( mixed( SystemState{ std::vector< std::uint8_t >{ 0, 2, 1, 1, 0, 4, 1, 3 } } ) );

    CHECK( parse_goal( "P0=0", yard )( initial_state( yard ) ) );
}

TEST_CASE( "goal expression errors" )
{
    const auto yard = builtin_oneway8();
    try
    {
        (void) parse_goal( "P0=9", yard );
        FAIL( "expected GoalError" );
    }
    catch ( const GoalError& e )
    {
        CHECK( e.column() == 4 );
        CHECK( std::string{ e.what() }.find( "out of range" ) != std::string::npos );
    }
    CHECK_THROWS_AS( (void) parse_goal( "P8=0", yard ), GoalError );
    CHECK_THROWS_AS( (void) parse_goal( "P0=1 |", yard ), GoalError );
    CHECK_THROWS_AS( (void) parse_goal( "", yard ), GoalError );
    CHECK_THROWS_AS( (void) parse_goal( "Q0=1", yard ), GoalError );
    CHECK_THROWS_AS( (void) parse_goal( "P0 ~ 1", yard ), GoalError );
}

TEST_CASE( "trace formatting" )
{
    const auto s = corridor_scenario();
    CHECK( format_trace( s, { TrainId{ 1 }, TrainId{ 0 } } ) ==
           "step 1: train 1 -> endpoint 3\nstep 2: train 0 -> endpoint 2\n" );
}

TEST_CASE( "run report JSON round trip" )
{
    std::mt19937 rng{ 31 };
    for ( int round = 0; round < 100; ++round )
    {
        const auto s = random_scenario( rng );
        ExploreOptions options;
        options.worker_count = 1 + round % 3;
        options.strategy = round % 2 ? SearchStrategy::dfs : SearchStrategy::bfs;

        RunReport report;
        report.scenario = s.name;
        report.options = run_options( s, options );
        const auto [ graph, stats ] = explore( s, options );
        report.stats = stats;
        report.properties.af_arrived = check_af_arrived( graph );
        if ( round % 3 )
            report.properties.safety = check_safety( s, graph );
        for ( const auto& d : find_deadlocks( graph ) )
            report.traces.push_back( { "deadlock", { d.state.encoding().begin(), d.state.encoding().end() }, d.trace } );
        report.exit_status = report.properties.all_hold() ? 0 : 1;

        const auto json = to_json( report );
        CHECK( report_from_json( json ) == report );
        CHECK( to_json( report_from_json( nlohmann::ordered_json::parse( json.dump() ) ) ) == json );
    }
}

TEST_CASE( "run report JSON field names" )
{
    RunReport report;
    report.scenario = "x";
    report.options.limits = { { "A", 8 }, { "B", 7 } };
    const auto json = to_json( report );
    for ( const auto* key : { "scenario", "options", "stats", "properties", "traces" } )
        CHECK( json.contains( key ) );
    for ( const auto* key : { "limits", "workers", "strategy" } )
        CHECK( json[ "options" ].contains( key ) );
    for ( const auto* key : { "states", "move_edges", "arrived", "deadlocks", "max_depth", "wall_ms" } )
        CHECK( json[ "stats" ].contains( key ) );
    for ( const auto* key : { "safety", "ef_arrived", "af_arrived", "ag_ef_arrived" } )
        CHECK( json[ "properties" ].contains( key ) );
    CHECK( json[ "options" ][ "limits" ][ "A" ] == 8 );
    CHECK( json[ "properties" ][ "safety" ].is_null() );
}
