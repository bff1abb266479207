#include "railcheck/explorer.hpp"
#include "railcheck/scenario_dsl.hpp"
#include "support/brute_force.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>

#include <random>

using namespace railcheck;
using namespace railcheck::testing;

namespace
{

TrainId train( int i )
{
    return TrainId{ static_cast< std::uint16_t >( i ) };
}

ExploreOptions with_workers( int workers )
{
    ExploreOptions options;
    options.worker_count = workers;
    return options;
}

void require_same_graph( const StateGraph& a, const StateGraph& b )
{
    REQUIRE( a.size() == b.size() );
    REQUIRE( a.layer_offsets() == b.layer_offsets() );
    for ( std::size_t i = 0; i < a.size(); ++i )
    {
        REQUIRE( a.state( i ) == b.state( i ) );
        REQUIRE( a.terminal( i ) == b.terminal( i ) );
        REQUIRE( a.parent( i ) == b.parent( i ) );
        REQUIRE( a.parent_move( i ) == b.parent_move( i ) );
    }
    REQUIRE( a.edge_offsets() == b.edge_offsets() );
    REQUIRE( a.edge_targets() == b.edge_targets() );
    REQUIRE( a.edge_trains() == b.edge_trains() );
}

// Every state's edges match successors() exactly; terminal flags match.
void require_exhaustive( const Scenario& scenario, const StateGraph& graph )
{
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        const auto state = graph.state( i );
        const auto next = successors( scenario, state );
        const auto edges = graph.edges( i );
        REQUIRE( edges.size() == next.size() );
        for ( std::size_t k = 0; k < edges.size(); ++k )
        {
            REQUIRE( edges[ k ].train == next[ k ].train );
            REQUIRE( graph.state( edges[ k ].target ) == next[ k ].state );
        }
        const auto expected = !next.empty() ? Terminal::internal
                              : is_arrived( scenario, state ) ? Terminal::arrived
                                                              : Terminal::deadlock;
        REQUIRE( graph.terminal( i ) == expected );
    }
}

} // namespace

TEST_CASE( "toy swap: a single deadlocked state" )
{
    const auto [ graph, stats ] = explore( swap_scenario() );
    CHECK( stats.state_count == 1 );
    CHECK( stats.deadlock_count == 1 );
    CHECK( stats.arrived_count == 0 );
    CHECK( stats.move_edge_count == 0 );
    CHECK( stats.max_depth == 0 );
    CHECK( graph.terminal( 0 ) == Terminal::deadlock );

    const auto deadlocks = find_deadlocks( swap_scenario() );
    REQUIRE( deadlocks.size() == 1 );
    CHECK( deadlocks[ 0 ].state == initial_state( swap_scenario() ) );
    CHECK( deadlocks[ 0 ].trace.empty() );
}

TEST_CASE( "toy corridor: (0,0) -> (0,1) -> (1,1)" )
{
    const auto s = corridor_scenario();
    const auto [ graph, stats ] = explore( s );
    CHECK( stats.state_count == 3 );
    CHECK( stats.move_edge_count == 2 );
    CHECK( stats.arrived_count == 1 );
    CHECK( stats.deadlock_count == 0 );
    CHECK( stats.max_depth == 2 );
    CHECK( graph.state( 1 ) == SystemState{ std::vector< std::uint8_t >{ 0, 1 } } );
    CHECK( graph.terminal( 2 ) == Terminal::arrived );
    CHECK( find_deadlocks( s ).empty() );

    const auto trace = shortest_trace_to( s, [ & ]( const SystemState& st ) { return is_arrived( s, st ); } );
    REQUIRE( trace );
    CHECK( *trace == Trace{ train( 1 ), train( 0 ) } );
}

TEST_CASE( "shortest_trace_to" )
{
    const auto s = corridor_scenario();
    const auto initial = initial_state( s );
    const auto empty = shortest_trace_to( s, [ & ]( const SystemState& st ) { return st == initial; } );
    REQUIRE( empty );
    CHECK( empty->empty() );

    CHECK_FALSE( shortest_trace_to( s, []( const SystemState& st ) { return st[ 0 ] == 1 && st[ 1 ] == 0; } ) );
}

TEST_CASE( "replay" )
{
    const auto yard = builtin_oneway8();
    CHECK( replay( yard, {} ) == initial_state( yard ) );
    CHECK( replay( yard, { train( 0 ) } ) == SystemState{ std::vector< std::uint8_t >{ 1, 0, 0, 0, 0, 0, 0, 0 } } );

    try
    {
        (void) replay( yard, Trace( 7, train( 0 ) ) );
        FAIL( "expected ReplayError" );
    }
    catch ( const ReplayError& e )
    {
        // Endpoint 23 is where train 4 starts.
        CHECK( e.step() == 6 );
        CHECK( e.guard().failed == GuardClause::endpoint_occupied );
        CHECK( e.guard().culprit == 4 );
        CHECK( e.state()[ 0 ] == 5 );
    }

    CHECK_THROWS_AS( (void) replay( yard, { train( 0 ), train( 1 ) } ), ReplayError );
    CHECK_THROWS_AS( (void) replay( yard, { train( 9 ) } ), ReplayError );
}

TEST_CASE( "state cap raises ResourceLimit with partial stats" )
{
    ExploreOptions options;
    options.max_states = 2;
    for ( auto strategy : { SearchStrategy::bfs, SearchStrategy::dfs } )
    {
        options.strategy = strategy;
        try
        {
            (void) explore( builtin_oneway8(), options );
            FAIL( "expected ResourceLimit" );
        }
        catch ( const ResourceLimit& e )
        {
            CHECK( e.partial_stats().partial );
            CHECK( e.partial_stats().state_count > 2 );
        }
    }
    options.max_states = 3;
    options.strategy = SearchStrategy::bfs;
    CHECK( explore( corridor_scenario(), options ).stats.state_count == 3 );
}

TEST_CASE( "graph lookup by state" )
{
    const auto s = corridor_scenario();
    const auto graph = explore( s ).graph;
    for ( std::size_t i = 0; i < graph.size(); ++i )
        CHECK( graph.find( graph.view( i ) ) == i );
    const std::vector< std::uint8_t > absent{ 1, 0 };
    CHECK_FALSE( graph.find( absent ) );
}

// Explorer counts equal an independent recursive enumeration; the parallel
// kernel at several worker counts, the serial reference and DFS all produce
// the identical canonical graph.
TEST_CASE( "oracle equivalence on random small scenarios" )
{
    std::mt19937 rng{ 12345 };
    int with_deadlock = 0;
    int with_arrival = 0;
    for ( int round = 0; round < 300; ++round )
    {
        const auto s = random_scenario( rng );
        REQUIRE( validate( s ).empty() );
        CAPTURE( serialize_scenario( s ) );

        const auto oracle = brute_force( s );
        REQUIRE( oracle.states <= 10'000 );

        const auto result = explore( s, with_workers( 1 ) );
        CHECK( result.stats.state_count == oracle.states );
        CHECK( result.stats.move_edge_count == oracle.edges );
        CHECK( result.stats.arrived_count == oracle.arrived );
        CHECK( result.stats.deadlock_count == oracle.deadlocks );
        CHECK( result.stats.max_depth == static_cast< std::uint32_t >( oracle.max_depth ) );

        std::set< std::vector< int > > explored;
        for ( std::size_t i = 0; i < result.graph.size(); ++i )
        {
            const auto bytes = result.graph.view( i );
            explored.emplace( bytes.begin(), bytes.end() );
        }
        CHECK( explored == oracle.reachable );

        require_exhaustive( s, result.graph );
        for ( std::size_t i = 0; i < result.graph.size(); ++i )
            if ( result.graph.parent( i ) != no_parent )
                REQUIRE( replay( s, result.graph.trace_to( i ) ) == result.graph.state( i ) );

        for ( int workers : { 2, 3, 8 } )
            require_same_graph( result.graph, explore( s, with_workers( workers ) ).graph );
        require_same_graph( result.graph, explore_reference( s, {} ).graph );
        ExploreOptions dfs;
        dfs.strategy = SearchStrategy::dfs;
        require_same_graph( result.graph, explore( s, dfs ).graph );

        with_deadlock += oracle.deadlocks > 0;
        with_arrival += oracle.arrived > 0;
    }
    // The generator must exercise both outcomes.
    CHECK( with_deadlock > 20 );
    CHECK( with_arrival > 20 );
}

TEST_CASE( "store_edges=false keeps counts and traces" )
{
    std::mt19937 rng{ 2 };
    for ( int round = 0; round < 50; ++round )
    {
        const auto s = random_scenario( rng );
        ExploreOptions lean;
        lean.store_edges = false;
        const auto full = explore( s );
        const auto light = explore( s, lean );
        CHECK_FALSE( light.graph.has_edges() );
        CHECK( light.stats.same_counts( full.stats ) );
        for ( std::size_t i = 0; i < full.graph.size(); ++i )
            CHECK( light.graph.trace_to( i ) == full.graph.trace_to( i ) );
    }
}
