// Full eight-train scenario. Expected totals come from an independent
// enumeration and agree with published tool listings.
#include "railcheck/goal.hpp"
#include "railcheck/properties.hpp"
#include "railcheck/scenario_dsl.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>

#include <omp.h>

#include <random>

using namespace railcheck;
using namespace railcheck::testing;

namespace
{

const ExploreResult& nominal()
{
    static const auto result = explore( builtin_oneway8() );
    return result;
}

Scenario with_limits( int a, int b )
{
    return load_scenario( scenario_path( "paper8.rail" ), { { "A", a }, { "B", b } } );
}

} // namespace

TEST_CASE( "limits 7/7: counts" )
{
    const auto& [ graph, stats ] = nominal();
    CHECK( stats.state_count == 1'636'545 );
    CHECK( stats.move_edge_count == 7'134'232 );
    CHECK( stats.deadlock_count == 0 );
    CHECK( stats.arrived_count == 1 );
    CHECK( stats.max_depth == 48 );
    CHECK_FALSE( stats.partial );
    CHECK_NOTHROW( assert_layered( graph ) );
}

TEST_CASE( "limits 7/7: all properties hold" )
{
    const auto yard = builtin_oneway8();
    const auto& graph = nominal().graph;
    CHECK( check_safety( yard, graph, omp_get_max_threads() ).holds );
    CHECK( check_af_arrived( graph ).holds );
    CHECK( check_ag_ef_arrived( graph ).holds );

    const auto ef = check_ef_arrived( graph );
    REQUIRE( ef.holds );
    REQUIRE( ef.evidence );
    CHECK( ef.evidence->size() == 48 );
    CHECK( is_arrived( yard, replay( yard, *ef.evidence ) ) );
}

TEST_CASE( "limits 7/7: goal traces" )
{
    const auto yard = builtin_oneway8();
    const auto& graph = nominal().graph;

    const auto both = parse_goal( "P0=6 & P4=6", yard );
    const auto trace = shortest_trace_to( graph, both );
    REQUIRE( trace );
    CHECK( both( replay( yard, *trace ) ) );

    // Trains 0 and 1 would both sit on endpoint 9.
    CHECK_FALSE( shortest_trace_to( graph, parse_goal( "P0=1 & P1=1", yard ) ) );
}

TEST_CASE( "raising one limit to 8 admits eight deadlocks" )
{
    for ( const auto& [ a, b ] : { std::pair{ 8, 7 }, std::pair{ 7, 8 } } )
    {
        CAPTURE( a );
        const auto s = with_limits( a, b );
        const auto [ graph, stats ] = explore( s );
        CHECK( stats.state_count == 1'636'553 );
        CHECK( stats.move_edge_count == 7'134'264 );
        CHECK( stats.deadlock_count == 8 );

        const auto deadlocks = find_deadlocks( graph );
        REQUIRE( deadlocks.size() == 8 );
        for ( const auto& d : deadlocks )
        {
            CHECK( d.trace.size() == 20 );
            const auto end = replay( s, d.trace );
            CHECK( end == d.state );
            CHECK( successors( s, end ).empty() );
            CHECK_FALSE( is_arrived( s, end ) );
        }

        const auto af = check_af_arrived( graph );
        CHECK_FALSE( af.holds );
        REQUIRE( af.evidence );
        CHECK( af.evidence->size() == 20 );
        CHECK_FALSE( check_ag_ef_arrived( graph ).holds );
        CHECK( check_ef_arrived( graph ).holds );
        CHECK( check_safety( s, graph ).holds );
    }
}

TEST_CASE( "a sample of explored states has exactly the expected successors" )
{
    const auto yard = builtin_oneway8();
    const auto& graph = nominal().graph;
    std::mt19937 rng{ 4 };
    std::uniform_int_distribution< std::size_t > pick{ 0, graph.size() - 1 };
    for ( int i = 0; i < 20'000; ++i )
    {
        const auto index = pick( rng );
        const auto next = successors( yard, graph.state( index ) );
        const auto edges = graph.edges( index );
        REQUIRE( edges.size() == next.size() );
        for ( std::size_t k = 0; k < edges.size(); ++k )
        {
            REQUIRE( edges[ k ].train == next[ k ].train );
            REQUIRE( graph.state( edges[ k ].target ) == next[ k ].state );
        }
        if ( graph.parent( index ) != no_parent )
            REQUIRE( replay( yard, graph.trace_to( index ) ) == graph.state( index ) );
    }
}

TEST_CASE( "parallel kernel matches the serial reference at full scale" )
{
    const auto yard = builtin_oneway8();
    const auto& base = nominal();
    ExploreOptions lean;
    lean.store_edges = false;
    const auto reference = explore_reference( yard, lean );
    CHECK( reference.stats.same_counts( base.stats ) );
    CHECK( reference.graph.layer_offsets() == base.graph.layer_offsets() );

    lean.worker_count = 4;
    const auto four = explore( yard, lean );
    CHECK( four.stats.same_counts( base.stats ) );
    std::mt19937 rng{ 9 };
    std::uniform_int_distribution< std::size_t > pick{ 0, base.graph.size() - 1 };
    for ( int i = 0; i < 10'000; ++i )
    {
        const auto index = pick( rng );
        REQUIRE( four.graph.state( index ) == base.graph.state( index ) );
        REQUIRE( reference.graph.state( index ) == base.graph.state( index ) );
        REQUIRE( four.graph.parent( index ) == base.graph.parent( index ) );
    }
}
