// Parallel layer kernel against the serial reference on the eight-train scenario.
#include "railcheck/explorer.hpp"
#include "railcheck/scenario_dsl.hpp"

#include <benchmark/benchmark.h>

using namespace railcheck;

namespace
{

const Scenario& yard()
{
    static const auto scenario = builtin_oneway8();
    return scenario;
}

void parallel_kernel( benchmark::State& state )
{
    ExploreOptions options;
    options.worker_count = static_cast< int >( state.range( 0 ) );
    options.store_edges = state.range( 1 ) != 0;
    for ( auto _ : state )
        benchmark::DoNotOptimize( explore_parallel( yard(), options ).stats.state_count );
}

void serial_reference( benchmark::State& state )
{
    ExploreOptions options;
    options.store_edges = state.range( 0 ) != 0;
    for ( auto _ : state )
        benchmark::DoNotOptimize( explore_reference( yard(), options ).stats.state_count );
}

} // namespace

BENCHMARK( parallel_kernel )
    ->ArgsProduct( { { 1, 2, 4, 8 }, { 0, 1 } } )
    ->ArgNames( { "workers", "edges" } )
    ->Unit( benchmark::kMillisecond )
    ->UseRealTime();
BENCHMARK( serial_reference )->Arg( 0 )->Arg( 1 )->ArgName( "edges" )->Unit( benchmark::kMillisecond )->UseRealTime();

BENCHMARK_MAIN();
