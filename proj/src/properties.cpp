#include "railcheck/properties.hpp"

#include <algorithm>
#include <deque>

#include <fmt/format.h>
#include <omp.h>

namespace railcheck
{

void assert_layered( const StateGraph& graph )
{
    if ( !graph.has_edges() )
        return;
    const auto& offsets = graph.edge_offsets();
    const auto& targets = graph.edge_targets();
    const auto& layers = graph.layer_offsets();
    for ( std::size_t layer = 0; layer + 1 < layers.size(); ++layer )
    {
        for ( auto i = layers[ layer ]; i < layers[ layer + 1 ]; ++i )
        {
            for ( auto e = offsets[ i ]; e < offsets[ i + 1 ]; ++e )
            {
                const auto t = targets[ e ];
                if ( layer + 2 >= layers.size() || t < layers[ layer + 1 ] || t >= layers[ layer + 2 ] )
                    throw NotAcyclic{ fmt::format( "edge {} -> {} does not advance one layer", i, t ) };
            }
        }
    }
}

Verdict check_ef_arrived( const StateGraph& graph )
{
    Verdict verdict;
    verdict.checked_states = graph.size();
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        if ( graph.terminal( i ) == Terminal::arrived )
        {
            verdict.holds = true;
            verdict.evidence = graph.trace_to( i );
            break;
        }
    }
    return verdict;
}

Verdict check_af_arrived( const StateGraph& graph )
{
    assert_layered( graph );
    Verdict verdict;
    verdict.holds = true;
    verdict.checked_states = graph.size();
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        if ( graph.terminal( i ) == Terminal::deadlock )
        {
            verdict.holds = false;
            verdict.evidence = graph.trace_to( i );
            break;
        }
    }
    return verdict;
}

Verdict check_ag_ef_arrived( const StateGraph& graph )
{
    if ( !graph.has_edges() )
        throw std::invalid_argument{ "AG EF check needs a graph explored with store_edges" };
    assert_layered( graph );

    const auto n = graph.size();
    const auto& offsets = graph.edge_offsets();
    const auto& targets = graph.edge_targets();

    // Reversed adjacency in CSR form.
    std::vector< std::uint64_t > rev_offsets( n + 1, 0 );
    for ( const auto t : targets )
        ++rev_offsets[ t + 1 ];
    for ( std::size_t i = 0; i < n; ++i )
        rev_offsets[ i + 1 ] += rev_offsets[ i ];
    std::vector< std::uint32_t > rev_sources( targets.size() );
    {
        auto cursor = rev_offsets;
        for ( std::size_t i = 0; i < n; ++i )
            for ( auto e = offsets[ i ]; e < offsets[ i + 1 ]; ++e )
                rev_sources[ cursor[ targets[ e ] ]++ ] = static_cast< std::uint32_t >( i );
    }

    std::vector< bool > reaches( n, false );
    std::deque< std::uint32_t > work;
    for ( std::size_t i = 0; i < n; ++i )
    {
        if ( graph.terminal( i ) == Terminal::arrived )
        {
            reaches[ i ] = true;
            work.push_back( static_cast< std::uint32_t >( i ) );
        }
    }
    while ( !work.empty() )
    {
        const auto at = work.front();
        work.pop_front();
        for ( auto e = rev_offsets[ at ]; e < rev_offsets[ at + 1 ]; ++e )
        {
            const auto source = rev_sources[ e ];
            if ( !reaches[ source ] )
            {
                reaches[ source ] = true;
                work.push_back( source );
            }
        }
    }

    Verdict verdict;
    verdict.holds = true;
    verdict.checked_states = n;
    const auto stuck = std::find( reaches.begin(), reaches.end(), false );
    if ( stuck != reaches.end() )
    {
        verdict.holds = false;
        verdict.evidence = graph.trace_to( static_cast< std::size_t >( stuck - reaches.begin() ) );
    }
    return verdict;
}

Verdict check_safety( const Scenario& scenario, const StateGraph& graph, int workers )
{
    const TransitionKernel kernel{ scenario };
    const auto n = graph.size();
    const auto trains = scenario.train_count();
    const auto sections = scenario.section_count();

    std::vector< std::int32_t > limits;
    for ( const auto& section : scenario.sections )
        limits.push_back( section.limit );

    std::size_t first_bad = n;
#pragma omp parallel num_threads( std::max( 1, workers ) )
    {
        std::vector< std::int32_t > occupancy( sections );
        std::vector< std::int32_t > endpoints( trains );
        std::size_t local_bad = n;

#pragma omp for schedule( static )
        for ( std::size_t i = 0; i < n; ++i )
        {
            const auto state = graph.view( i );
            for ( std::size_t t = 0; t < trains; ++t )
                endpoints[ t ] = scenario.missions[ t ][ state[ t ] ].value;
            std::sort( endpoints.begin(), endpoints.end() );
            bool ok = std::adjacent_find( endpoints.begin(), endpoints.end() ) == endpoints.end();

            kernel.counters( state, occupancy );
            for ( std::size_t s = 0; s < sections && ok; ++s )
                ok = occupancy[ s ] <= limits[ s ];

            if ( !ok && i < local_bad )
                local_bad = i;
        }

#pragma omp critical
        first_bad = std::min( first_bad, local_bad );
    }

    Verdict verdict;
    verdict.holds = first_bad == n;
    verdict.checked_states = n;
    if ( !verdict.holds )
        verdict.evidence = graph.trace_to( first_bad );
    return verdict;
}

Verdict check_ef_arrived( const Scenario& scenario, const ExploreOptions& options )
{
    return check_ef_arrived( explore( scenario, options ).graph );
}

Verdict check_af_arrived( const Scenario& scenario, const ExploreOptions& options )
{
    return check_af_arrived( explore( scenario, options ).graph );
}

Verdict check_ag_ef_arrived( const Scenario& scenario, const ExploreOptions& options )
{
    auto opts = options;
    opts.store_edges = true;
    return check_ag_ef_arrived( explore( scenario, opts ).graph );
}

Verdict check_safety( const Scenario& scenario, const ExploreOptions& options )
{
    return check_safety( scenario, explore( scenario, options ).graph, options.worker_count );
}

} // namespace railcheck
