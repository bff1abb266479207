#include "graph_builder.hpp"

#include <algorithm>
#include <numeric>

namespace railcheck
{

bool ExploreStats::same_counts( const ExploreStats& other ) const
{
    return state_count == other.state_count && move_edge_count == other.move_edge_count &&
           arrived_count == other.arrived_count && deadlock_count == other.deadlock_count &&
           max_depth == other.max_depth && partial == other.partial;
}

std::uint32_t StateGraph::depth( std::size_t index ) const
{
    const auto it = std::upper_bound( _layer_offsets.begin(), _layer_offsets.end(), index );
    return static_cast< std::uint32_t >( it - _layer_offsets.begin() - 1 );
}

std::vector< StateGraph::Edge > StateGraph::edges( std::size_t index ) const
{
    std::vector< Edge > out;
    for ( auto e = _edge_offsets[ index ]; e < _edge_offsets[ index + 1 ]; ++e )
        out.push_back( { TrainId{ _edge_trains[ e ] }, _edge_targets[ e ] } );
    return out;
}

std::size_t StateGraph::out_degree( std::size_t index ) const
{
    return _edge_offsets[ index + 1 ] - _edge_offsets[ index ];
}

std::optional< std::uint32_t > StateGraph::find( StateView state ) const
{
    if ( state.size() != _width )
        return std::nullopt;
    const auto layer = std::accumulate( state.begin(), state.end(), std::size_t{ 0 } );
    if ( layer + 1 >= _layer_offsets.size() )
        return std::nullopt;

    auto lo = std::size_t{ _layer_offsets[ layer ] };
    auto hi = std::size_t{ _layer_offsets[ layer + 1 ] };
    while ( lo < hi )
    {
        const auto mid = lo + ( hi - lo ) / 2;
        if ( lex_less( view( mid ), state ) )
            lo = mid + 1;
        else
            hi = mid;
    }
    if ( lo < _layer_offsets[ layer + 1 ] && std::equal( state.begin(), state.end(), view( lo ).begin() ) )
        return static_cast< std::uint32_t >( lo );
    return std::nullopt;
}

Trace StateGraph::trace_to( std::size_t index ) const
{
    Trace trace;
    for ( auto at = index; _parent[ at ] != no_parent; at = _parent[ at ] )
        trace.push_back( TrainId{ _parent_move[ at ] } );
    std::reverse( trace.begin(), trace.end() );
    return trace;
}

ExploreResult explore( const Scenario& scenario, const ExploreOptions& options )
{
    if ( options.strategy == SearchStrategy::dfs )
        return explore_reference( scenario, options );
    return explore_parallel( scenario, options );
}

std::vector< DeadlockReport > find_deadlocks( const StateGraph& graph )
{
    std::vector< DeadlockReport > out;
    for ( std::size_t i = 0; i < graph.size(); ++i )
        if ( graph.terminal( i ) == Terminal::deadlock )
            out.push_back( { graph.state( i ), graph.trace_to( i ) } );
    return out;
}

std::vector< DeadlockReport > find_deadlocks( const Scenario& scenario, const ExploreOptions& options )
{
    auto opts = options;
    opts.store_edges = false;
    return find_deadlocks( explore( scenario, opts ).graph );
}

std::optional< Trace > shortest_trace_to( const StateGraph& graph, const StatePredicate& goal )
{
    // Index order is BFS order, so the first match is at minimum depth.
    for ( std::size_t i = 0; i < graph.size(); ++i )
        if ( goal( graph.state( i ) ) )
            return graph.trace_to( i );
    return std::nullopt;
}

std::optional< Trace > shortest_trace_to( const Scenario& scenario, const StatePredicate& goal,
                                          const ExploreOptions& options )
{
    auto opts = options;
    opts.store_edges = false;
    return shortest_trace_to( explore( scenario, opts ).graph, goal );
}

SystemState replay( const Scenario& scenario, const Trace& trace )
{
    auto state = initial_state( scenario );
    for ( std::size_t k = 0; k < trace.size(); ++k )
    {
        const auto train = trace[ k ];
        if ( train.index >= scenario.train_count() )
            throw ReplayError{ k + 1, { GuardClause::none, train.index }, state,
                               fmt::format( "step {}: no train {}", k + 1, train.index ) };
        const auto guard = evaluate_guard( scenario, state, train );
        if ( !guard.enabled() )
            throw ReplayError{ k + 1, guard, state,
                               fmt::format( "step {}: train {} cannot move from [{}]: {}", k + 1, train.index,
                                            state.label(), guard.describe( scenario ) ) };
        state = step( scenario, state, train );
    }
    return state;
}

} // namespace railcheck
