#include "graph_builder.hpp"

#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace railcheck
{

namespace
{

std::string key_of( const SystemState& state )
{
    const auto& bytes = state.encoding();
    return { bytes.begin(), bytes.end() };
}

std::uint32_t progress_sum( const std::string& key )
{
    return std::accumulate( key.begin(), key.end(), std::uint32_t{ 0 },
                            []( std::uint32_t acc, char c ) { return acc + static_cast< std::uint8_t >( c ); } );
}

StateView view_of( const std::string& key )
{
    return { reinterpret_cast< const std::uint8_t* >( key.data() ), key.size() };
}

void finalize_stats( ExploreStats& stats, const StateGraph& graph, std::chrono::steady_clock::time_point started )
{
    stats.state_count = graph.size();
    stats.arrived_count = 0;
    stats.deadlock_count = 0;
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        stats.arrived_count += graph.terminal( i ) == Terminal::arrived;
        stats.deadlock_count += graph.terminal( i ) == Terminal::deadlock;
    }
    stats.max_depth = static_cast< std::uint32_t >( graph.layer_offsets().size() - 2 );
    stats.wall_time =
        std::chrono::duration_cast< std::chrono::milliseconds >( std::chrono::steady_clock::now() - started );
}

// Expands `index` through the public successor function and records its
// edges. Targets must already be numbered in `numbering`.
void close_with_successors( const Scenario& scenario, GraphBuilder& builder, std::size_t index,
                            const std::unordered_map< std::string, std::uint32_t >& numbering, ExploreStats& stats )
{
    const auto next = successors( scenario, builder.graph().state( index ) );
    std::vector< std::uint16_t > trains;
    std::vector< std::uint32_t > targets;
    for ( const auto& [ train, child ] : next )
    {
        trains.push_back( train.index );
        targets.push_back( numbering.at( key_of( child ) ) );
    }
    if ( next.empty() )
        builder.set_terminal( index, is_arrived( scenario, builder.graph().state( index ) ) ? Terminal::arrived
                                                                                            : Terminal::deadlock );
    stats.move_edge_count += next.size();
    builder.close_state( trains, targets );
}

ExploreResult explore_bfs( const Scenario& scenario, const ExploreOptions& options )
{
    const auto started = std::chrono::steady_clock::now();
    const auto width = scenario.train_count();
    GraphBuilder builder{ width, options.store_edges };
    ExploreStats stats;

    std::unordered_map< std::string, std::uint32_t > visited;
    const auto root = initial_state( scenario );
    check_state_cap( stats, 1, options.max_states );
    visited.emplace( key_of( root ), 0 );
    builder.begin_layer();
    builder.append_state( root.view(), no_parent, 0 );

    std::size_t layer_begin = 0;
    std::size_t layer_end = 1;
    while ( layer_begin < layer_end )
    {
        struct Discovery
        {
            std::string key;
            std::uint32_t parent;
            std::uint16_t train;
        };
        std::vector< Discovery > discovered;

        for ( auto index = layer_begin; index < layer_end; ++index )
        {
            for ( const auto& [ train, child ] : successors( scenario, builder.graph().state( index ) ) )
            {
                auto key = key_of( child );
                if ( visited.emplace( key, no_parent ).second )
                    discovered.push_back( { std::move( key ), static_cast< std::uint32_t >( index ), train.index } );
            }
        }

        std::sort( discovered.begin(), discovered.end(),
                   []( const Discovery& a, const Discovery& b ) { return a.key < b.key; } );
        check_state_cap( stats, builder.size() + discovered.size(), options.max_states );
        for ( std::size_t rank = 0; rank < discovered.size(); ++rank )
            visited[ discovered[ rank ].key ] = static_cast< std::uint32_t >( layer_end + rank );

        for ( auto index = layer_begin; index < layer_end; ++index )
            close_with_successors( scenario, builder, index, visited, stats );

        if ( discovered.empty() )
            break;
        builder.begin_layer();
        for ( const auto& d : discovered )
            builder.append_state( view_of( d.key ), d.parent, d.train );
        layer_begin = layer_end;
        layer_end = builder.size();
    }

    auto graph = builder.finish();
    finalize_stats( stats, graph, started );
    return { std::move( graph ), stats };
}

ExploreResult explore_dfs( const Scenario& scenario, const ExploreOptions& options )
{
    const auto started = std::chrono::steady_clock::now();
    ExploreStats stats;

    std::unordered_set< std::string > visited;
    std::vector< SystemState > stack{ initial_state( scenario ) };
    visited.insert( key_of( stack.back() ) );
    check_state_cap( stats, visited.size(), options.max_states );
    while ( !stack.empty() )
    {
        const auto state = std::move( stack.back() );
        stack.pop_back();
        for ( auto& [ train, child ] : successors( scenario, state ) )
        {
            if ( visited.insert( key_of( child ) ).second )
            {
                check_state_cap( stats, visited.size(), options.max_states );
                stack.push_back( std::move( child ) );
            }
        }
    }

    // Canonical numbering: every move adds one to the progress sum, so the
    // sum is the BFS depth.
    std::vector< std::string > ordered( visited.begin(), visited.end() );
    std::sort( ordered.begin(), ordered.end(), []( const std::string& a, const std::string& b )
    {
        const auto da = progress_sum( a );
        const auto db = progress_sum( b );
        return da != db ? da < db : a < b;
    } );

    std::unordered_map< std::string, std::uint32_t > numbering;
    for ( std::size_t i = 0; i < ordered.size(); ++i )
        numbering.emplace( ordered[ i ], static_cast< std::uint32_t >( i ) );

    // Parent of a state: first predecessor in index order, then lowest train.
    std::vector< std::uint32_t > parent( ordered.size(), no_parent );
    std::vector< std::uint16_t > parent_move( ordered.size(), 0 );
    for ( std::size_t i = 0; i < ordered.size(); ++i )
    {
        for ( const auto& [ train, child ] : successors( scenario, SystemState{ view_of( ordered[ i ] ) } ) )
        {
            const auto target = numbering.at( key_of( child ) );
            if ( parent[ target ] == no_parent )
            {
                parent[ target ] = static_cast< std::uint32_t >( i );
                parent_move[ target ] = train.index;
            }
        }
    }

    GraphBuilder builder{ scenario.train_count(), options.store_edges };
    std::uint32_t current_depth = UINT32_MAX;
    for ( std::size_t i = 0; i < ordered.size(); ++i )
    {
        const auto depth = progress_sum( ordered[ i ] );
        if ( depth != current_depth )
        {
            builder.begin_layer();
            current_depth = depth;
        }
        builder.append_state( view_of( ordered[ i ] ), parent[ i ], parent_move[ i ] );
    }
    for ( std::size_t i = 0; i < ordered.size(); ++i )
        close_with_successors( scenario, builder, i, numbering, stats );

    auto graph = builder.finish();
    finalize_stats( stats, graph, started );
    return { std::move( graph ), stats };
}

} // namespace

ExploreResult explore_reference( const Scenario& scenario, const ExploreOptions& options )
{
    return options.strategy == SearchStrategy::dfs ? explore_dfs( scenario, options )
                                                   : explore_bfs( scenario, options );
}

} // namespace railcheck
