#include "graph_builder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <numeric>
#include <string_view>

#include <omp.h>

namespace railcheck
{

namespace
{

constexpr std::size_t shard_bits = 6;
constexpr std::size_t shard_count = std::size_t{ 1 } << shard_bits;

std::uint64_t hash_state( const std::uint8_t* bytes, std::size_t width )
{
    return std::hash< std::string_view >{}( { reinterpret_cast< const char* >( bytes ), width } );
}

// Per-layer scratch buffers, reused across layers.
struct LayerScratch
{
    std::vector< std::uint8_t > slot_children;
    std::vector< std::uint16_t > slot_trains;
    std::vector< std::uint32_t > degree;
    std::vector< std::uint64_t > offset;

    std::vector< std::uint8_t > children; // candidate successor states
    std::vector< std::uint16_t > trains;  // moving train per candidate
    std::vector< std::uint32_t > parents; // source state per candidate
    std::vector< std::uint64_t > hashes;
    std::vector< std::uint32_t > representative;
    std::vector< std::uint32_t > by_shard;
    std::vector< std::uint32_t > unique;
    std::vector< std::uint32_t > target;
};

// First-writer-wins deduplication of the candidates of one shard. The
// candidates arrive in ascending index order, so the representative of each
// distinct state is its earliest candidate.
void dedup_shard( std::span< const std::uint32_t > members, std::size_t width, LayerScratch& scratch )
{
    if ( members.empty() )
        return;
    const auto capacity = std::bit_ceil( 2 * members.size() );
    const auto mask = capacity - 1;
    std::vector< std::uint32_t > table( capacity, no_parent );

    for ( const auto c : members )
    {
        const auto* bytes = scratch.children.data() + std::size_t{ c } * width;
        auto slot = ( scratch.hashes[ c ] >> shard_bits ) & mask;
        while ( true )
        {
            const auto occupant = table[ slot ];
            if ( occupant == no_parent )
            {
                table[ slot ] = c;
                scratch.representative[ c ] = c;
                break;
            }
            if ( scratch.hashes[ occupant ] == scratch.hashes[ c ] &&
                 std::memcmp( scratch.children.data() + std::size_t{ occupant } * width, bytes, width ) == 0 )
            {
                scratch.representative[ c ] = occupant;
                break;
            }
            slot = ( slot + 1 ) & mask;
        }
    }
}

} // namespace

ExploreResult explore_parallel( const Scenario& scenario, const ExploreOptions& options )
{
    const auto started = std::chrono::steady_clock::now();
    const TransitionKernel kernel{ scenario };
    const auto width = kernel.width();
    const auto fanout = kernel.max_successors();
    const int workers = std::max( 1, options.worker_count );

    GraphBuilder builder{ width, options.store_edges };
    ExploreStats stats;

    check_state_cap( stats, 1, options.max_states );
    builder.begin_layer();
    builder.append_state( initial_state( scenario ).view(), no_parent, 0 );

    LayerScratch scratch;
    std::size_t layer_begin = 0;
    std::size_t layer_end = 1;
    std::uint32_t depth = 0;

    while ( layer_begin < layer_end )
    {
        const auto layer_size = layer_end - layer_begin;
        const auto& graph = builder.graph();

        // Expansion: every state writes into its own fixed block of slots.
        scratch.slot_children.resize( layer_size * fanout * width );
        scratch.slot_trains.resize( layer_size * fanout );
        scratch.degree.resize( layer_size );

#pragma omp parallel for schedule( dynamic, 256 ) num_threads( workers )
        for ( std::size_t s = 0; s < layer_size; ++s )
        {
            scratch.degree[ s ] = static_cast< std::uint32_t >(
                kernel.expand( graph.view( layer_begin + s ),
                               { scratch.slot_children.data() + s * fanout * width, fanout * width },
                               { scratch.slot_trains.data() + s * fanout, fanout } ) );
        }

        scratch.offset.resize( layer_size + 1 );
        scratch.offset[ 0 ] = 0;
        std::inclusive_scan( scratch.degree.begin(), scratch.degree.end(), scratch.offset.begin() + 1,
                             std::plus<>{}, std::uint64_t{ 0 } );
        const auto candidates = static_cast< std::size_t >( scratch.offset[ layer_size ] );

        // Compaction into candidate order: source index ascending, then train.
        scratch.children.resize( candidates * width );
        scratch.trains.resize( candidates );
        scratch.parents.resize( candidates );
        scratch.hashes.resize( candidates );

#pragma omp parallel for schedule( static ) num_threads( workers )
        for ( std::size_t s = 0; s < layer_size; ++s )
        {
            const auto first = scratch.offset[ s ];
            const auto degree = scratch.degree[ s ];
            std::memcpy( scratch.children.data() + first * width, scratch.slot_children.data() + s * fanout * width,
                         degree * width );
            for ( std::uint32_t k = 0; k < degree; ++k )
            {
                const auto c = first + k;
                scratch.trains[ c ] = scratch.slot_trains[ s * fanout + k ];
                scratch.parents[ c ] = static_cast< std::uint32_t >( layer_begin + s );
                scratch.hashes[ c ] = hash_state( scratch.children.data() + c * width, width );
            }
        }

        for ( std::size_t s = 0; s < layer_size; ++s )
        {
            if ( scratch.degree[ s ] != 0 )
                continue;
            const auto index = layer_begin + s;
            builder.set_terminal( index, kernel.is_arrived( graph.view( index ) ) ? Terminal::arrived
                                                                                   : Terminal::deadlock );
        }
        stats.move_edge_count += candidates;

        // Hash-partitioned duplicate detection.
        std::array< std::size_t, shard_count + 1 > shard_begin{};
        for ( std::size_t c = 0; c < candidates; ++c )
            ++shard_begin[ ( scratch.hashes[ c ] & ( shard_count - 1 ) ) + 1 ];
        std::partial_sum( shard_begin.begin(), shard_begin.end(), shard_begin.begin() );
        scratch.by_shard.resize( candidates );
        {
            auto cursor = shard_begin;
            for ( std::size_t c = 0; c < candidates; ++c )
                scratch.by_shard[ cursor[ scratch.hashes[ c ] & ( shard_count - 1 ) ]++ ] =
                    static_cast< std::uint32_t >( c );
        }

        scratch.representative.resize( candidates );
#pragma omp parallel for schedule( dynamic, 1 ) num_threads( workers )
        for ( std::size_t shard = 0; shard < shard_count; ++shard )
        {
            dedup_shard( { scratch.by_shard.data() + shard_begin[ shard ], shard_begin[ shard + 1 ] - shard_begin[ shard ] },
                         width, scratch );
        }

        // Renumbering: distinct states of the next layer in lexicographic order.
        scratch.unique.clear();
        for ( std::size_t c = 0; c < candidates; ++c )
            if ( scratch.representative[ c ] == c )
                scratch.unique.push_back( static_cast< std::uint32_t >( c ) );

        const auto bytes_of = [ & ]( std::uint32_t c ) -> StateView
        {
            return { scratch.children.data() + std::size_t{ c } * width, width };
        };
        std::sort( scratch.unique.begin(), scratch.unique.end(),
                   [ & ]( std::uint32_t a, std::uint32_t b ) { return lex_less( bytes_of( a ), bytes_of( b ) ); } );

        check_state_cap( stats, builder.size() + scratch.unique.size(), options.max_states );

        // target[] first maps each distinct state to its new index, then every candidate.
        scratch.target.resize( candidates );
        for ( std::size_t rank = 0; rank < scratch.unique.size(); ++rank )
            scratch.target[ scratch.unique[ rank ] ] = static_cast< std::uint32_t >( layer_end + rank );

#pragma omp parallel for schedule( static ) num_threads( workers )
        for ( std::size_t c = 0; c < candidates; ++c )
            if ( scratch.representative[ c ] != c )
                scratch.target[ c ] = scratch.target[ scratch.representative[ c ] ];

        for ( std::size_t s = 0; s < layer_size; ++s )
        {
            const auto first = scratch.offset[ s ];
            builder.close_state( { scratch.trains.data() + first, scratch.degree[ s ] },
                                 { scratch.target.data() + first, scratch.degree[ s ] } );
        }

        if ( scratch.unique.empty() )
            break;

        builder.begin_layer();
        for ( const auto c : scratch.unique )
            builder.append_state( bytes_of( c ), scratch.parents[ c ], scratch.trains[ c ] );

        layer_begin = layer_end;
        layer_end = builder.size();
        ++depth;
    }

    auto graph = builder.finish();
    stats.state_count = graph.size();
    for ( std::size_t i = 0; i < graph.size(); ++i )
    {
        stats.arrived_count += graph.terminal( i ) == Terminal::arrived;
        stats.deadlock_count += graph.terminal( i ) == Terminal::deadlock;
    }
    stats.max_depth = depth;
    stats.wall_time =
        std::chrono::duration_cast< std::chrono::milliseconds >( std::chrono::steady_clock::now() - started );
    return { std::move( graph ), stats };
}

} // namespace railcheck
