#pragma once

#include "railcheck/explorer.hpp"

#include <algorithm>
#include <cstring>
#include <fmt/format.h>

namespace railcheck
{

// Write access to StateGraph for the exploration kernels. States must be
// appended one BFS layer at a time, already in canonical order.
class GraphBuilder
{
    StateGraph _graph;
    bool _store_edges;

public:
    GraphBuilder( std::size_t width, bool store_edges ) : _store_edges{ store_edges }
    {
        _graph._width = width;
        if ( _store_edges )
            _graph._edge_offsets.push_back( 0 );
    }

    [[nodiscard]] const StateGraph& graph() const { return _graph; }
    [[nodiscard]] std::size_t size() const { return _graph._terminal.size(); }
    [[nodiscard]] bool store_edges() const { return _store_edges; }

    void begin_layer() { _graph._layer_offsets.push_back( static_cast< std::uint32_t >( size() ) ); }

    void append_state( StateView state, std::uint32_t parent, std::uint16_t move )
    {
        _graph._states.insert( _graph._states.end(), state.begin(), state.end() );
        _graph._parent.push_back( parent );
        _graph._parent_move.push_back( move );
        _graph._terminal.push_back( Terminal::internal );
    }

    void set_terminal( std::size_t index, Terminal terminal ) { _graph._terminal[ index ] = terminal; }

    // Out-edges of the next state in index order; states must be closed in order.
    void close_state( std::span< const std::uint16_t > trains, std::span< const std::uint32_t > targets )
    {
        if ( !_store_edges )
            return;
        _graph._edge_trains.insert( _graph._edge_trains.end(), trains.begin(), trains.end() );
        _graph._edge_targets.insert( _graph._edge_targets.end(), targets.begin(), targets.end() );
        _graph._edge_offsets.push_back( _graph._edge_targets.size() );
    }

    StateGraph finish()
    {
        _graph._layer_offsets.push_back( static_cast< std::uint32_t >( size() ) );
        // Drop a trailing empty layer opened by the kernels.
        while ( _graph._layer_offsets.size() >= 2 &&
                _graph._layer_offsets[ _graph._layer_offsets.size() - 2 ] == _graph._layer_offsets.back() )
            _graph._layer_offsets.pop_back();
        return std::move( _graph );
    }
};

inline void check_state_cap( ExploreStats stats, std::uint64_t discovered, std::uint64_t cap )
{
    if ( discovered <= cap )
        return;
    stats.state_count = discovered;
    stats.partial = true;
    throw ResourceLimit{ stats, fmt::format( "state cap of {} exceeded ({} states discovered, counts are partial)",
                                             cap, discovered ) };
}

inline bool lex_less( StateView a, StateView b )
{
    return std::memcmp( a.data(), b.data(), a.size() ) < 0;
}

} // namespace railcheck
