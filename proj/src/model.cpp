#include "railcheck/model.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <set>

#include <fmt/format.h>

namespace railcheck
{

std::optional< std::size_t > Scenario::find_section( std::string_view section_name ) const
{
    for ( std::size_t s = 0; s < sections.size(); ++s )
        if ( sections[ s ].name == section_name )
            return s;
    return std::nullopt;
}

std::string SystemState::hex() const
{
    std::string out;
    out.reserve( 2 * _progress.size() );
    for ( auto byte : _progress )
        out += fmt::format( "{:02x}", byte );
    return out;
}

std::string SystemState::label() const
{
    std::string out;
    for ( std::size_t i = 0; i < _progress.size(); ++i )
    {
        if ( i > 0 )
            out += ',';
        out += std::to_string( _progress[ i ] );
    }
    return out;
}

std::string GuardResult::describe( const Scenario& scenario ) const
{
    switch ( failed )
    {
    case GuardClause::none:
        return "enabled";
    case GuardClause::mission_complete:
        return "mission already complete";
    case GuardClause::endpoint_occupied:
        return fmt::format( "next endpoint occupied by train {}", culprit );
    case GuardClause::section_saturated:
        return fmt::format( "move would saturate section {}", scenario.sections.at( culprit ).name );
    }
    return "unknown";
}

namespace
{

bool is_identifier( const std::string& text )
{
    if ( text.empty() )
        return false;
    return std::all_of( text.begin(), text.end(), []( char c )
    {
        return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || ( c >= '0' && c <= '9' ) || c == '_';
    } );
}

} // namespace

std::vector< ValidationError > validate( const Scenario& scenario )
{
    std::vector< ValidationError > errors;
    const auto report = [ & ]( std::string location, std::string message, std::optional< std::size_t > train = {},
                               std::optional< std::size_t > section = {} )
    {
        errors.push_back( { std::move( location ), std::move( message ), train, section } );
    };

    const auto n = scenario.train_count();
    const auto len = scenario.mission_len;

    if ( std::any_of( scenario.name.begin(), scenario.name.end(),
                      []( char c ) { return c == '"' || static_cast< unsigned char >( c ) < 32 ||
                                            static_cast< unsigned char >( c ) > 126; } ) )
        report( "name", "scenario name must be printable ASCII without quotes" );
    if ( n == 0 )
        report( "missions", "scenario has no trains" );
    if ( len == 0 )
        report( "mission_len", "mission length must be positive" );
    if ( len > max_mission_len )
        report( "mission_len", fmt::format( "mission length {} exceeds {}", len, max_mission_len ) );
    if ( n * len > max_train_steps )
        report( "missions", fmt::format( "train count times mission length exceeds {}", max_train_steps ) );
    if ( scenario.max_endpoint < 1 )
        report( "endpoints", "endpoint bound must be positive" );

    for ( std::size_t i = 0; i < n; ++i )
    {
        const auto& mission = scenario.missions[ i ];
        if ( mission.size() != len )
        {
            report( fmt::format( "missions[{}]", i ),
                    fmt::format( "mission has {} entries, expected {}", mission.size(), len ), i );
            continue;
        }
        for ( std::size_t k = 0; k < mission.size(); ++k )
        {
            const auto e = mission[ k ].value;
            if ( e < 1 || e > scenario.max_endpoint )
                report( fmt::format( "missions[{}][{}]", i, k ),
                        fmt::format( "endpoint {} out of range 1..{}", e, scenario.max_endpoint ), i );
            if ( k > 0 && mission[ k - 1 ] == mission[ k ] )
                report( fmt::format( "missions[{}][{}]", i, k ),
                        fmt::format( "consecutive entries repeat endpoint {}", e ), i );
        }
    }

    for ( std::size_t i = 0; i < n; ++i )
    {
        if ( scenario.missions[ i ].empty() )
            continue;
        for ( std::size_t j = 0; j < i; ++j )
        {
            if ( !scenario.missions[ j ].empty() && scenario.missions[ j ][ 0 ] == scenario.missions[ i ][ 0 ] )
            {
                report( fmt::format( "missions[{}][0]", i ),
                        fmt::format( "duplicate initial endpoint {} (also train {})",
                                     scenario.missions[ i ][ 0 ].value, j ), i );
                break;
            }
        }
    }

    std::set< std::string > names;
    for ( std::size_t s = 0; s < scenario.sections.size(); ++s )
    {
        const auto& section = scenario.sections[ s ];
        const auto where = fmt::format( "sections[{}]", s );

        if ( !is_identifier( section.name ) )
            report( where, fmt::format( "invalid section name '{}'", section.name ), {}, s );
        else if ( !names.insert( section.name ).second )
            report( where, fmt::format( "duplicate section name '{}'", section.name ), {}, s );

        if ( section.initial_occupancy < 0 )
            report( where, "initial occupancy is negative", {}, s );
        if ( section.initial_occupancy > section.limit )
            report( where,
                    fmt::format( "initial occupancy {} exceeds limit {}", section.initial_occupancy, section.limit ),
                    {}, s );

        if ( section.increments.size() != n )
            report( where + ".increments", fmt::format( "section {} has {} rows, expected {}", section.name,
                                                        section.increments.size(), n ), {}, s );

        for ( std::size_t i = 0; i < section.increments.size(); ++i )
        {
            const auto& row = section.increments[ i ];
            const auto row_where = fmt::format( "{}.increments[{}]", where, i );
            if ( row.size() != len )
            {
                report( row_where, fmt::format( "row has {} entries, expected {}", row.size(), len ), i, s );
                continue;
            }
            for ( std::size_t k = 0; k < row.size(); ++k )
                if ( row[ k ] < -1 || row[ k ] > 1 )
                    report( fmt::format( "{}[{}]", row_where, k ),
                            fmt::format( "increment out of range: {}", row[ k ] ), i, s );
            if ( !row.empty() && row[ 0 ] != 0 )
                report( row_where + "[0]", "index 0 increment must be 0", i, s );
        }
    }

    return errors;
}

SystemState initial_state( const Scenario& scenario )
{
    return SystemState{ std::vector< std::uint8_t >( scenario.train_count(), 0 ) };
}

std::vector< int > counters( const Scenario& scenario, const SystemState& state )
{
    assert( state.size() == scenario.train_count() );
    std::vector< int > result;
    result.reserve( scenario.sections.size() );
    for ( const auto& section : scenario.sections )
    {
        int total = section.initial_occupancy;
        for ( std::size_t i = 0; i < state.size(); ++i )
            for ( int k = 1; k <= state[ i ]; ++k )
                total += section.increments[ i ][ k ];
        result.push_back( total );
    }
    return result;
}

GuardResult evaluate_guard( const Scenario& scenario, const SystemState& state, TrainId train )
{
    const auto i = std::size_t{ train.index };
    const auto p = static_cast< std::size_t >( state[ i ] );
    if ( p + 1 >= scenario.mission_len )
        return { GuardClause::mission_complete, i };

    const auto next = scenario.missions[ i ][ p + 1 ];
    for ( std::size_t j = 0; j < state.size(); ++j )
        if ( j != i && scenario.missions[ j ][ state[ j ] ] == next )
            return { GuardClause::endpoint_occupied, j };

    const auto occupancy = counters( scenario, state );
    for ( std::size_t s = 0; s < scenario.sections.size(); ++s )
        if ( occupancy[ s ] + scenario.sections[ s ].increments[ i ][ p + 1 ] > scenario.sections[ s ].limit )
            return { GuardClause::section_saturated, s };

    return {};
}

bool enabled( const Scenario& scenario, const SystemState& state, TrainId train )
{
    return evaluate_guard( scenario, state, train ).enabled();
}

SystemState step( const Scenario& scenario, const SystemState& state, TrainId train )
{
    const auto guard = evaluate_guard( scenario, state, train );
    if ( !guard.enabled() )
        throw NotEnabled{ guard, fmt::format( "train {} cannot move: {}", train.index, guard.describe( scenario ) ) };

    auto progress = state.encoding();
    ++progress[ train.index ];
    return SystemState{ std::move( progress ) };
}

std::vector< Successor > successors( const Scenario& scenario, const SystemState& state )
{
    std::vector< Successor > result;
    for ( std::size_t i = 0; i < scenario.train_count(); ++i )
    {
        const TrainId train{ static_cast< std::uint16_t >( i ) };
        if ( enabled( scenario, state, train ) )
            result.push_back( { train, step( scenario, state, train ) } );
    }
    return result;
}

bool is_arrived( const Scenario& scenario, StateView state )
{
    return std::all_of( state.begin(), state.end(),
                        [ & ]( std::uint8_t p ) { return p + 1u == scenario.mission_len; } );
}

bool is_arrived( const Scenario& scenario, const SystemState& state )
{
    return is_arrived( scenario, state.view() );
}

EndpointId position( const Scenario& scenario, const SystemState& state, TrainId train )
{
    return scenario.missions.at( train.index ).at( state.at( train ) );
}

bool is_collision_free( const Scenario& scenario, const SystemState& state )
{
    std::set< std::int32_t > seen;
    for ( std::size_t i = 0; i < state.size(); ++i )
        if ( !seen.insert( scenario.missions[ i ][ state[ i ] ].value ).second )
            return false;
    return true;
}

bool within_limits( const Scenario& scenario, const SystemState& state )
{
    const auto occupancy = counters( scenario, state );
    for ( std::size_t s = 0; s < occupancy.size(); ++s )
        if ( occupancy[ s ] > scenario.sections[ s ].limit )
            return false;
    return true;
}

TransitionKernel::TransitionKernel( const Scenario& scenario )
    : _trains{ scenario.train_count() }, _len{ scenario.mission_len }, _sections{ scenario.section_count() }
{
    _endpoints.resize( _trains * _len );
    for ( std::size_t i = 0; i < _trains; ++i )
        for ( std::size_t k = 0; k < _len; ++k )
            _endpoints[ i * _len + k ] = scenario.missions[ i ][ k ].value;

    _increments.resize( _sections * _trains * _len );
    _prefix.resize( _sections * _trains * _len );
    for ( std::size_t s = 0; s < _sections; ++s )
    {
        const auto& section = scenario.sections[ s ];
        _base.push_back( section.initial_occupancy );
        _limits.push_back( section.limit );
        for ( std::size_t i = 0; i < _trains; ++i )
        {
            std::int32_t running = 0;
            for ( std::size_t k = 0; k < _len; ++k )
            {
                const auto idx = ( s * _trains + i ) * _len + k;
                _increments[ idx ] = static_cast< std::int16_t >( section.increments[ i ][ k ] );
                if ( k > 0 )
                    running += section.increments[ i ][ k ];
                _prefix[ idx ] = running;
            }
        }
    }
}

void TransitionKernel::counters( StateView state, std::span< std::int32_t > out ) const
{
    for ( std::size_t s = 0; s < _sections; ++s )
    {
        auto total = _base[ s ];
        for ( std::size_t i = 0; i < _trains; ++i )
            total += _prefix[ ( s * _trains + i ) * _len + state[ i ] ];
        out[ s ] = total;
    }
}

std::size_t TransitionKernel::expand( StateView state, std::span< std::uint8_t > children,
                                      std::span< std::uint16_t > trains ) const
{
    // Small fixed buffers cover every realistic scenario; fall back to the heap otherwise.
    constexpr std::size_t inline_capacity = 64;
    std::int32_t occupied_buf[ inline_capacity ];
    std::int32_t counters_buf[ inline_capacity ];
    std::vector< std::int32_t > occupied_heap;
    std::vector< std::int32_t > counters_heap;
    std::span< std::int32_t > occupied{ occupied_buf, _trains };
    std::span< std::int32_t > occupancy{ counters_buf, _sections };
    if ( _trains > inline_capacity )
    {
        occupied_heap.resize( _trains );
        occupied = occupied_heap;
    }
    if ( _sections > inline_capacity )
    {
        counters_heap.resize( _sections );
        occupancy = counters_heap;
    }

    for ( std::size_t j = 0; j < _trains; ++j )
        occupied[ j ] = _endpoints[ j * _len + state[ j ] ];
    counters( state, occupancy );

    std::size_t count = 0;
    for ( std::size_t i = 0; i < _trains; ++i )
    {
        const std::size_t next = state[ i ] + 1u;
        if ( next >= _len )
            continue;

        const auto target = _endpoints[ i * _len + next ];
        bool free = true;
        for ( std::size_t j = 0; j < _trains && free; ++j )
            free = j == i || occupied[ j ] != target;
        if ( !free )
            continue;

        bool fits = true;
        for ( std::size_t s = 0; s < _sections && fits; ++s )
            fits = occupancy[ s ] + _increments[ ( s * _trains + i ) * _len + next ] <= _limits[ s ];
        if ( !fits )
            continue;

        auto* child = children.data() + count * _trains;
        std::memcpy( child, state.data(), _trains );
        child[ i ] = static_cast< std::uint8_t >( next );
        trains[ count ] = static_cast< std::uint16_t >( i );
        ++count;
    }
    return count;
}

bool TransitionKernel::is_arrived( StateView state ) const
{
    return std::all_of( state.begin(), state.end(), [ & ]( std::uint8_t p ) { return p + 1u == _len; } );
}

} // namespace railcheck
