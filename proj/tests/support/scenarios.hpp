#pragma once

#include "railcheck/model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#ifndef RAILCHECK_SCENARIO_DIR
#error "RAILCHECK_SCENARIO_DIR must point at the shipped scenarios"
#endif

namespace railcheck::testing
{

inline std::string scenario_path( const std::string& file )
{
    return std::string{ RAILCHECK_SCENARIO_DIR } + "/" + file;
}

inline Mission mission_of( std::initializer_list< int > endpoints )
{
    Mission m;
    for ( auto e : endpoints )
        m.push_back( EndpointId{ e } );
    return m;
}

// Two trains, zero-increment dummy section.
inline Scenario two_train( std::initializer_list< int > first, std::initializer_list< int > second, int max_endpoint )
{
    Scenario s;
    s.name = "toy";
    s.mission_len = first.size();
    s.max_endpoint = max_endpoint;
    s.missions = { mission_of( first ), mission_of( second ) };
    s.sections = { SectionSpec{ "S", 2, 0, { std::vector< int >( first.size(), 0 ), std::vector< int >( first.size(), 0 ) } } };
    return s;
}

inline Scenario swap_scenario() { return two_train( { 1, 2 }, { 2, 1 }, 2 ); }
inline Scenario corridor_scenario() { return two_train( { 1, 2 }, { 2, 3 }, 3 ); }

inline Scenario one_train_scenario()
{
    Scenario s;
    s.name = "solo";
    s.mission_len = 3;
    s.max_endpoint = 3;
    s.missions = { mission_of( { 1, 2, 3 } ) };
    s.sections = { SectionSpec{ "Z", 1, 0, { { 0, 1, -1 } } } };
    return s;
}

// Valid scenario with 1..max_trains trains, missions of 2..max_len entries
// over a small endpoint pool (so trains collide often), and 0..max_sections
// sections with random increments and tight limits.
inline Scenario random_scenario( std::mt19937& rng, int max_trains = 3, int max_len = 4, int max_sections = 2 )
{
    const auto pick = [ & ]( int lo, int hi ) { return std::uniform_int_distribution< int >{ lo, hi }( rng ); };

    Scenario s;
    const auto trains = pick( 1, max_trains );
    const auto len = pick( 2, max_len );
    s.name = "random";
    s.mission_len = static_cast< std::size_t >( len );
    s.max_endpoint = trains + pick( 1, 3 );

    std::vector< int > pool( s.max_endpoint );
    std::iota( pool.begin(), pool.end(), 1 );
    std::shuffle( pool.begin(), pool.end(), rng );
    for ( int i = 0; i < trains; ++i )
    {
        Mission m{ EndpointId{ pool[ i ] } };
        while ( static_cast< int >( m.size() ) < len )
        {
            const auto e = pick( 1, s.max_endpoint );
            if ( e != m.back().value )
                m.push_back( EndpointId{ e } );
        }
        s.missions.push_back( std::move( m ) );
    }

    const auto sections = pick( 0, max_sections );
    for ( int k = 0; k < sections; ++k )
    {
        SectionSpec section;
        section.name = std::string( 1, static_cast< char >( 'A' + k ) );
        section.limit = pick( 0, trains );
        section.initial_occupancy = pick( 0, section.limit );
        for ( int i = 0; i < trains; ++i )
        {
            std::vector< int > row( len, 0 );
            for ( int j = 1; j < len; ++j )
                row[ j ] = pick( -1, 1 );
            section.increments.push_back( std::move( row ) );
        }
        s.sections.push_back( std::move( section ) );
    }
    return s;
}

} // namespace railcheck::testing
