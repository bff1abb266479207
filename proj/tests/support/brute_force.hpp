#pragma once

// Naive recursive enumeration of the reachable configurations, written
// directly from the movement rule and sharing no code with the explorers.

#include "railcheck/model.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace railcheck::testing
{

struct BruteForceCounts
{
    std::uint64_t states = 0;
    std::uint64_t edges = 0;
    std::uint64_t arrived = 0;
    std::uint64_t deadlocks = 0;
    int max_depth = 0;
    std::set< std::vector< int > > reachable;
};

class BruteForce
{
    const Scenario& _scenario;
    BruteForceCounts _counts;

    int occupancy( std::size_t section, const std::vector< int >& progress ) const
    {
        const auto& spec = _scenario.sections[ section ];
        int total = spec.initial_occupancy;
        for ( std::size_t train = 0; train < progress.size(); ++train )
            for ( int k = 1; k <= progress[ train ]; ++k )
                total += spec.increments[ train ][ k ];
        return total;
    }

    bool can_move( std::size_t train, const std::vector< int >& progress ) const
    {
        const auto len = static_cast< int >( _scenario.mission_len );
        if ( progress[ train ] >= len - 1 )
            return false;
        const auto next = _scenario.missions[ train ][ progress[ train ] + 1 ].value;
        for ( std::size_t other = 0; other < progress.size(); ++other )
            if ( other != train && _scenario.missions[ other ][ progress[ other ] ].value == next )
                return false;
        for ( std::size_t s = 0; s < _scenario.sections.size(); ++s )
            if ( occupancy( s, progress ) + _scenario.sections[ s ].increments[ train ][ progress[ train ] + 1 ] >
                 _scenario.sections[ s ].limit )
                return false;
        return true;
    }

    void visit( const std::vector< int >& progress, int depth )
    {
        if ( !_counts.reachable.insert( progress ).second )
            return;
        _counts.max_depth = std::max( _counts.max_depth, depth );

        int moves = 0;
        for ( std::size_t train = 0; train < progress.size(); ++train )
        {
            if ( !can_move( train, progress ) )
                continue;
            ++moves;
            auto next = progress;
            ++next[ train ];
            visit( next, depth + 1 );
        }
        _counts.edges += moves;
        if ( moves == 0 )
        {
            bool done = true;
            for ( auto p : progress )
                done = done && p == static_cast< int >( _scenario.mission_len ) - 1;
            ++( done ? _counts.arrived : _counts.deadlocks );
        }
    }

public:
    explicit BruteForce( const Scenario& scenario ) : _scenario{ scenario } {}

    BruteForceCounts run()
    {
        visit( std::vector< int >( _scenario.train_count(), 0 ), 0 );
        _counts.states = _counts.reachable.size();
        return _counts;
    }
};

inline BruteForceCounts brute_force( const Scenario& scenario )
{
    return BruteForce{ scenario }.run();
}

} // namespace railcheck::testing
