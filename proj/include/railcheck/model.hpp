#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace railcheck
{

// A node of the yard layout that a train can occupy.
struct EndpointId
{
    std::int32_t value = 0;

    friend auto operator<=>( EndpointId, EndpointId ) = default;
};

struct TrainId
{
    std::uint16_t index = 0;

    friend auto operator<=>( TrainId, TrainId ) = default;
};

using Mission = std::vector< EndpointId >;

// One critical section. increments[i][k] is applied to the section counter
// when train i advances to mission index k; column 0 is never applied.
struct SectionSpec
{
    std::string name;
    int limit = 0;
    int initial_occupancy = 0;
    std::vector< std::vector< int > > increments;

    friend bool operator==( const SectionSpec&, const SectionSpec& ) = default;
};

struct Scenario
{
    std::string name;
    std::size_t mission_len = 0;
    int max_endpoint = 0;
    std::vector< Mission > missions;
    std::vector< SectionSpec > sections;

    [[nodiscard]] std::size_t train_count() const { return missions.size(); }
    [[nodiscard]] std::size_t section_count() const { return sections.size(); }

    // Index of the section with the given name, if any.
    [[nodiscard]] std::optional< std::size_t > find_section( std::string_view section_name ) const;

    friend bool operator==( const Scenario&, const Scenario& ) = default;
};

using StateView = std::span< const std::uint8_t >;

// Per-train progress indices. The byte vector is also the canonical
// encoding: one unsigned byte per train, ascending train order.
class SystemState
{
    std::vector< std::uint8_t > _progress;

public:
    SystemState() = default;
    explicit SystemState( std::vector< std::uint8_t > progress ) : _progress{ std::move( progress ) } {}
    explicit SystemState( StateView view ) : _progress( view.begin(), view.end() ) {}

    [[nodiscard]] std::size_t size() const { return _progress.size(); }
    [[nodiscard]] int operator[]( std::size_t train ) const { return _progress[ train ]; }
    [[nodiscard]] int at( TrainId train ) const { return _progress.at( train.index ); }

    [[nodiscard]] StateView view() const { return _progress; }
    [[nodiscard]] const std::vector< std::uint8_t >& encoding() const { return _progress; }

    // Hex rendering of the canonical encoding, e.g. "00010600".
    [[nodiscard]] std::string hex() const;
    // Comma-separated progress vector, e.g. "0,1,6,0".
    [[nodiscard]] std::string label() const;

    friend bool operator==( const SystemState&, const SystemState& ) = default;
    friend auto operator<=>( const SystemState&, const SystemState& ) = default;
};

enum class GuardClause
{
    none,
    mission_complete,
    endpoint_occupied,
    section_saturated,
};

// Outcome of evaluating the movement guard of one train.
struct GuardResult
{
    GuardClause failed = GuardClause::none;
    // For endpoint_occupied: the occupying train. For section_saturated: the section.
    std::size_t culprit = 0;

    [[nodiscard]] bool enabled() const { return failed == GuardClause::none; }
    [[nodiscard]] std::string describe( const Scenario& scenario ) const;
};

class NotEnabled : public std::runtime_error
{
    GuardResult _guard;

public:
    NotEnabled( GuardResult guard, const std::string& what ) : std::runtime_error{ what }, _guard{ guard } {}

    [[nodiscard]] const GuardResult& guard() const { return _guard; }
};

struct ValidationError
{
    // Location within the scenario, e.g. "missions[2][0]" or "sections[1].increments[3][4]".
    std::string location;
    std::string message;
    std::optional< std::size_t > train;
    std::optional< std::size_t > section;

    [[nodiscard]] std::string to_string() const { return location.empty() ? message : location + ": " + message; }
};

constexpr std::size_t max_mission_len = 255;
constexpr std::size_t max_train_steps = 32767; // train_count * mission_len

[[nodiscard]] std::vector< ValidationError > validate( const Scenario& scenario );

[[nodiscard]] SystemState initial_state( const Scenario& scenario );

// Section occupancies recomputed from scratch out of the progress vector.
[[nodiscard]] std::vector< int > counters( const Scenario& scenario, const SystemState& state );

[[nodiscard]] GuardResult evaluate_guard( const Scenario& scenario, const SystemState& state, TrainId train );
[[nodiscard]] bool enabled( const Scenario& scenario, const SystemState& state, TrainId train );

// Throws NotEnabled when the guard of `train` does not hold.
[[nodiscard]] SystemState step( const Scenario& scenario, const SystemState& state, TrainId train );

struct Successor
{
    TrainId train;
    SystemState state;
};

// Enabled moves in ascending train order.
[[nodiscard]] std::vector< Successor > successors( const Scenario& scenario, const SystemState& state );

[[nodiscard]] bool is_arrived( const Scenario& scenario, const SystemState& state );
[[nodiscard]] bool is_arrived( const Scenario& scenario, StateView state );

// Endpoint currently occupied by `train`.
[[nodiscard]] EndpointId position( const Scenario& scenario, const SystemState& state, TrainId train );

// Mutual exclusion and saturation bounds for a single state.
[[nodiscard]] bool is_collision_free( const Scenario& scenario, const SystemState& state );
[[nodiscard]] bool within_limits( const Scenario& scenario, const SystemState& state );

// Precomputed tables for the hot exploration loop. Counters are read from
// per-train prefix sums instead of being re-summed for every state.
class TransitionKernel
{
    std::size_t _trains;
    std::size_t _len;
    std::size_t _sections;
    std::vector< std::int32_t > _endpoints;  // [train][k]
    std::vector< std::int16_t > _increments; // [section][train][k]
    std::vector< std::int32_t > _prefix;     // [section][train][k], sum over 1..k
    std::vector< std::int32_t > _base;       // initial occupancy per section
    std::vector< std::int32_t > _limits;

public:
    explicit TransitionKernel( const Scenario& scenario );

    [[nodiscard]] std::size_t width() const { return _trains; }
    [[nodiscard]] std::size_t max_successors() const { return _trains; }

    void counters( StateView state, std::span< std::int32_t > out ) const;

    // Writes every successor of `state` into consecutive `width()`-byte slots
    // of `children` and the moving trains into `trains`, ascending train
    // order. Returns the number of successors.
    std::size_t expand( StateView state, std::span< std::uint8_t > children,
                        std::span< std::uint16_t > trains ) const;

    [[nodiscard]] bool is_arrived( StateView state ) const;
};

} // namespace railcheck
