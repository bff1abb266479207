#pragma once

#include "railcheck/model.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace railcheck
{

enum class Terminal : std::uint8_t
{
    internal,
    arrived,
    deadlock,
};

enum class SearchStrategy
{
    bfs,
    dfs,
};

struct ExploreOptions
{
    bool store_edges = true;
    int worker_count = 1;
    std::uint64_t max_states = 50'000'000;
    SearchStrategy strategy = SearchStrategy::bfs;
};

struct ExploreStats
{
    std::uint64_t state_count = 0;
    std::uint64_t move_edge_count = 0;
    std::uint64_t arrived_count = 0;
    std::uint64_t deadlock_count = 0;
    std::uint32_t max_depth = 0;
    std::chrono::milliseconds wall_time{ 0 };
    // Set when exploration stopped at the state cap.
    bool partial = false;

    // Everything except wall_time.
    [[nodiscard]] bool same_counts( const ExploreStats& other ) const;
};

using Trace = std::vector< TrainId >;

inline constexpr std::uint32_t no_parent = UINT32_MAX;

// The reachable move graph. States are numbered by BFS layer (depth = number
// of moves from the initial state) and lexicographically within a layer, so
// the numbering does not depend on how the graph was discovered. Index 0 is
// the initial state.
class StateGraph
{
public:
    StateGraph() = default;

    [[nodiscard]] std::size_t width() const { return _width; }
    [[nodiscard]] std::size_t size() const { return _terminal.size(); }
    [[nodiscard]] bool has_edges() const { return !_edge_offsets.empty(); }

    [[nodiscard]] StateView view( std::size_t index ) const
    {
        return { _states.data() + index * _width, _width };
    }
    [[nodiscard]] SystemState state( std::size_t index ) const { return SystemState{ view( index ) }; }
    [[nodiscard]] Terminal terminal( std::size_t index ) const { return _terminal[ index ]; }
    [[nodiscard]] std::uint32_t depth( std::size_t index ) const;

    // First state of each layer plus a final sentinel equal to size().
    [[nodiscard]] const std::vector< std::uint32_t >& layer_offsets() const { return _layer_offsets; }

    // BFS tree: the lowest-numbered predecessor, reached via the lowest train.
    [[nodiscard]] std::uint32_t parent( std::size_t index ) const { return _parent[ index ]; }
    [[nodiscard]] TrainId parent_move( std::size_t index ) const { return TrainId{ _parent_move[ index ] }; }

    struct Edge
    {
        TrainId train;
        std::uint32_t target;
    };

    // Outgoing move edges in ascending train order. Requires has_edges().
    [[nodiscard]] std::vector< Edge > edges( std::size_t index ) const;
    [[nodiscard]] std::size_t out_degree( std::size_t index ) const;
    [[nodiscard]] const std::vector< std::uint64_t >& edge_offsets() const { return _edge_offsets; }
    [[nodiscard]] const std::vector< std::uint32_t >& edge_targets() const { return _edge_targets; }
    [[nodiscard]] const std::vector< std::uint16_t >& edge_trains() const { return _edge_trains; }

    // Index of a state, if reachable.
    [[nodiscard]] std::optional< std::uint32_t > find( StateView state ) const;

    // Shortest trace from the initial state along parent links.
    [[nodiscard]] Trace trace_to( std::size_t index ) const;

private:
    friend class GraphBuilder;

    std::size_t _width = 0;
    std::vector< std::uint8_t > _states;
    std::vector< std::uint32_t > _layer_offsets;
    std::vector< std::uint32_t > _parent;
    std::vector< std::uint16_t > _parent_move;
    std::vector< Terminal > _terminal;
    std::vector< std::uint64_t > _edge_offsets;
    std::vector< std::uint32_t > _edge_targets;
    std::vector< std::uint16_t > _edge_trains;
};

struct ExploreResult
{
    StateGraph graph;
    ExploreStats stats;
};

class ResourceLimit : public std::runtime_error
{
    ExploreStats _partial;

public:
    ResourceLimit( ExploreStats partial, const std::string& what ) : std::runtime_error{ what }, _partial{ partial } {}

    [[nodiscard]] const ExploreStats& partial_stats() const { return _partial; }
};

class ReplayError : public std::runtime_error
{
    std::size_t _step;
    GuardResult _guard;
    SystemState _state;

public:
    ReplayError( std::size_t step, GuardResult guard, SystemState state, const std::string& what )
        : std::runtime_error{ what }, _step{ step }, _guard{ guard }, _state{ std::move( state ) } {}

    // 1-based index of the rejected step.
    [[nodiscard]] std::size_t step() const { return _step; }
    [[nodiscard]] const GuardResult& guard() const { return _guard; }
    [[nodiscard]] const SystemState& state() const { return _state; }
};

// Exhaustive exploration. BFS runs the OpenMP layer kernel with
// `worker_count` threads; DFS runs the serial reference.
[[nodiscard]] ExploreResult explore( const Scenario& scenario, const ExploreOptions& options = {} );

// Layer-synchronous BFS whose successor expansion and duplicate detection are
// parallelised with OpenMP. Results are identical for every worker count.
[[nodiscard]] ExploreResult explore_parallel( const Scenario& scenario, const ExploreOptions& options );

// Single-threaded reference explorer built on the public model operations and
// a global visited set. Kept for cross-checking and benchmarking.
[[nodiscard]] ExploreResult explore_reference( const Scenario& scenario, const ExploreOptions& options );

struct DeadlockReport
{
    SystemState state;
    Trace trace;
};

[[nodiscard]] std::vector< DeadlockReport > find_deadlocks( const StateGraph& graph );
[[nodiscard]] std::vector< DeadlockReport > find_deadlocks( const Scenario& scenario, const ExploreOptions& options = {} );

using StatePredicate = std::function< bool( const SystemState& ) >;

[[nodiscard]] std::optional< Trace > shortest_trace_to( const StateGraph& graph, const StatePredicate& goal );
[[nodiscard]] std::optional< Trace > shortest_trace_to( const Scenario& scenario, const StatePredicate& goal,
                                                        const ExploreOptions& options = {} );

// Applies `trace` from the initial state. Throws ReplayError on the first
// step whose guard does not hold.
[[nodiscard]] SystemState replay( const Scenario& scenario, const Trace& trace );

} // namespace railcheck
