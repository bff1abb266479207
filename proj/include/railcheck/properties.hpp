#pragma once

#include "railcheck/explorer.hpp"

#include <optional>
#include <stdexcept>

namespace railcheck
{

struct Verdict
{
    bool holds = false;
    // Witness for EF checks, counterexample for AF, AG EF and safety checks.
    std::optional< Trace > evidence;
    std::uint64_t checked_states = 0;
};

// Thrown when a move edge does not lead to the next BFS layer, i.e. the move
// graph is not the layered DAG that the structural checks rely on.
class NotAcyclic : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// Some reachable state is arrived. Witness: shortest trace to it.
[[nodiscard]] Verdict check_ef_arrived( const StateGraph& graph );

// Every maximal path ends arrived, i.e. no reachable deadlock.
// Counterexample: shortest trace to a deadlock.
[[nodiscard]] Verdict check_af_arrived( const StateGraph& graph );

// Every reachable state can still reach an arrived state. Decided by backward
// reachability over reversed move edges; needs a graph with edges.
[[nodiscard]] Verdict check_ag_ef_arrived( const StateGraph& graph );

// Mutual exclusion on endpoints and every section within its limit, in every
// reachable state.
[[nodiscard]] Verdict check_safety( const Scenario& scenario, const StateGraph& graph, int workers = 1 );

[[nodiscard]] Verdict check_ef_arrived( const Scenario& scenario, const ExploreOptions& options = {} );
[[nodiscard]] Verdict check_af_arrived( const Scenario& scenario, const ExploreOptions& options = {} );
[[nodiscard]] Verdict check_ag_ef_arrived( const Scenario& scenario, const ExploreOptions& options = {} );
[[nodiscard]] Verdict check_safety( const Scenario& scenario, const ExploreOptions& options = {} );

// Throws NotAcyclic if some edge does not increase depth by exactly one.
void assert_layered( const StateGraph& graph );

} // namespace railcheck
