#pragma once

#include "railcheck/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace railcheck
{

// Conjunction of comparisons on progress variables, e.g. "P0=6 & P4!=2".
// Supported operators: = == != < <= > >=.
struct Goal
{
    enum class Op
    {
        eq,
        ne,
        lt,
        le,
        gt,
        ge,
    };

    struct Term
    {
        std::size_t train;
        Op op;
        int value;
    };

    std::vector< Term > terms;

    [[nodiscard]] bool operator()( const SystemState& state ) const;
    [[nodiscard]] std::string to_string() const;
};

class GoalError : public std::runtime_error
{
    std::size_t _column;

public:
    GoalError( std::size_t column, const std::string& what ) : std::runtime_error{ what }, _column{ column } {}

    // 1-based column in the expression text.
    [[nodiscard]] std::size_t column() const { return _column; }
};

// Parses and range-checks a goal against `scenario`: train indices must be
// below the train count and values within 0..mission_len-1.
[[nodiscard]] Goal parse_goal( std::string_view text, const Scenario& scenario );

} // namespace railcheck
