#pragma once

#include "railcheck/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Line-oriented `.rail` scenario format:
//
//   scenario "<name>"
//   endpoints <max>
//   mission_len <L>
//   train <id> : <e0> ... <eL-1>
//   section <name> limit <int> init <int>
//   constraint <section> train <id> : <d0> ... <dL-1>
//
// `#` starts a comment running to the end of the line.

namespace railcheck
{

struct SourceSpan
{
    int line = 1;
    int column = 1;
};

struct Diagnostic
{
    enum class Kind
    {
        syntax,
        semantic,
    };

    Kind kind = Kind::syntax;
    SourceSpan span;
    std::string message;

    [[nodiscard]] std::string to_string() const;
};

class ParseError : public std::runtime_error
{
    std::vector< Diagnostic > _diagnostics;

public:
    explicit ParseError( std::vector< Diagnostic > diagnostics );

    [[nodiscard]] const std::vector< Diagnostic >& diagnostics() const { return _diagnostics; }
};

// Section limits replacing the declared ones, applied before validation.
using LimitOverrides = std::vector< std::pair< std::string, int > >;

// Parses and validates a scenario. Throws ParseError carrying every
// diagnostic found, never just the first.
[[nodiscard]] Scenario parse_scenario( std::string_view text, const LimitOverrides& overrides = {} );

[[nodiscard]] Scenario load_scenario( const std::string& path, const LimitOverrides& overrides = {} );

// Canonical text: header, trains ascending, then each section followed by
// its constraint rows. Comments and extra whitespace are not preserved.
[[nodiscard]] std::string serialize_scenario( const Scenario& scenario );

// The eight-train yard fragment with critical sections A and B, limits 7.
[[nodiscard]] Scenario builtin_oneway8();

} // namespace railcheck
