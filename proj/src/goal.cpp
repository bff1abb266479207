#include "railcheck/goal.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace railcheck
{

namespace
{

const char* op_text( Goal::Op op )
{
    switch ( op )
    {
    case Goal::Op::eq: return "=";
    case Goal::Op::ne: return "!=";
    case Goal::Op::lt: return "<";
    case Goal::Op::le: return "<=";
    case Goal::Op::gt: return ">";
    case Goal::Op::ge: return ">=";
    }
    return "?";
}

class GoalParser
{
    std::string_view _text;
    std::size_t _pos = 0;

    void skip_space()
    {
        while ( _pos < _text.size() && std::isspace( static_cast< unsigned char >( _text[ _pos ] ) ) )
            ++_pos;
    }

    [[noreturn]] void fail( const std::string& message ) const
    {
        throw GoalError{ _pos + 1, fmt::format( "goal column {}: {}", _pos + 1, message ) };
    }

    long number()
    {
        const auto start = _pos;
        if ( _pos < _text.size() && _text[ _pos ] == '-' )
            ++_pos;
        while ( _pos < _text.size() && std::isdigit( static_cast< unsigned char >( _text[ _pos ] ) ) )
            ++_pos;
        long value = 0;
        const auto [ ptr, ec ] = std::from_chars( _text.data() + start, _text.data() + _pos, value );
        if ( ec != std::errc{} || ptr != _text.data() + _pos )
        {
            _pos = start;
            fail( "expected a number" );
        }
        return value;
    }

    Goal::Op op()
    {
        const auto rest = _text.substr( _pos );
        const auto take = [ & ]( std::size_t n, Goal::Op result )
        {
            _pos += n;
            return result;
        };
        if ( rest.starts_with( "==" ) ) return take( 2, Goal::Op::eq );
        if ( rest.starts_with( "!=" ) ) return take( 2, Goal::Op::ne );
        if ( rest.starts_with( "<=" ) ) return take( 2, Goal::Op::le );
        if ( rest.starts_with( ">=" ) ) return take( 2, Goal::Op::ge );
        if ( rest.starts_with( "=" ) ) return take( 1, Goal::Op::eq );
        if ( rest.starts_with( "<" ) ) return take( 1, Goal::Op::lt );
        if ( rest.starts_with( ">" ) ) return take( 1, Goal::Op::gt );
        fail( "expected a comparison operator" );
    }

public:
    explicit GoalParser( std::string_view text ) : _text{ text } {}

    Goal run( const Scenario& scenario )
    {
        Goal goal;
        while ( true )
        {
            skip_space();
            if ( _pos >= _text.size() || ( _text[ _pos ] != 'P' && _text[ _pos ] != 'p' ) )
                fail( "expected a variable P<train>" );
            ++_pos;
            const auto var_pos = _pos;
            const auto train = number();
            if ( train < 0 || static_cast< std::size_t >( train ) >= scenario.train_count() )
            {
                _pos = var_pos;
                fail( fmt::format( "train index {} out of range 0..{}", train, scenario.train_count() - 1 ) );
            }

            skip_space();
            const auto comparison = op();
            skip_space();
            const auto value_pos = _pos;
            const auto value = number();
            if ( value < 0 || static_cast< std::size_t >( value ) >= scenario.mission_len )
            {
                _pos = value_pos;
                fail( fmt::format( "progress index {} out of range 0..{}", value, scenario.mission_len - 1 ) );
            }
            goal.terms.push_back( { static_cast< std::size_t >( train ), comparison, static_cast< int >( value ) } );

            skip_space();
            if ( _pos == _text.size() )
                break;
            if ( _text[ _pos ] != '&' )
                fail( "expected '&' or end of expression" );
            ++_pos;
            if ( _pos < _text.size() && _text[ _pos ] == '&' )
                ++_pos;
        }
        return goal;
    }
};

} // namespace

bool Goal::operator()( const SystemState& state ) const
{
    for ( const auto& term : terms )
    {
        const auto p = state[ term.train ];
        bool ok = false;
        switch ( term.op )
        {
        case Op::eq: ok = p == term.value; break;
        case Op::ne: ok = p != term.value; break;
        case Op::lt: ok = p < term.value; break;
        case Op::le: ok = p <= term.value; break;
        case Op::gt: ok = p > term.value; break;
        case Op::ge: ok = p >= term.value; break;
        }
        if ( !ok )
            return false;
    }
    return true;
}

std::string Goal::to_string() const
{
    std::string out;
    for ( const auto& term : terms )
    {
        if ( !out.empty() )
            out += " & ";
        out += fmt::format( "P{}{}{}", term.train, op_text( term.op ), term.value );
    }
    return out;
}

Goal parse_goal( std::string_view text, const Scenario& scenario )
{
    return GoalParser{ text }.run( scenario );
}

} // namespace railcheck
