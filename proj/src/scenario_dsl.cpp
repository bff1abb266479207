#include "railcheck/scenario_dsl.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

namespace railcheck
{

std::string Diagnostic::to_string() const
{
    return fmt::format( "{}:{}: {} error: {}", span.line, span.column, kind == Kind::syntax ? "syntax" : "semantic",
                        message );
}

namespace
{

std::string join_messages( const std::vector< Diagnostic >& diagnostics )
{
    std::string out;
    for ( const auto& d : diagnostics )
    {
        if ( !out.empty() )
            out += '\n';
        out += d.to_string();
    }
    return out;
}

struct Token
{
    std::string_view text;
    int column;
};

struct Line
{
    int number;
    std::vector< Token > tokens;
};

// Splits one line into whitespace-separated tokens. A double-quoted string
// is one token, quotes included.
std::optional< Diagnostic > tokenize( std::string_view text, int line_number, std::vector< Token >& tokens )
{
    std::size_t pos = 0;
    while ( pos < text.size() )
    {
        const char c = text[ pos ];
        if ( c == '#' )
            break;
        if ( c == ' ' || c == '\t' || c == '\r' )
        {
            ++pos;
            continue;
        }
        if ( static_cast< unsigned char >( c ) > 127 || ( c < 32 && c != '\t' ) )
            return Diagnostic{ Diagnostic::Kind::syntax, { line_number, static_cast< int >( pos ) + 1 },
                               "non-printable or non-ASCII character" };

        const auto start = pos;
        if ( c == '"' )
        {
            const auto close = text.find( '"', pos + 1 );
            if ( close == std::string_view::npos )
                return Diagnostic{ Diagnostic::Kind::syntax, { line_number, static_cast< int >( start ) + 1 },
                                   "unterminated string" };
            pos = close + 1;
        }
        else
        {
            while ( pos < text.size() && text[ pos ] != ' ' && text[ pos ] != '\t' && text[ pos ] != '\r' &&
                    text[ pos ] != '#' )
                ++pos;
        }
        tokens.push_back( { text.substr( start, pos - start ), static_cast< int >( start ) + 1 } );
    }
    return std::nullopt;
}

constexpr long max_magnitude = 1'000'000;

std::optional< long > parse_int( std::string_view text )
{
    long value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ ptr, ec ] = std::from_chars( first, last, value );
    if ( ec != std::errc{} || ptr != last || value < -max_magnitude || value > max_magnitude )
        return std::nullopt;
    return value;
}

struct TrainRow
{
    SourceSpan span;
    std::vector< long > values;
};

struct SectionDecl
{
    SourceSpan span;
    std::string name;
    long limit = 0;
    long init = 0;
    std::map< long, TrainRow > rows;
};

struct ConstraintRow
{
    SourceSpan span;
    std::string section;
    long train;
    std::vector< long > values;
};

class Parser
{
    std::vector< Diagnostic > _diagnostics;

    std::optional< std::pair< std::string, SourceSpan > > _name;
    std::optional< std::pair< long, SourceSpan > > _endpoints;
    std::optional< std::pair< long, SourceSpan > > _mission_len;
    std::map< long, TrainRow > _trains;
    std::vector< SectionDecl > _sections;
    std::vector< ConstraintRow > _constraints;

    void syntax( SourceSpan span, std::string message )
    {
        _diagnostics.push_back( { Diagnostic::Kind::syntax, span, std::move( message ) } );
    }

    void semantic( SourceSpan span, std::string message )
    {
        _diagnostics.push_back( { Diagnostic::Kind::semantic, span, std::move( message ) } );
    }

    static SourceSpan at( int line, const Token& token ) { return { line, token.column }; }

    std::optional< long > integer( int line, const Token& token, std::string_view what )
    {
        auto value = parse_int( token.text );
        if ( !value )
            syntax( at( line, token ), fmt::format( "expected integer {}, found '{}'", what, token.text ) );
        return value;
    }

    bool expect_count( const Line& line, std::size_t count, std::string_view usage )
    {
        if ( line.tokens.size() == count )
            return true;
        const auto& anchor = line.tokens.size() > count ? line.tokens[ count ] : line.tokens.back();
        syntax( at( line.number, anchor ), fmt::format( "expected `{}`", usage ) );
        return false;
    }

    bool expect_keyword( const Line& line, std::size_t index, std::string_view keyword, std::string_view usage )
    {
        if ( index < line.tokens.size() && line.tokens[ index ].text == keyword )
            return true;
        const auto& anchor = index < line.tokens.size() ? line.tokens[ index ] : line.tokens.back();
        syntax( at( line.number, anchor ), fmt::format( "expected `{}`", usage ) );
        return false;
    }

    // Parses "<values...>" starting at token `from`.
    std::optional< std::vector< long > > values( const Line& line, std::size_t from )
    {
        std::vector< long > out;
        bool ok = true;
        for ( std::size_t t = from; t < line.tokens.size(); ++t )
        {
            auto value = integer( line.number, line.tokens[ t ], "value" );
            if ( value )
                out.push_back( *value );
            else
                ok = false;
        }
        if ( !ok )
            return std::nullopt;
        return out;
    }

    template < typename T >
    bool once( const std::optional< T >& slot, const Line& line, std::string_view directive )
    {
        if ( !slot )
            return true;
        semantic( at( line.number, line.tokens[ 0 ] ), fmt::format( "duplicate `{}` directive", directive ) );
        return false;
    }

    void directive( const Line& line )
    {
        const auto& head = line.tokens[ 0 ];
        const auto keyword = head.text;

        if ( keyword == "scenario" )
        {
            if ( !expect_count( line, 2, "scenario \"<name>\"" ) || !once( _name, line, keyword ) )
                return;
            const auto& tok = line.tokens[ 1 ];
            if ( tok.text.size() < 2 || tok.text.front() != '"' || tok.text.back() != '"' )
            {
                syntax( at( line.number, tok ), "scenario name must be double-quoted" );
                return;
            }
            _name = { std::string{ tok.text.substr( 1, tok.text.size() - 2 ) }, at( line.number, head ) };
        }
        else if ( keyword == "endpoints" || keyword == "mission_len" )
        {
            auto& slot = keyword == "endpoints" ? _endpoints : _mission_len;
            if ( !expect_count( line, 2, fmt::format( "{} <int>", keyword ) ) || !once( slot, line, keyword ) )
                return;
            if ( auto value = integer( line.number, line.tokens[ 1 ], keyword ) )
                slot = { *value, at( line.number, head ) };
        }
        else if ( keyword == "train" )
        {
            if ( line.tokens.size() < 3 || !expect_keyword( line, 2, ":", "train <id> : <endpoints...>" ) )
            {
                if ( line.tokens.size() < 3 )
                    syntax( at( line.number, head ), "expected `train <id> : <endpoints...>`" );
                return;
            }
            auto id = integer( line.number, line.tokens[ 1 ], "train id" );
            auto row = values( line, 3 );
            if ( !id || !row )
                return;
            if ( _trains.contains( *id ) )
            {
                semantic( at( line.number, line.tokens[ 1 ] ), fmt::format( "duplicate train id {}", *id ) );
                return;
            }
            _trains[ *id ] = { at( line.number, head ), std::move( *row ) };
        }
        else if ( keyword == "section" )
        {
            if ( !expect_count( line, 6, "section <name> limit <int> init <int>" ) ||
                 !expect_keyword( line, 2, "limit", "section <name> limit <int> init <int>" ) ||
                 !expect_keyword( line, 4, "init", "section <name> limit <int> init <int>" ) )
                return;
            auto limit = integer( line.number, line.tokens[ 3 ], "limit" );
            auto init = integer( line.number, line.tokens[ 5 ], "initial occupancy" );
            if ( !limit || !init )
                return;
            const std::string name{ line.tokens[ 1 ].text };
            for ( const auto& existing : _sections )
            {
                if ( existing.name == name )
                {
                    semantic( at( line.number, line.tokens[ 1 ] ), fmt::format( "duplicate section {}", name ) );
                    return;
                }
            }
            _sections.push_back( { at( line.number, head ), name, *limit, *init, {} } );
        }
        else if ( keyword == "constraint" )
        {
            constexpr std::string_view usage = "constraint <section> train <id> : <increments...>";
            if ( line.tokens.size() < 5 )
            {
                syntax( at( line.number, head ), fmt::format( "expected `{}`", usage ) );
                return;
            }
            if ( !expect_keyword( line, 2, "train", usage ) || !expect_keyword( line, 4, ":", usage ) )
                return;
            auto id = integer( line.number, line.tokens[ 3 ], "train id" );
            auto row = values( line, 5 );
            if ( !id || !row )
                return;
            _constraints.push_back(
                { at( line.number, head ), std::string{ line.tokens[ 1 ].text }, *id, std::move( *row ) } );
        }
        else
        {
            syntax( at( line.number, head ), fmt::format( "unknown directive '{}'", keyword ) );
        }
    }

    void attach_constraints()
    {
        for ( auto& row : _constraints )
        {
            auto it = std::find_if( _sections.begin(), _sections.end(),
                                    [ & ]( const SectionDecl& s ) { return s.name == row.section; } );
            if ( it == _sections.end() )
            {
                semantic( row.span, fmt::format( "constraint refers to undeclared section {}", row.section ) );
                continue;
            }
            if ( it->rows.contains( row.train ) )
            {
                semantic( row.span, fmt::format( "section {}: duplicate row for train {}", row.section, row.train ) );
                continue;
            }
            it->rows[ row.train ] = { row.span, std::move( row.values ) };
        }
    }

    // Span of the source line that a validation error points at.
    SourceSpan locate( const ValidationError& error, const Scenario& scenario ) const
    {
        if ( error.section )
        {
            const auto& decl = _sections[ *error.section ];
            if ( error.train )
                if ( auto it = decl.rows.find( static_cast< long >( *error.train ) ); it != decl.rows.end() )
                    return it->second.span;
            return decl.span;
        }
        if ( error.train )
            if ( auto it = _trains.find( static_cast< long >( *error.train ) ); it != _trains.end() )
                return it->second.span;
        if ( error.location == "endpoints" && _endpoints )
            return _endpoints->second;
        if ( ( error.location == "mission_len" ) && _mission_len )
            return _mission_len->second;
        (void) scenario;
        return { 1, 1 };
    }

public:
    Scenario run( std::string_view text, const LimitOverrides& overrides )
    {
        int number = 0;
        std::size_t pos = 0;
        while ( pos <= text.size() )
        {
            auto end = text.find( '\n', pos );
            if ( end == std::string_view::npos )
                end = text.size();
            ++number;
            Line line{ number, {} };
            if ( auto error = tokenize( text.substr( pos, end - pos ), number, line.tokens ) )
                _diagnostics.push_back( *error );
            else if ( !line.tokens.empty() )
                directive( line );
            pos = end + 1;
        }

        const SourceSpan eof{ number, 1 };
        if ( !_name )
            semantic( eof, "missing `scenario` directive" );
        if ( !_endpoints )
            semantic( eof, "missing `endpoints` directive" );
        if ( !_mission_len )
            semantic( eof, "missing `mission_len` directive" );
        if ( _trains.empty() )
            semantic( eof, "no trains declared" );

        attach_constraints();

        for ( const auto& [ name, limit ] : overrides )
        {
            auto it = std::find_if( _sections.begin(), _sections.end(),
                                    [ & ]( const SectionDecl& s ) { return s.name == name; } );
            if ( it == _sections.end() )
                semantic( eof, fmt::format( "limit override for undeclared section {}", name ) );
            else
                it->limit = limit;
        }

        const long n = static_cast< long >( _trains.size() );
        const long len = _mission_len ? _mission_len->first : -1;

        for ( const auto& [ id, row ] : _trains )
            if ( id < 0 || id >= n )
                semantic( row.span, fmt::format( "train id {} outside 0..{}", id, n - 1 ) );

        if ( len >= 0 )
            for ( const auto& [ id, row ] : _trains )
                if ( static_cast< long >( row.values.size() ) != len )
                    semantic( row.span, fmt::format( "train {}: mission has {} entries, expected {}", id,
                                                     row.values.size(), len ) );

        for ( const auto& section : _sections )
        {
            for ( long id = 0; id < n; ++id )
                if ( !section.rows.contains( id ) )
                    semantic( section.span, fmt::format( "section {}: missing row for train {}", section.name, id ) );
            for ( const auto& [ id, row ] : section.rows )
            {
                if ( id < 0 || id >= n )
                    semantic( row.span, fmt::format( "section {}: row for unknown train {}", section.name, id ) );
                else if ( len >= 0 && static_cast< long >( row.values.size() ) != len )
                    semantic( row.span, fmt::format( "section {}: row for train {} has {} entries, expected {}",
                                                     section.name, id, row.values.size(), len ) );
            }
        }

        if ( !_diagnostics.empty() )
            throw ParseError{ std::move( _diagnostics ) };

        Scenario scenario;
        scenario.name = _name->first;
        scenario.max_endpoint = static_cast< int >( _endpoints->first );
        scenario.mission_len = static_cast< std::size_t >( std::max( 0L, len ) );
        for ( const auto& [ id, row ] : _trains )
        {
            Mission mission;
            for ( auto e : row.values )
                mission.push_back( EndpointId{ static_cast< std::int32_t >( e ) } );
            scenario.missions.push_back( std::move( mission ) );
        }
        for ( const auto& decl : _sections )
        {
            SectionSpec section;
            section.name = decl.name;
            section.limit = static_cast< int >( decl.limit );
            section.initial_occupancy = static_cast< int >( decl.init );
            for ( const auto& [ id, row ] : decl.rows )
                section.increments.emplace_back( row.values.begin(), row.values.end() );
            scenario.sections.push_back( std::move( section ) );
        }

        for ( const auto& error : validate( scenario ) )
            semantic( locate( error, scenario ), error.to_string() );

        if ( !_diagnostics.empty() )
            throw ParseError{ std::move( _diagnostics ) };
        return scenario;
    }
};

} // namespace

ParseError::ParseError( std::vector< Diagnostic > diagnostics )
    : std::runtime_error{ join_messages( diagnostics ) }, _diagnostics{ std::move( diagnostics ) }
{
}

Scenario parse_scenario( std::string_view text, const LimitOverrides& overrides )
{
    return Parser{}.run( text, overrides );
}

Scenario load_scenario( const std::string& path, const LimitOverrides& overrides )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw std::runtime_error{ fmt::format( "cannot open scenario file '{}'", path ) };
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario( buffer.str(), overrides );
}

std::string serialize_scenario( const Scenario& scenario )
{
    std::string out;
    out += fmt::format( "scenario \"{}\"\n", scenario.name );
    out += fmt::format( "endpoints {}\n", scenario.max_endpoint );
    out += fmt::format( "mission_len {}\n", scenario.mission_len );
    for ( std::size_t i = 0; i < scenario.missions.size(); ++i )
    {
        out += fmt::format( "train {} :", i );
        for ( auto e : scenario.missions[ i ] )
            out += fmt::format( " {}", e.value );
        out += '\n';
    }
    for ( const auto& section : scenario.sections )
    {
        out += fmt::format( "section {} limit {} init {}\n", section.name, section.limit, section.initial_occupancy );
        for ( std::size_t i = 0; i < section.increments.size(); ++i )
        {
            out += fmt::format( "constraint {} train {} :", section.name, i );
            for ( auto d : section.increments[ i ] )
                out += fmt::format( " {}", d );
            out += '\n';
        }
    }
    return out;
}

Scenario builtin_oneway8()
{
    const auto mission = []( std::initializer_list< int > endpoints )
    {
        Mission m;
        for ( auto e : endpoints )
            m.push_back( EndpointId{ e } );
        return m;
    };

    Scenario scenario;
    scenario.name = "oneway8";
    scenario.mission_len = 7;
    scenario.max_endpoint = 27;
    scenario.missions = {
        mission( { 1, 9, 10, 13, 15, 20, 23 } ),  mission( { 3, 9, 10, 13, 15, 20, 24 } ),
        mission( { 5, 27, 11, 13, 16, 20, 25 } ), mission( { 7, 27, 11, 13, 16, 20, 26 } ),
        mission( { 23, 22, 17, 18, 11, 9, 2 } ),  mission( { 24, 22, 17, 18, 11, 9, 4 } ),
        mission( { 25, 22, 17, 18, 12, 27, 6 } ), mission( { 26, 22, 17, 18, 12, 27, 8 } ),
    };

    SectionSpec a{ "A", 7, 1,
                   {
                       { 0, 0, 0, 1, 0, -1, 0 },
                       { 0, 0, 0, 1, 0, -1, 0 },
                       { 0, 0, 1, -1, 0, 1, 0 },
                       { 0, 0, 1, -1, 0, 0, 0 },
                       { 0, 1, 0, 0, -1, 0, 0 },
                       { 0, 1, 0, 0, -1, 0, 0 },
                       { 0, 0, 0, -1, 0, 0, 0 },
                       { 0, 1, 0, -1, 0, 0, 0 },
                   } };
    SectionSpec b{ "B", 7, 1,
                   {
                       { 0, 0, 0, 1, 0, -1, 0 },
                       { 0, 0, 0, 1, 0, -1, 0 },
                       { 0, 0, 1, -1, 0, 0, 0 },
                       { 0, 0, 1, -1, 0, 1, 0 },
                       { 0, 1, 0, 0, -1, 0, 0 },
                       { 0, 1, 0, 0, -1, 0, 0 },
                       { 0, 1, 0, -1, 0, 0, 0 },
                       { 0, 0, 0, -1, 0, 0, 0 },
                   } };
    scenario.sections = { std::move( a ), std::move( b ) };
    return scenario;
}

} // namespace railcheck
