#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "frame.hpp"

namespace evfuse
{

inline constexpr std::string_view empty_symbol = "\xE2\x88\x85"; // U+2205

namespace detail
{

/*
  expr   := term ('|' term)*
  term   := factor ('&' factor)*
  factor := atom | '(' expr ')' | '∅'
*/
class expression_parser
{
public:
  expression_parser( Frame const& frame, std::string_view text ) : frame_( frame ), text_( text ) {}

  Proposition parse()
  {
    auto p = expr();
    skip_space();
    if ( pos_ != text_.size() )
      throw parse_error( "unexpected '" + std::string( 1, text_[pos_] ) + "'", pos_ );
    return p;
  }

private:
  Proposition expr()
  {
    auto p = term();
    while ( accept( '|' ) )
      p |= term();
    return p;
  }

  Proposition term()
  {
    auto p = factor();
    while ( accept( '&' ) )
      p &= factor();
    return p;
  }

  Proposition factor()
  {
    skip_space();
    if ( pos_ == text_.size() )
      throw parse_error( "expected atom or '('", pos_ );
    if ( accept( '(' ) )
    {
      auto p = expr();
      skip_space();
      if ( !accept( ')' ) )
        throw parse_error( "expected ')'", pos_ );
      return p;
    }
    if ( text_.substr( pos_ ).starts_with( empty_symbol ) )
    {
      pos_ += empty_symbol.size();
      return Proposition::empty( frame_ );
    }
    auto const start = pos_;
    while ( pos_ < text_.size() && is_name_char( text_[pos_], pos_ == start ) )
      ++pos_;
    if ( pos_ == start )
      throw parse_error( "expected atom or '('", pos_ );
    auto name = text_.substr( start, pos_ - start );
    auto i = frame_.index_of( name );
    if ( !i )
      throw parse_error( "unknown atom '" + std::string( name ) + "'", start );
    return atom( frame_, *i );
  }

  static bool is_name_char( char c, bool first ) noexcept
  {
    bool alpha = ( c >= 'A' && c <= 'Z' ) || ( c >= 'a' && c <= 'z' );
    if ( first )
      return alpha;
    return alpha || ( c >= '0' && c <= '9' ) || c == '_';
  }

  bool accept( char c )
  {
    skip_space();
    if ( pos_ < text_.size() && text_[pos_] == c )
    {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space()
  {
    while ( pos_ < text_.size() && ( text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r' ) )
      ++pos_;
  }

  Frame const& frame_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `A|B&(C|D)` style expressions; '&' binds tighter than '|'.
inline Proposition parse_prop( Frame const& frame, std::string_view text )
{
  return detail::expression_parser( frame, text ).parse();
}

/// Canonical DNF text: atoms in frame order joined by '&', terms sorted and joined by '|'.
inline std::string format_prop( Proposition const& p )
{
  if ( p.is_null() )
    return std::string( empty_symbol );
  auto const& frame = p.frame();
  std::vector<std::string> terms;
  for ( auto t : dnf_terms( p ) )
  {
    std::string s;
    for ( std::size_t i = 0; i < frame.size(); ++i )
    {
      if ( !( ( t >> i ) & 1u ) )
        continue;
      if ( !s.empty() )
        s += '&';
      s += frame.name( i );
    }
    terms.push_back( std::move( s ) );
  }
  std::sort( terms.begin(), terms.end() );
  std::string out;
  for ( auto const& s : terms )
  {
    if ( !out.empty() )
      out += '|';
    out += s;
  }
  return out;
}

} // namespace evfuse
