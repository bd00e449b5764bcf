#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detail/bitstring.hpp"
#include "error.hpp"

namespace evfuse
{

/// Set of atom indices of a frame, bit i standing for the i-th atom.
using atom_set = std::uint32_t;

inline constexpr std::size_t min_frame_size = 2;
inline constexpr std::size_t max_frame_size = 16;

/*! \brief Ordered set of elementary hypotheses.
 *
 * Frames are cheap handles to immutable shared data. Two frames compare
 * equal when they list the same atom names in the same order.
 */
class Frame
{
public:
  static Frame make( std::vector<std::string> names )
  {
    if ( names.size() < min_frame_size || names.size() > max_frame_size )
      throw invalid_input( "frame must have between 2 and 16 atoms, got " + std::to_string( names.size() ) );
    for ( std::size_t i = 0; i < names.size(); ++i )
    {
      if ( !valid_atom_name( names[i] ) )
        throw invalid_input( "invalid atom name '" + names[i] + "'" );
      for ( std::size_t j = 0; j < i; ++j )
        if ( names[j] == names[i] )
          throw invalid_input( "duplicate atom name '" + names[i] + "'" );
    }
    return Frame( std::make_shared<std::vector<std::string> const>( std::move( names ) ) );
  }

  static bool valid_atom_name( std::string_view name ) noexcept
  {
    auto alpha = []( char c ) { return ( c >= 'A' && c <= 'Z' ) || ( c >= 'a' && c <= 'z' ); };
    auto digit = []( char c ) { return c >= '0' && c <= '9'; };
    if ( name.empty() || !alpha( name.front() ) )
      return false;
    return std::all_of( name.begin() + 1, name.end(), [&]( char c ) { return alpha( c ) || digit( c ) || c == '_'; } );
  }

  std::size_t size() const noexcept { return names_->size(); }

  /// Number of Venn regions, one per non-empty atom subset.
  std::size_t minterm_count() const noexcept { return ( std::size_t{ 1 } << size() ) - 1u; }

  atom_set all_atoms() const noexcept { return static_cast<atom_set>( minterm_count() ); }

  std::string const& name( std::size_t i ) const { return names_->at( i ); }
  std::vector<std::string> const& names() const noexcept { return *names_; }

  std::optional<std::size_t> index_of( std::string_view name ) const noexcept
  {
    auto it = std::find( names_->begin(), names_->end(), name );
    if ( it == names_->end() )
      return std::nullopt;
    return static_cast<std::size_t>( it - names_->begin() );
  }

  friend bool operator==( Frame const& a, Frame const& b ) noexcept
  {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

private:
  explicit Frame( std::shared_ptr<std::vector<std::string> const> names ) : names_( std::move( names ) ) {}

  std::shared_ptr<std::vector<std::string> const> names_;
};

/// Bit position of the minterm for atom subset `m` (m != 0).
inline constexpr std::size_t minterm_index( atom_set m ) noexcept { return static_cast<std::size_t>( m ) - 1u; }

/*! \brief Element of the hyper-power set of a frame.
 *
 * Stored as the up-closed family of Venn minterms it covers. Intersection
 * and union are bitwise AND and OR, equality is bit equality. The all-zero
 * family is the empty proposition.
 */
class Proposition
{
public:
  Frame const& frame() const noexcept { return frame_; }
  detail::bitstring const& minterms() const noexcept { return bits_; }

  bool has_minterm( atom_set m ) const noexcept { return m != 0u && bits_.test( minterm_index( m ) ); }

  /// True for the all-zero family (the empty proposition).
  bool is_null() const noexcept { return bits_.none(); }

  Proposition& operator&=( Proposition const& other )
  {
    check_frame( other );
    bits_ &= other.bits_;
    return *this;
  }

  Proposition& operator|=( Proposition const& other )
  {
    check_frame( other );
    bits_ |= other.bits_;
    return *this;
  }

  friend Proposition operator&( Proposition a, Proposition const& b ) { return a &= b; }
  friend Proposition operator|( Proposition a, Proposition const& b ) { return a |= b; }

  friend bool operator==( Proposition const& a, Proposition const& b ) noexcept
  {
    return a.bits_ == b.bits_ && a.frame_ == b.frame_;
  }

  /* total order on the minterm bits; only meaningful within one frame */
  friend std::strong_ordering operator<=>( Proposition const& a, Proposition const& b ) noexcept
  {
    return a.bits_ <=> b.bits_;
  }

  static Proposition empty( Frame const& frame ) { return Proposition( frame, detail::bitstring( frame.minterm_count() ) ); }

  /// Intersection of the atoms in `term` (nonzero).
  static Proposition from_term( Frame const& frame, atom_set term )
  {
    check_atoms( frame, term );
    auto p = empty( frame );
    for ( atom_set m = 1u; m <= frame.all_atoms(); ++m )
      if ( ( m & term ) == term )
        p.bits_.set( minterm_index( m ) );
    return p;
  }

  /// Union of the atoms in `atoms` (nonzero).
  static Proposition from_atoms( Frame const& frame, atom_set atoms )
  {
    check_atoms( frame, atoms );
    auto p = empty( frame );
    for ( atom_set m = 1u; m <= frame.all_atoms(); ++m )
      if ( m & atoms )
        p.bits_.set( minterm_index( m ) );
    return p;
  }

  /// Builds a proposition from an explicit minterm list; the family must be up-closed.
  static Proposition from_minterms( Frame const& frame, std::span<atom_set const> minterms )
  {
    auto p = empty( frame );
    for ( auto m : minterms )
    {
      if ( m == 0u || ( m & ~frame.all_atoms() ) != 0u )
        throw invalid_input( "minterm out of range for frame" );
      p.bits_.set( minterm_index( m ) );
    }
    if ( !p.is_up_closed() )
      throw invalid_input( "minterm family is not up-closed" );
    return p;
  }

  bool is_up_closed() const noexcept
  {
    auto const all = frame_.all_atoms();
    for ( atom_set m = 1u; m <= all; ++m )
    {
      if ( !has_minterm( m ) )
        continue;
      for ( atom_set rest = all & ~m; rest != 0u; rest &= rest - 1u )
        if ( !has_minterm( m | ( rest & -rest ) ) )
          return false;
    }
    return true;
  }

private:
  Proposition( Frame frame, detail::bitstring bits ) : frame_( std::move( frame ) ), bits_( std::move( bits ) ) {}

  static void check_atoms( Frame const& frame, atom_set atoms )
  {
    if ( atoms == 0u || ( atoms & ~frame.all_atoms() ) != 0u )
      throw invalid_input( "atom set out of range for frame" );
  }

  void check_frame( Proposition const& other ) const
  {
    if ( !( frame_ == other.frame_ ) )
      throw invalid_input( "propositions belong to different frames" );
  }

  Frame frame_;
  detail::bitstring bits_;
};

inline Proposition atom( Frame const& frame, std::size_t i )
{
  if ( i >= frame.size() )
    throw invalid_input( "atom index " + std::to_string( i ) + " out of range" );
  return Proposition::from_atoms( frame, atom_set{ 1 } << i );
}

inline Proposition atom( Frame const& frame, std::string_view name )
{
  auto i = frame.index_of( name );
  if ( !i )
    throw invalid_input( "unknown atom '" + std::string( name ) + "'" );
  return atom( frame, *i );
}

inline Proposition total_ignorance( Frame const& frame ) { return Proposition::from_atoms( frame, frame.all_atoms() ); }

inline Proposition intersect( Proposition const& p, Proposition const& q ) { return p & q; }
inline Proposition unite( Proposition const& p, Proposition const& q ) { return p | q; }

/// Minimal antichain of atom sets whose intersections unite to `p`.
inline std::vector<atom_set> dnf_terms( Proposition const& p )
{
  if ( p.is_null() )
    throw invalid_input( "empty proposition has no DNF terms" );
  std::vector<atom_set> terms;
  auto const all = p.frame().all_atoms();
  for ( atom_set m = 1u; m <= all; ++m )
  {
    if ( !p.has_minterm( m ) )
      continue;
    bool minimal = true;
    for ( atom_set rest = m; rest != 0u && minimal; rest &= rest - 1u )
      minimal = !p.has_minterm( m & ~( rest & -rest ) );
    if ( minimal )
      terms.push_back( m );
  }
  return terms;
}

inline Proposition from_dnf( Frame const& frame, std::span<atom_set const> terms )
{
  auto p = Proposition::empty( frame );
  for ( auto t : terms )
    p |= Proposition::from_term( frame, t );
  return p;
}

/*! \brief Minimal transversals of a hypergraph given by its edges.
 *
 * Berge's incremental algorithm: the transversal set is extended edge by
 * edge and kept minimal after each step. Returned sets are sorted by size,
 * then by ascending atom index sequence.
 */
inline std::vector<atom_set> minimal_transversals( std::span<atom_set const> edges )
{
  std::vector<atom_set> current{ 0u };
  for ( auto edge : edges )
  {
    std::vector<atom_set> next;
    for ( auto h : current )
    {
      if ( h & edge )
      {
        next.push_back( h );
        continue;
      }
      for ( atom_set rest = edge; rest != 0u; rest &= rest - 1u )
        next.push_back( h | ( rest & -rest ) );
    }
    std::sort( next.begin(), next.end() );
    next.erase( std::unique( next.begin(), next.end() ), next.end() );

    current.clear();
    for ( auto h : next )
    {
      auto dominated = std::any_of( next.begin(), next.end(), [h]( atom_set g ) { return g != h && ( g & h ) == g; } );
      if ( !dominated )
        current.push_back( h );
    }
  }

  auto index_order = []( atom_set a, atom_set b ) {
    if ( std::popcount( a ) != std::popcount( b ) )
      return std::popcount( a ) < std::popcount( b );
    /* lowest differing atom decides: the set that has it comes first */
    auto diff = a ^ b;
    return ( a & diff & -diff ) != 0u;
  };
  std::sort( current.begin(), current.end(), index_order );
  return current;
}

/*! \brief Parties of a conflict: the prime implicates of `p`.
 *
 * Each minimal hitting set of the DNF antichain is returned as the union of
 * its atoms. Intersecting all parties gives back `p`.
 */
inline std::vector<Proposition> conflict_parties( Proposition const& p )
{
  auto const terms = dnf_terms( p );
  std::vector<Proposition> parties;
  for ( auto h : minimal_transversals( terms ) )
    parties.push_back( Proposition::from_atoms( p.frame(), h ) );
  return parties;
}

/// Union of every atom mentioned in `p`'s DNF.
inline Proposition u_union( Proposition const& p )
{
  atom_set used = 0u;
  for ( auto t : dnf_terms( p ) )
    used |= t;
  return Proposition::from_atoms( p.frame(), used );
}

} // namespace evfuse
