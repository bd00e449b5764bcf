#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "frame.hpp"

namespace evfuse
{

enum class ModelKind
{
  free,
  exclusive,
  custom
};

/*! \brief Frame plus a set of minterms forced empty.
 *
 * The free model constrains nothing (hyper-power set semantics), the
 * exclusive model constrains every minterm with two or more atoms (power
 * set semantics), and custom models are generated by exclusive atom pairs.
 * Singleton minterms are never constrained, so total ignorance is never
 * empty.
 */
class Model
{
public:
  static Model free( Frame const& frame )
  {
    return Model( frame, detail::bitstring( frame.minterm_count() ), ModelKind::free, {} );
  }

  static Model exclusive( Frame const& frame )
  {
    detail::bitstring mask( frame.minterm_count() );
    for ( atom_set m = 1u; m <= frame.all_atoms(); ++m )
      if ( std::popcount( m ) >= 2 )
        mask.set( minterm_index( m ) );
    return Model( frame, std::move( mask ), ModelKind::exclusive, {} );
  }

  /// Every minterm containing both atoms of some pair is constrained.
  static Model with_exclusive_pairs( Frame const& frame, std::vector<std::pair<std::string, std::string>> const& pairs )
  {
    detail::bitstring mask( frame.minterm_count() );
    std::vector<atom_set> generators;
    for ( auto const& [a, b] : pairs )
    {
      auto i = frame.index_of( a );
      auto j = frame.index_of( b );
      if ( !i )
        throw invalid_input( "unknown atom '" + a + "' in exclusive pair" );
      if ( !j )
        throw invalid_input( "unknown atom '" + b + "' in exclusive pair" );
      if ( *i == *j )
        throw invalid_input( "exclusive pair repeats atom '" + a + "'" );
      generators.push_back( ( atom_set{ 1 } << *i ) | ( atom_set{ 1 } << *j ) );
    }
    for ( atom_set m = 1u; m <= frame.all_atoms(); ++m )
      for ( auto g : generators )
        if ( ( m & g ) == g )
        {
          mask.set( minterm_index( m ) );
          break;
        }
    return Model( frame, std::move( mask ), ModelKind::custom, pairs );
  }

  Frame const& frame() const noexcept { return data_->frame; }
  ModelKind kind() const noexcept { return data_->kind; }
  detail::bitstring const& constrained() const noexcept { return data_->constrained; }
  std::vector<std::pair<std::string, std::string>> const& exclusive_pairs() const noexcept { return data_->pairs; }

  bool is_constrained( atom_set m ) const noexcept { return m != 0u && data_->constrained.test( minterm_index( m ) ); }

  friend bool operator==( Model const& a, Model const& b ) noexcept
  {
    return a.data_ == b.data_ || ( a.data_->frame == b.data_->frame && a.data_->constrained == b.data_->constrained );
  }

private:
  struct data
  {
    Frame frame;
    detail::bitstring constrained;
    ModelKind kind;
    std::vector<std::pair<std::string, std::string>> pairs;
  };

  Model( Frame const& frame, detail::bitstring mask, ModelKind kind, std::vector<std::pair<std::string, std::string>> pairs )
      : data_( std::make_shared<data const>( data{ frame, std::move( mask ), kind, std::move( pairs ) } ) )
  {
  }

  std::shared_ptr<data const> data_;
};

inline void require_frame( Model const& model, Proposition const& p )
{
  if ( !( model.frame() == p.frame() ) )
    throw invalid_input( "proposition does not belong to the model's frame" );
}

/// True iff every minterm of `p` is constrained by `model`.
inline bool is_empty( Model const& model, Proposition const& p )
{
  require_frame( model, p );
  return p.minterms().none_outside( model.constrained() );
}

} // namespace evfuse
