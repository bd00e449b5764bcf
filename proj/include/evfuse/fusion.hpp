#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rules.hpp"

namespace evfuse
{

/*! \brief Order-invariant, incrementally updatable fusion state.
 *
 * The state keeps the conjunctive combination of every source fused so far
 * together with the cumulative column sums. A transfer operator is applied
 * only when a decision snapshot is requested, and always to a copy, so a
 * rule that is not associative on its own becomes order-invariant and
 * Markovian when driven through this state.
 *
 * A fresh state holds the vacuous result {T: 1}.
 */
class FusionState
{
public:
  explicit FusionState( Model model, double prune_epsilon = 0.0 )
      : accumulator_( ConjunctiveResult::vacuous( model ) ),
        columns_( model ),
        model_( std::move( model ) ),
        prune_epsilon_( prune_epsilon )
  {
  }

  /// Combines a new source with the stored conjunctive result, never with a transferred one.
  FusionState& fuse( MassFunction const& m, std::string label = {} )
  {
    if ( !( m.model() == model_ ) )
      throw invalid_input( "source '" + label + "' belongs to a different model" );
    if ( !m.is_input() )
      throw invalid_input( "source '" + label + "' has a focal element that is empty under the model" );
    accumulator_ = conjunctive( accumulator_, m );
    accumulator_.prune( prune_epsilon_ );
    columns_.add( m );
    labels_.push_back( std::move( label ) );
    return *this;
  }

  /// Absorbs another state as if its sources were fused here one by one.
  FusionState& absorb( FusionState const& other )
  {
    if ( !( other.model_ == model_ ) )
      throw invalid_input( "cannot absorb a fusion state of a different model" );
    accumulator_ = conjunctive( accumulator_, other.accumulator_ );
    accumulator_.prune( prune_epsilon_ );
    columns_.add( other.columns_ );
    labels_.insert( labels_.end(), other.labels_.begin(), other.labels_.end() );
    return *this;
  }

  /// Decision view under `rule`; the state itself is left untouched.
  MassFunction snapshot( RuleId rule ) const { return apply_transfer( rule, model_, accumulator_, columns_ ); }

  double conflict() const { return conflict_of( model_, accumulator_ ); }

  Model const& model() const noexcept { return model_; }
  ConjunctiveResult const& accumulator() const noexcept { return accumulator_; }
  ColumnSums const& columns() const noexcept { return columns_; }
  std::size_t source_count() const noexcept { return columns_.source_count(); }
  std::vector<std::string> const& labels() const noexcept { return labels_; }
  double prune_epsilon() const noexcept { return prune_epsilon_; }

private:
  ConjunctiveResult accumulator_;
  ColumnSums columns_;
  Model model_;
  double prune_epsilon_;
  std::vector<std::string> labels_;
};

inline FusionState init( Model const& model ) { return FusionState( model ); }

inline FusionState fuse( FusionState state, MassFunction const& m, std::string label = {} )
{
  state.fuse( m, std::move( label ) );
  return state;
}

inline MassFunction snapshot( FusionState const& state, RuleId rule ) { return state.snapshot( rule ); }

/// Fuses every mass in order and takes one snapshot.
inline MassFunction batch( Model const& model, std::span<MassFunction const> masses, RuleId rule )
{
  if ( masses.empty() )
    throw invalid_input( "batch fusion needs at least one mass" );
  FusionState state( model );
  for ( auto const& m : masses )
    state.fuse( m );
  return state.snapshot( rule );
}

/*! \brief Direct n-way conjunctive combination.
 *
 * Walks the Cartesian product of all focal sets and intersects each tuple
 * at once. Shares no code path with the pairwise fold and serves as its
 * test oracle.
 */
inline ConjunctiveResult oracle_conjunctive( std::span<MassFunction const> masses )
{
  if ( masses.size() < 2 )
    throw invalid_input( "oracle combination needs at least two masses" );
  auto const& model = masses.front().model();
  std::vector<std::vector<std::pair<Proposition, double>>> focal;
  for ( auto const& m : masses )
  {
    if ( !( m.model() == model ) )
      throw invalid_input( "oracle combination over masses of different models" );
    focal.emplace_back( m.terms().begin(), m.terms().end() );
  }

  term_map out;
  std::vector<std::size_t> index( focal.size(), 0u );
  while ( true )
  {
    auto p = focal[0][index[0]].first;
    double w = focal[0][index[0]].second;
    for ( std::size_t s = 1; s < focal.size(); ++s )
    {
      p &= focal[s][index[s]].first;
      w *= focal[s][index[s]].second;
    }
    out[p] += w;

    std::size_t s = 0;
    while ( s < focal.size() && ++index[s] == focal[s].size() )
      index[s++] = 0u;
    if ( s == focal.size() )
      break;
  }
  return ConjunctiveResult::from_terms( model, std::move( out ), masses.size() );
}

} // namespace evfuse
