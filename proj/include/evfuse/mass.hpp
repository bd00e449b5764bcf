#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expression.hpp"
#include "model.hpp"

namespace evfuse
{

/// Tolerance on the total mass of constructed and combined assignments.
inline constexpr double mass_tolerance = 1e-9;

/// Sparse assignment of masses to propositions, keyed by free-form proposition.
using term_map = std::map<Proposition, double>;

namespace detail
{

inline double total( term_map const& terms )
{
  double s = 0.0;
  for ( auto const& [p, w] : terms )
    s += w;
  return s;
}

inline void drop_zeros( term_map& terms )
{
  std::erase_if( terms, []( auto const& kv ) { return kv.second == 0.0; } );
}

/* rule and combination outputs: drift within tolerance is renormalized, beyond it is a bug */
inline void settle( term_map& terms, char const* what )
{
  drop_zeros( terms );
  auto const s = total( terms );
  if ( std::abs( s - 1.0 ) > mass_tolerance )
    throw numeric_drift( std::string( what ) + ": total mass drifted to " + std::to_string( s ) );
  if ( s != 1.0 )
    for ( auto& [p, w] : terms )
      w /= s;
}

} // namespace detail

/*! \brief Basic belief assignment over a model.
 *
 * Only focal elements (strictly positive masses) are stored. Masses built
 * with `make` are validated as input sources: they sum to one and no focal
 * element is empty under the model. Rule outputs may carry empty focal
 * elements (the conjunctive rules keep them, Smets keeps the empty set).
 */
class MassFunction
{
public:
  static MassFunction make( Model const& model, std::span<std::pair<Proposition, double> const> assignments )
  {
    term_map terms;
    for ( auto const& [p, w] : assignments )
    {
      require_frame( model, p );
      if ( !( w >= 0.0 ) || !std::isfinite( w ) )
        throw invalid_input( "mass on " + format_prop( p ) + " must be a finite non-negative number" );
      terms[p] += w;
    }
    detail::drop_zeros( terms );
    for ( auto const& [p, w] : terms )
      if ( is_empty( model, p ) )
        throw invalid_input( "focal element " + format_prop( p ) + " is empty under the model" );
    auto const s = detail::total( terms );
    if ( std::abs( s - 1.0 ) > mass_tolerance )
      throw invalid_input( "masses sum to " + std::to_string( s ) + ", expected 1" );
    return MassFunction( model, std::move( terms ) );
  }

  static MassFunction make( Model const& model, std::initializer_list<std::pair<Proposition, double>> assignments )
  {
    return make( model, std::span( assignments.begin(), assignments.size() ) );
  }

  /// Wraps the output of a combination rule; see `detail::settle` for the drift policy.
  static MassFunction from_rule_output( Model const& model, term_map terms )
  {
    detail::settle( terms, "rule output" );
    return MassFunction( model, std::move( terms ) );
  }

  Model const& model() const noexcept { return model_; }
  term_map const& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  double mass( Proposition const& p ) const
  {
    auto it = terms_.find( p );
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()( Proposition const& p ) const { return mass( p ); }

  /// True when the assignment is acceptable as a source: no focal element empty under the model.
  bool is_input() const
  {
    for ( auto const& [p, w] : terms_ )
      if ( is_empty( model_, p ) )
        return false;
    return true;
  }

private:
  MassFunction( Model model, term_map terms ) : model_( std::move( model ) ), terms_( std::move( terms ) ) {}

  Model model_;
  term_map terms_;
};

inline MassFunction make_mass( Model const& model, std::span<std::pair<Proposition, double> const> assignments )
{
  return MassFunction::make( model, assignments );
}

/// Vacuous belief function: all mass on total ignorance.
inline MassFunction vbf( Model const& model )
{
  return MassFunction::make( model, { { total_ignorance( model.frame() ), 1.0 } } );
}

/// Per-proposition sums of the masses several sources put directly on it.
class ColumnSums
{
public:
  explicit ColumnSums( Model model ) : model_( std::move( model ) ) {}

  ColumnSums& add( MassFunction const& m )
  {
    if ( !( m.model() == model_ ) )
      throw invalid_input( "column sums over masses of different models" );
    for ( auto const& [p, w] : m.terms() )
      sums_[p] += w;
    ++source_count_;
    return *this;
  }

  ColumnSums& add( ColumnSums const& other )
  {
    if ( !( other.model_ == model_ ) )
      throw invalid_input( "column sums over masses of different models" );
    for ( auto const& [p, w] : other.sums_ )
      sums_[p] += w;
    source_count_ += other.source_count_;
    return *this;
  }

  double operator()( Proposition const& p ) const
  {
    auto it = sums_.find( p );
    return it == sums_.end() ? 0.0 : it->second;
  }

  Model const& model() const noexcept { return model_; }
  term_map const& sums() const noexcept { return sums_; }
  std::size_t source_count() const noexcept { return source_count_; }

private:
  Model model_;
  term_map sums_;
  std::size_t source_count_ = 0;
};

inline ColumnSums column_sums( std::span<MassFunction const> masses )
{
  if ( masses.empty() )
    throw invalid_input( "column sums need at least one mass" );
  ColumnSums c( masses.front().model() );
  for ( auto const& m : masses )
    c.add( m );
  return c;
}

/// Sum of masses of non-empty focal elements contained in `p`, subset order taken modulo the model.
inline double belief( MassFunction const& m, Proposition const& p )
{
  require_frame( m.model(), p );
  auto const& mask = m.model().constrained();
  double bel = 0.0;
  for ( auto const& [x, w] : m.terms() )
    if ( !x.minterms().none_outside( mask ) && x.minterms().is_subset_outside( p.minterms(), mask ) )
      bel += w;
  return bel;
}

/// Sum of masses of focal elements meeting `p` non-emptily under the model.
inline double plausibility( MassFunction const& m, Proposition const& p )
{
  require_frame( m.model(), p );
  auto const& mask = m.model().constrained();
  double pl = 0.0;
  for ( auto const& [x, w] : m.terms() )
    if ( x.minterms().intersects_outside( p.minterms(), mask ) )
      pl += w;
  return pl;
}

} // namespace evfuse
