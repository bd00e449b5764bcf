#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mass.hpp"

namespace evfuse
{

/*! \brief Result of the conjunctive rule before any conflict transfer.
 *
 * Terms are keyed by free-form propositions; propositions that are empty
 * under the model are kept as separate terms so that every partial conflict
 * stays identifiable.
 */
class ConjunctiveResult
{
public:
  /// The vacuous result {T: 1} with no contributing sources.
  static ConjunctiveResult vacuous( Model const& model )
  {
    term_map terms{ { total_ignorance( model.frame() ), 1.0 } };
    return ConjunctiveResult( model, std::move( terms ), 0u );
  }

  static ConjunctiveResult of( MassFunction const& m ) { return ConjunctiveResult( m.model(), m.terms(), 1u ); }

  static ConjunctiveResult from_terms( Model const& model, term_map terms, std::size_t source_count )
  {
    detail::settle( terms, "conjunctive combination" );
    return ConjunctiveResult( model, std::move( terms ), source_count );
  }

  Model const& model() const noexcept { return model_; }
  term_map const& terms() const noexcept { return terms_; }
  std::size_t source_count() const noexcept { return source_count_; }

  double mass( Proposition const& p ) const
  {
    auto it = terms_.find( p );
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()( Proposition const& p ) const { return mass( p ); }

  /// The same terms viewed as a (possibly non-input) mass function.
  MassFunction as_mass() const { return MassFunction::from_rule_output( model_, terms_ ); }

  /// Drops terms lighter than `epsilon` and rescales the rest; breaks exact order invariance.
  void prune( double epsilon )
  {
    if ( epsilon <= 0.0 )
      return;
    std::erase_if( terms_, [epsilon]( auto const& kv ) { return kv.second < epsilon; } );
    if ( terms_.empty() )
      throw numeric_drift( "pruning removed every term" );
    auto const s = detail::total( terms_ );
    for ( auto& [p, w] : terms_ )
      w /= s;
  }

private:
  ConjunctiveResult( Model model, term_map terms, std::size_t source_count )
      : model_( std::move( model ) ), terms_( std::move( terms ) ), source_count_( source_count )
  {
  }

  Model model_;
  term_map terms_;
  std::size_t source_count_;
};

enum class RuleId
{
  conjunctive,
  dempster,
  smets,
  yager,
  dubois_prade,
  dsm_classic,
  dsm_hybrid,
  sdli
};

inline constexpr std::array all_rules{ RuleId::conjunctive, RuleId::dempster, RuleId::smets, RuleId::yager,
                                       RuleId::dubois_prade, RuleId::dsm_classic, RuleId::dsm_hybrid, RuleId::sdli };

inline constexpr std::string_view to_string( RuleId rule ) noexcept
{
  switch ( rule )
  {
  case RuleId::conjunctive: return "conjunctive";
  case RuleId::dempster: return "dempster";
  case RuleId::smets: return "smets";
  case RuleId::yager: return "yager";
  case RuleId::dubois_prade: return "dubois_prade";
  case RuleId::dsm_classic: return "dsm_classic";
  case RuleId::dsm_hybrid: return "dsm_hybrid";
  case RuleId::sdli: return "sdli";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_string( std::string_view name ) noexcept
{
  for ( auto r : all_rules )
    if ( to_string( r ) == name )
      return r;
  return std::nullopt;
}

namespace detail
{

inline void require_model( Model const& expected, Model const& actual )
{
  if ( !( expected == actual ) )
    throw invalid_input( "operands belong to different models" );
}

inline ConjunctiveResult conjunctive( Model const& model, term_map const& a, std::size_t a_count, term_map const& b, std::size_t b_count )
{
  term_map out;
  for ( auto const& [x, wx] : a )
    for ( auto const& [y, wy] : b )
      out[x & y] += wx * wy;
  return ConjunctiveResult::from_terms( model, std::move( out ), a_count + b_count );
}

/* fallback target of a conflict with no usable parties */
inline Proposition union_target( Model const& model, Proposition const& p )
{
  if ( p.is_null() )
    return total_ignorance( model.frame() );
  auto u = u_union( p );
  return is_empty( model, u ) ? total_ignorance( model.frame() ) : u;
}

} // namespace detail

inline ConjunctiveResult conjunctive( MassFunction const& a, MassFunction const& b )
{
  detail::require_model( a.model(), b.model() );
  return detail::conjunctive( a.model(), a.terms(), 1u, b.terms(), 1u );
}

inline ConjunctiveResult conjunctive( ConjunctiveResult const& a, MassFunction const& b )
{
  detail::require_model( a.model(), b.model() );
  return detail::conjunctive( a.model(), a.terms(), a.source_count(), b.terms(), 1u );
}

inline ConjunctiveResult conjunctive( MassFunction const& a, ConjunctiveResult const& b )
{
  detail::require_model( a.model(), b.model() );
  return detail::conjunctive( a.model(), a.terms(), 1u, b.terms(), b.source_count() );
}

inline ConjunctiveResult conjunctive( ConjunctiveResult const& a, ConjunctiveResult const& b )
{
  detail::require_model( a.model(), b.model() );
  return detail::conjunctive( a.model(), a.terms(), a.source_count(), b.terms(), b.source_count() );
}

/// Total mass on propositions empty under `model`.
inline double conflict_of( Model const& model, ConjunctiveResult const& r )
{
  detail::require_model( model, r.model() );
  double k = 0.0;
  for ( auto const& [p, w] : r.terms() )
    if ( is_empty( model, p ) )
      k += w;
  return k;
}

/// Dempster: non-empty terms rescaled by 1/(1-k). Throws `rule_error` under total conflict.
inline MassFunction transfer_dempster( Model const& model, ConjunctiveResult const& r )
{
  detail::require_model( model, r.model() );
  term_map kept;
  double agreement = 0.0;
  for ( auto const& [p, w] : r.terms() )
    if ( !is_empty( model, p ) )
    {
      kept.emplace( p, w );
      agreement += w;
    }
  if ( agreement <= 1e-12 )
    throw rule_error( "Dempster's rule is undefined under total conflict (k = 1)" );
  for ( auto& [p, w] : kept )
    w /= agreement;
  return MassFunction::from_rule_output( model, std::move( kept ) );
}

/// Smets (open world): conflicting mass stays on the empty set.
inline MassFunction transfer_smets( Model const& model, ConjunctiveResult const& r )
{
  detail::require_model( model, r.model() );
  term_map out;
  auto const null = Proposition::empty( model.frame() );
  for ( auto const& [p, w] : r.terms() )
    out[is_empty( model, p ) ? null : p] += w;
  return MassFunction::from_rule_output( model, std::move( out ) );
}

/// Yager: conflicting mass goes to total ignorance.
inline MassFunction transfer_yager( Model const& model, ConjunctiveResult const& r )
{
  detail::require_model( model, r.model() );
  term_map out;
  auto const top = total_ignorance( model.frame() );
  for ( auto const& [p, w] : r.terms() )
    out[is_empty( model, p ) ? top : p] += w;
  return MassFunction::from_rule_output( model, std::move( out ) );
}

/*! \brief Union transfer shared by Dubois-Prade and DSm hybrid.
 *
 * Each empty term moves to the union of the atoms it involves (a partial
 * ignorance), or to total ignorance when that union is itself empty.
 */
inline MassFunction transfer_union( Model const& model, ConjunctiveResult const& r )
{
  detail::require_model( model, r.model() );
  term_map out;
  for ( auto const& [p, w] : r.terms() )
    out[is_empty( model, p ) ? detail::union_target( model, p ) : p] += w;
  return MassFunction::from_rule_output( model, std::move( out ) );
}

/*! \brief SDL-improved transfer of partial conflicts.
 *
 * The mass of each empty term is split over its conflict parties in
 * proportion to their column sums. Parties with a zero column are skipped;
 * if none is left the mass follows the union transfer.
 */
inline MassFunction transfer_sdli( Model const& model, ConjunctiveResult const& r, ColumnSums const& columns )
{
  detail::require_model( model, r.model() );
  detail::require_model( model, columns.model() );
  term_map out;
  for ( auto const& [p, w] : r.terms() )
  {
    if ( !is_empty( model, p ) )
    {
      out[p] += w;
      continue;
    }
    std::vector<std::pair<Proposition, double>> weighted;
    double weight_sum = 0.0;
    if ( !p.is_null() )
      for ( auto& party : conflict_parties( p ) )
        if ( auto c = columns( party ); c > 0.0 )
        {
          weight_sum += c;
          weighted.emplace_back( std::move( party ), c );
        }
    if ( weighted.empty() )
    {
      out[detail::union_target( model, p )] += w;
      continue;
    }
    for ( auto const& [party, c] : weighted )
      out[party] += w * c / weight_sum;
  }
  return MassFunction::from_rule_output( model, std::move( out ) );
}

/*! \brief Two-source SDL-improved rule evaluated term by term.
 *
 * Conjunctive mass on non-empty intersections, plus for every focal A and
 * every X with X & A empty under the model the share
 * c(A) * (m1(X) m2(A) + m1(A) m2(X)) / (c(A) + c(X)), where c = m1 + m2.
 * Works from focal-element pairs only; it does not use conflict parties.
 */
inline MassFunction sdli2( MassFunction const& m1, MassFunction const& m2 )
{
  detail::require_model( m1.model(), m2.model() );
  auto const& model = m1.model();
  term_map out;
  for ( auto const& [x, wx] : m1.terms() )
    for ( auto const& [y, wy] : m2.terms() )
      if ( auto z = x & y; !is_empty( model, z ) )
        out[z] += wx * wy;

  std::vector<Proposition> focal;
  for ( auto const* m : { &m1, &m2 } )
    for ( auto const& [p, w] : m->terms() )
      if ( std::find( focal.begin(), focal.end(), p ) == focal.end() )
        focal.push_back( p );

  for ( auto const& a : focal )
  {
    auto const ca = m1( a ) + m2( a );
    for ( auto const& x : focal )
    {
      if ( !is_empty( model, x & a ) )
        continue;
      auto const numerator = m1( x ) * m2( a ) + m1( a ) * m2( x );
      if ( numerator > 0.0 )
        out[a] += ca * numerator / ( ca + m1( x ) + m2( x ) );
    }
  }
  return MassFunction::from_rule_output( model, std::move( out ) );
}

/// Applies the transfer operator of `rule`; conjunctive rules return the terms unchanged.
inline MassFunction apply_transfer( RuleId rule, Model const& model, ConjunctiveResult const& r, ColumnSums const& columns )
{
  switch ( rule )
  {
  case RuleId::conjunctive:
  case RuleId::dsm_classic:
    detail::require_model( model, r.model() );
    return r.as_mass();
  case RuleId::dempster: return transfer_dempster( model, r );
  case RuleId::smets: return transfer_smets( model, r );
  case RuleId::yager: return transfer_yager( model, r );
  case RuleId::dubois_prade:
  case RuleId::dsm_hybrid: return transfer_union( model, r );
  case RuleId::sdli: return transfer_sdli( model, r, columns );
  }
  throw invalid_input( "unknown rule" );
}

inline MassFunction combine2( RuleId rule, MassFunction const& m1, MassFunction const& m2 )
{
  auto r = conjunctive( m1, m2 );
  ColumnSums columns( m1.model() );
  columns.add( m1 ).add( m2 );
  return apply_transfer( rule, m1.model(), r, columns );
}

} // namespace evfuse
