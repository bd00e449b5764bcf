// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <evfuse/cli.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace evfuse;
namespace gen = evfuse::test_support;

namespace
{

struct verdict
{
  bool passed = true;
  double worst = 0.0;
  std::string note;

  void near( double actual, double expected, double tol )
  {
    auto dev = std::abs( actual - expected );
    worst = std::max( worst, dev );
    if ( !( dev <= tol ) )
      passed = false;
  }

  void within( double deviation, double tol )
  {
    worst = std::max( worst, deviation );
    if ( !( deviation <= tol ) )
      passed = false;
  }

  void require( bool ok, std::string const& why = {} )
  {
    if ( !ok )
    {
      passed = false;
      if ( note.empty() )
        note = why;
    }
  }
};

struct outcome
{
  std::optional<MassFunction> mass;
};

outcome snapshot_or_error( FusionState const& state, RuleId rule )
{
  try
  {
    return { state.snapshot( rule ) };
  }
  catch ( rule_error const& )
  {
    return { std::nullopt };
  }
}

void compare( verdict& v, outcome const& a, outcome const& b, double tol )
{
  if ( a.mass.has_value() != b.mass.has_value() )
  {
    v.require( false, "rule error in only one ordering" );
    return;
  }
  if ( a.mass )
    v.within( gen::max_deviation( a.mass->terms(), b.mass->terms() ), tol );
}

FusionState fold( Model const& model, std::vector<MassFunction> const& sources, std::vector<std::size_t> const& order )
{
  FusionState state( model );
  for ( auto i : order )
    state.fuse( sources[i] );
  return state;
}

std::vector<std::size_t> iota_order( std::size_t n )
{
  std::vector<std::size_t> o( n );
  std::iota( o.begin(), o.end(), std::size_t{ 0 } );
  return o;
}

gen::worked_example const ex;

verdict conjunctive_fixture()
{
  verdict v;
  auto s1 = conjunctive( ex.m1, ex.m2 );
  v.near( s1( ex.a ), 0.38, 1e-9 );
  v.near( s1( ex.b ), 0.10, 1e-9 );
  v.near( s1( ex.a_or_c ), 0.02, 1e-9 );
  v.near( s1( ex.a_and_b ), 0.38, 1e-9 );
  v.near( s1( ex.b_and_a_or_c ), 0.12, 1e-9 );
  v.require( s1.terms().size() == 5u, "unexpected extra terms" );
  return v;
}

verdict hybrid_fixture()
{
  verdict v;
  auto r1 = transfer_union( ex.model, conjunctive( ex.m1, ex.m2 ) );
  v.near( r1( ex.a ), 0.38, 1e-9 );
  v.near( r1( ex.b ), 0.10, 1e-9 );
  v.near( r1( ex.a_or_c ), 0.02, 1e-9 );
  v.near( r1( ex.a_or_b ), 0.38, 1e-9 );
  v.near( r1( ex.top ), 0.12, 1e-9 );
  v.require( r1.terms().size() == 5u, "unexpected extra terms" );
  return v;
}

void expect_r2( verdict& v, MassFunction const& r2 )
{
  v.near( r2( ex.a ), 0.318, 1e-9 );
  v.near( r2( ex.b ), 0.020, 1e-9 );
  v.near( r2( ex.a_or_c ), 0.002, 1e-9 );
  v.near( r2( ex.a_or_b ), 0.610, 1e-9 );
  v.near( r2( ex.top ), 0.050, 1e-9 );
  v.require( r2.terms().size() == 5u, "unexpected extra terms" );
}

verdict streaming_fixture()
{
  verdict v;
  FusionState state( ex.model );
  state.fuse( ex.m1 ).fuse( ex.m2 ).fuse( ex.m3 );
  auto const& s2 = state.accumulator();
  v.near( s2( ex.a ), 0.318, 1e-9 );
  v.near( s2( ex.b ), 0.020, 1e-9 );
  v.near( s2( ex.a_or_c ), 0.002, 1e-9 );
  v.near( s2( ex.a_and_b ), 0.610, 1e-9 );
  v.near( s2( ex.b_and_a_or_c ), 0.050, 1e-9 );
  auto const r2 = state.snapshot( RuleId::dsm_hybrid );
  expect_r2( v, r2 );

  std::vector three{ ex.m1, ex.m2, ex.m3 };
  auto const batched = batch( ex.model, three, RuleId::dsm_hybrid );
  expect_r2( v, batched );
  v.within( gen::max_deviation( batched.terms(), r2.terms() ), 1e-9 );

  FusionState tail( ex.model );
  tail.fuse( ex.m2 ).fuse( ex.m3 );
  FusionState regrouped( ex.model );
  regrouped.fuse( ex.m1 ).absorb( tail );
  auto const late = regrouped.snapshot( RuleId::dsm_hybrid );
  expect_r2( v, late );
  v.within( gen::max_deviation( late.terms(), r2.terms() ), 1e-9 );
  return v;
}

verdict markovian_fixture()
{
  verdict v;
  FusionState state( ex.model );
  state.fuse( ex.m1 ).fuse( ex.m2 ).fuse( ex.m3 ).fuse( ex.m4 );
  auto const r4 = state.snapshot( RuleId::dsm_hybrid );
  v.near( r4( ex.a ), 0.160, 1e-9 );
  v.near( r4( ex.b ), 0.010, 1e-9 );
  v.near( r4( ex.a_or_b ), 0.804, 1e-9 );
  v.near( r4( ex.top ), 0.026, 1e-9 );
  v.near( r4( ex.a_or_c ), 0.0, 1e-9 );
  std::vector four{ ex.m1, ex.m2, ex.m3, ex.m4 };
  auto const batched = transfer_union( ex.model, oracle_conjunctive( four ) );
  v.within( gen::max_deviation( batched.terms(), r4.terms() ), 1e-9 );
  v.within( gen::max_deviation( batch( ex.model, four, RuleId::dsm_hybrid ).terms(), r4.terms() ), 1e-9 );
  return v;
}

verdict sdli_two_sources()
{
  verdict v;
  std::vector two{ ex.m1, ex.m2 };
  auto const out = batch( ex.model, two, RuleId::sdli );
  v.near( out( ex.a ), 0.603529, 1e-6 );
  v.near( out( ex.b ), 0.340471, 1e-6 );
  v.near( out( ex.a_or_c ), 0.056000, 1e-6 );
  v.require( out.terms().size() == 3u, "unexpected extra terms" );
  return v;
}

verdict sdli_three_sources()
{
  verdict v;
  std::vector three{ ex.m1, ex.m2, ex.m3 };
  auto order = iota_order( 3 );
  auto const base = fold( ex.model, three, order ).snapshot( RuleId::sdli );
  v.near( base( ex.a ), 0.716846, 1e-6 );
  v.near( base( ex.b ), 0.265769, 1e-6 );
  v.near( base( ex.a_or_c ), 0.017385, 1e-6 );
  v.require( base.terms().size() == 3u, "unexpected extra terms" );
  std::size_t orderings = 1;
  while ( std::next_permutation( order.begin(), order.end() ) )
  {
    v.within( gen::max_deviation( fold( ex.model, three, order ).snapshot( RuleId::sdli ).terms(), base.terms() ), 1e-9 );
    ++orderings;
  }
  v.require( orderings == 6u, "expected six orderings" );
  return v;
}

verdict vbf_neutrality()
{
  verdict v;
  auto const scenario = load_scenario( std::string( EVFUSE_SCENARIO_DIR ) + "/vacuous_first.json" );
  auto const masses = scenario.masses();
  auto const with_vbf = batch( scenario.model, masses, RuleId::sdli );
  std::vector two{ ex.m1, ex.m2 };
  auto const plain = batch( ex.model, two, RuleId::sdli );
  v.within( gen::max_deviation( with_vbf.terms(), plain.terms() ), 1e-12 );
  v.near( with_vbf( ex.top ), 0.0, 1e-12 );

  gen::rng_t rng( 7001 );
  for ( int trial = 0; trial < 200; ++trial )
  {
    auto t = gen::frame_of_size( gen::uniform( rng, 2, 4 ) );
    auto model = gen::random_model( t, rng, static_cast<gen::model_choice>( trial % 3 ) );
    auto sources = gen::random_sources( model, rng, gen::uniform( rng, 1, 5 ) );
    auto const base = fold( model, sources, iota_order( sources.size() ) );
    auto padded = sources;
    auto inserts = gen::uniform( rng, 1, 3 );
    for ( std::size_t k = 0; k < inserts; ++k )
      padded.insert( padded.begin() + static_cast<std::ptrdiff_t>( gen::uniform( rng, 0, padded.size() ) ), vbf( model ) );
    auto const other = fold( model, padded, iota_order( padded.size() ) );
    for ( auto rule : all_rules )
      compare( v, snapshot_or_error( base, rule ), snapshot_or_error( other, rule ), 1e-12 );
  }
  return v;
}

verdict direct_formula_consistency()
{
  verdict v;
  gen::rng_t rng( 7002 );
  for ( int trial = 0; trial < 500; ++trial )
  {
    auto t = gen::frame_of_size( gen::uniform( rng, 2, 4 ) );
    auto model = gen::random_model( t, rng, trial % 2 ? gen::model_choice::exclusive : gen::model_choice::free );
    auto m1 = gen::random_mass( model, rng, 5 );
    auto m2 = gen::random_mass( model, rng, 5 );
    std::vector two{ m1, m2 };
    auto engine = transfer_sdli( model, conjunctive( m1, m2 ), column_sums( two ) );
    v.within( gen::max_deviation( sdli2( m1, m2 ).terms(), engine.terms() ), 1e-12 );
  }
  return v;
}

verdict oracle_equivalence()
{
  verdict v;
  gen::rng_t rng( 7003 );
  for ( int trial = 0; trial < 300; ++trial )
  {
    auto t = gen::frame_of_size( gen::uniform( rng, 2, 4 ) );
    auto model = gen::random_model( t, rng, static_cast<gen::model_choice>( trial % 3 ) );
    auto sources = gen::random_sources( model, rng, gen::uniform( rng, 2, 5 ) );
    FusionState state( model );
    std::vector<MassFunction> prefix;
    for ( auto const& m : sources )
    {
      state.fuse( m );
      prefix.push_back( m );
      if ( prefix.size() >= 2 )
        v.within( gen::max_deviation( state.accumulator().terms(), oracle_conjunctive( prefix ).terms() ), 1e-12 );
    }
  }
  return v;
}

verdict quasi_associativity()
{
  verdict v;
  gen::rng_t rng( 7004 );
  for ( int trial = 0; trial < 300; ++trial )
  {
    auto t = gen::frame_of_size( gen::uniform( rng, 2, 4 ) );
    auto model = gen::random_model( t, rng, static_cast<gen::model_choice>( trial % 3 ) );
    auto sources = gen::random_sources( model, rng, gen::uniform( rng, 2, 4 ) );
    auto order = iota_order( sources.size() );
    auto const base = fold( model, sources, order );
    std::vector<FusionState> permuted;
    while ( std::next_permutation( order.begin(), order.end() ) )
      permuted.push_back( fold( model, sources, order ) );
    for ( auto rule : all_rules )
    {
      auto const expected = snapshot_or_error( base, rule );
      for ( auto const& p : permuted )
        compare( v, expected, snapshot_or_error( p, rule ), 1e-9 );
    }
  }

  // negative control: transfer after every step
  gen::rng_t control_rng( 7005 );
  auto model = Model::exclusive( gen::frame_of_size( 3 ) );
  auto sources = gen::random_sources( model, control_rng, 3 );
  // first draw of the seeded stream whose leading pair actually conflicts
  while ( conflict_of( model, conjunctive( sources[0], sources[1] ) ) < 0.1 || sources[2].size() < 2u )
    sources = gen::random_sources( model, control_rng, 3 );
  auto direct = combine2( RuleId::yager, combine2( RuleId::yager, sources[0], sources[1] ), sources[2] );
  auto engine = batch( model, sources, RuleId::yager );
  auto gap = gen::max_deviation( direct.terms(), engine.terms() );
  std::ostringstream note;
  note << "direct Yager chaining gap " << cli::scientific3( gap );
  v.note = note.str();
  v.require( gap > 1e-3, "negative control did not separate" );
  return v;
}

verdict lattice_laws()
{
  verdict v;
  auto t = ex.frame;
  auto const elements = gen::all_elements( t );
  v.require( elements.size() == 18u, "expected 18 elements" );
  for ( auto const& p : elements )
  {
    v.require( p.is_up_closed() && ( p & p ) == p && ( p | p ) == p, "idempotence" );
    v.require( parse_prop( t, format_prop( p ) ) == p, "round trip" );
    v.require( from_dnf( t, dnf_terms( p ) ) == p, "dnf rebuild" );
    auto meet = total_ignorance( t );
    for ( auto const& g : conflict_parties( p ) )
      meet &= g;
    v.require( meet == p, "parties meet" );
    for ( auto const& q : elements )
    {
      v.require( ( p & q ) == ( q & p ) && ( p | q ) == ( q | p ), "commutativity" );
      v.require( ( p & ( p | q ) ) == p && ( p | ( p & q ) ) == p, "absorption" );
      v.require( ( p & q ).is_up_closed() && ( p | q ).is_up_closed(), "closure" );
      for ( auto const& r : elements )
      {
        v.require( ( ( p & q ) & r ) == ( p & ( q & r ) ) && ( ( p | q ) | r ) == ( p | ( q | r ) ), "associativity" );
        v.require( ( p & ( q | r ) ) == ( ( p & q ) | ( p & r ) ), "distributivity" );
      }
    }
  }
  return v;
}

verdict dempster_guard()
{
  verdict v;
  auto const path = std::string( EVFUSE_SCENARIO_DIR ) + "/total_conflict.json";
  char const* argv[] = { "evfuse", "fuse", path.c_str() };
  std::ostringstream out, err;
  auto code = cli::run( 3, argv, out, err );
  v.require( code == cli::rule_failure, "expected exit 3, got " + std::to_string( code ) );

  gen::rng_t rng( 7006 );
  for ( int trial = 0; trial < 300; ++trial )
  {
    auto t = gen::frame_of_size( gen::uniform( rng, 2, 4 ) );
    auto model = gen::random_model( t, rng, trial % 2 ? gen::model_choice::exclusive : gen::model_choice::custom );
    auto sources = gen::random_sources( model, rng, gen::uniform( rng, 2, 5 ) );
    outcome chained{ sources[0] };
    for ( std::size_t i = 1; i < sources.size() && chained.mass; ++i )
    {
      try
      {
        chained.mass = combine2( RuleId::dempster, *chained.mass, sources[i] );
      }
      catch ( rule_error const& )
      {
        chained.mass.reset();
      }
    }
    compare( v, snapshot_or_error( fold( model, sources, iota_order( sources.size() ) ), RuleId::dempster ), chained, 1e-9 );
  }
  return v;
}

} // namespace

int main()
{
  struct criterion
  {
    char const* name;
    std::function<verdict()> run;
  };
  std::vector<criterion> const criteria = {
      { "conjunctive fixture", conjunctive_fixture },
      { "DSm hybrid fixture", hybrid_fixture },
      { "streaming fixtures, batch and regrouping", streaming_fixture },
      { "Markovian fixture", markovian_fixture },
      { "SDLi two sources", sdli_two_sources },
      { "SDLi three sources, all orderings", sdli_three_sources },
      { "VBF neutrality", vbf_neutrality },
      { "direct SDLi formula vs transfer path", direct_formula_consistency },
      { "incremental state vs n-way oracle", oracle_equivalence },
      { "quasi-associativity and negative control", quasi_associativity },
      { "lattice laws over all 18 elements", lattice_laws },
      { "Dempster guard and chaining", dempster_guard },
  };

  int failures = 0;
  for ( std::size_t i = 0; i < criteria.size(); ++i )
  {
    verdict v;
    try
    {
      v = criteria[i].run();
    }
    catch ( std::exception const& e )
    {
      v.passed = false;
      v.note = std::string( "exception: " ) + e.what();
    }
    failures += v.passed ? 0 : 1;
    std::cout << ( v.passed ? "PASS" : "FAIL" ) << "  " << ( i + 1 ) << ". " << criteria[i].name
              << "  [max deviation " << cli::scientific3( v.worst ) << "]";
    if ( !v.note.empty() )
      std::cout << "  " << v.note;
    std::cout << '\n';
  }
  std::cout << ( criteria.size() - failures ) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
