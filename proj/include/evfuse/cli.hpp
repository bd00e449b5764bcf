#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fusion.hpp"
#include "scenario.hpp"

namespace evfuse::cli
{

enum exit_code : int
{
  ok = 0,
  check_failed = 1,
  input_error = 2,
  rule_failure = 3
};

enum class output_format
{
  table,
  json
};

struct options
{
  std::optional<RuleId> rule;
  output_format output = output_format::table;
  std::vector<std::string> checks{ "permutation", "markov", "vbf", "eq7" };
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double prune_epsilon = 0.0;
};

/// Fixed six-decimal rendering, independent of the global locale.
inline std::string fixed6( double value )
{
  char buf[64];
  auto [end, ec] = std::to_chars( buf, buf + sizeof buf, value, std::chars_format::fixed, 6 );
  std::string s( buf, end );
  if ( s == "-0.000000" )
    s.erase( 0, 1 );
  return s;
}

inline std::string scientific3( double value )
{
  char buf[64];
  auto [end, ec] = std::to_chars( buf, buf + sizeof buf, value, std::chars_format::scientific, 3 );
  return std::string( buf, end );
}

/// Canonical rows: DNF text and mass, sorted by text.
inline std::vector<std::pair<std::string, double>> rows( MassFunction const& m )
{
  std::vector<std::pair<std::string, double>> out;
  for ( auto const& [p, w] : m.terms() )
    out.emplace_back( format_prop( p ), w );
  std::sort( out.begin(), out.end() );
  return out;
}

inline nlohmann::ordered_json masses_json( MassFunction const& m )
{
  auto j = nlohmann::ordered_json::object();
  for ( auto const& [text, w] : rows( m ) )
    j[text] = w;
  return j;
}

inline void print_rows( std::ostream& out, MassFunction const& m, std::string const& indent = {} )
{
  for ( auto const& [text, w] : rows( m ) )
    out << indent << text << '\t' << fixed6( w ) << '\n';
}

inline FusionState fold( Scenario const& s, std::vector<std::size_t> const& order, double prune_epsilon )
{
  FusionState state( s.model, prune_epsilon );
  for ( auto i : order )
    state.fuse( s.sources[i].mass, s.sources[i].name );
  return state;
}

inline std::vector<std::size_t> identity_order( std::size_t n )
{
  std::vector<std::size_t> order( n );
  std::iota( order.begin(), order.end(), std::size_t{ 0 } );
  return order;
}

inline RuleId resolve_rule( Scenario const& s, options const& opt )
{
  if ( opt.rule )
    return *opt.rule;
  if ( s.rule )
    return *s.rule;
  throw invalid_input( "rule: not given in the scenario and no --rule override" );
}

inline int cmd_fuse( Scenario const& s, options const& opt, std::ostream& out )
{
  auto const rule = resolve_rule( s, opt );
  auto const state = fold( s, identity_order( s.sources.size() ), opt.prune_epsilon );
  auto const result = state.snapshot( rule );
  if ( opt.output == output_format::json )
  {
    nlohmann::ordered_json j;
    j["rule"] = to_string( rule );
    j["conflict"] = state.conflict();
    j["masses"] = masses_json( result );
    out << j.dump( 2 ) << '\n';
    return ok;
  }
  out << "rule\t" << to_string( rule ) << '\n';
  out << "sources\t" << state.source_count() << '\n';
  out << "conflict\t" << fixed6( state.conflict() ) << '\n';
  print_rows( out, result );
  return ok;
}

inline int cmd_stream( Scenario const& s, options const& opt, std::ostream& out )
{
  auto const rule = resolve_rule( s, opt );
  FusionState state( s.model, opt.prune_epsilon );
  auto steps = nlohmann::ordered_json::array();
  std::optional<MassFunction> last;
  for ( std::size_t i = 0; i < s.sources.size(); ++i )
  {
    state.fuse( s.sources[i].mass, s.sources[i].name );
    auto snap = state.snapshot( rule );
    if ( opt.output == output_format::json )
    {
      nlohmann::ordered_json step;
      step["step"] = i + 1;
      step["source"] = s.sources[i].name;
      step["conflict"] = state.conflict();
      step["masses"] = masses_json( snap );
      steps.push_back( std::move( step ) );
    }
    else
    {
      out << "step\t" << ( i + 1 ) << '\t' << s.sources[i].name << "\tconflict\t" << fixed6( state.conflict() ) << '\n';
      print_rows( out, snap, "  " );
    }
    last = std::move( snap );
  }
  if ( opt.output == output_format::json )
  {
    nlohmann::ordered_json j;
    j["rule"] = to_string( rule );
    j["conflict"] = state.conflict();
    j["steps"] = std::move( steps );
    j["masses"] = masses_json( *last );
    out << j.dump( 2 ) << '\n';
  }
  return ok;
}

/// Largest absolute per-proposition difference; missing entries count as zero.
inline double max_deviation( term_map const& a, term_map const& b )
{
  double dev = 0.0;
  for ( auto const& [p, w] : a )
  {
    auto it = b.find( p );
    dev = std::max( dev, std::abs( w - ( it == b.end() ? 0.0 : it->second ) ) );
  }
  for ( auto const& [p, w] : b )
    if ( !a.contains( p ) )
      dev = std::max( dev, std::abs( w ) );
  return dev;
}

struct check_result
{
  std::string name;
  bool passed = true;
  bool skipped = false;
  double deviation = 0.0;
  std::string detail;
};

namespace detail
{

/* snapshot or the rule error text, so that orderings can be compared even when the rule fails */
struct outcome
{
  std::optional<MassFunction> mass;
  std::string error;
};

inline outcome try_snapshot( FusionState const& state, RuleId rule )
{
  try
  {
    return { state.snapshot( rule ), {} };
  }
  catch ( rule_error const& e )
  {
    return { std::nullopt, e.what() };
  }
}

inline void compare( check_result& r, outcome const& base, outcome const& other, double tolerance )
{
  if ( base.mass.has_value() != other.mass.has_value() )
  {
    r.passed = false;
    r.deviation = std::max( r.deviation, 1.0 );
    return;
  }
  if ( !base.mass )
    return;
  auto dev = max_deviation( base.mass->terms(), other.mass->terms() );
  r.deviation = std::max( r.deviation, dev );
  if ( !( dev <= tolerance ) )
    r.passed = false;
}

} // namespace detail

inline constexpr double permutation_tolerance = 1e-9;
inline constexpr double markov_tolerance = 1e-12;
inline constexpr double vbf_tolerance = 1e-12;
inline constexpr double eq7_tolerance = 1e-12;
inline constexpr std::size_t max_enumerated_orderings = 720;

inline check_result check_permutation( Scenario const& s, RuleId rule, options const& opt )
{
  check_result r;
  r.name = "permutation";
  auto order = identity_order( s.sources.size() );
  auto const base = detail::try_snapshot( fold( s, order, opt.prune_epsilon ), rule );

  std::size_t total = 1;
  for ( std::size_t k = 2; k <= order.size() && total <= max_enumerated_orderings; ++k )
    total *= k;

  std::size_t evaluated = 0;
  if ( total <= max_enumerated_orderings )
  {
    while ( std::next_permutation( order.begin(), order.end() ) )
    {
      detail::compare( r, base, detail::try_snapshot( fold( s, order, opt.prune_epsilon ), rule ), permutation_tolerance );
      ++evaluated;
    }
  }
  else
  {
    std::mt19937_64 rng( opt.seed );
    for ( std::size_t t = 0; t < opt.trials; ++t )
    {
      std::shuffle( order.begin(), order.end(), rng );
      detail::compare( r, base, detail::try_snapshot( fold( s, order, opt.prune_epsilon ), rule ), permutation_tolerance );
      ++evaluated;
    }
  }
  r.detail = std::to_string( evaluated + 1 ) + " orderings";
  return r;
}

inline check_result check_markov( Scenario const& s, options const& opt )
{
  check_result r;
  r.name = "markov";
  FusionState state( s.model, opt.prune_epsilon );
  std::vector<MassFunction> prefix;
  for ( auto const& src : s.sources )
  {
    state.fuse( src.mass, src.name );
    prefix.push_back( src.mass );
    auto const expected = prefix.size() == 1u ? src.mass.terms() : oracle_conjunctive( prefix ).terms();
    auto dev = max_deviation( state.accumulator().terms(), expected );
    r.deviation = std::max( r.deviation, dev );
    if ( !( dev <= markov_tolerance ) )
      r.passed = false;
  }
  r.detail = std::to_string( prefix.size() ) + " prefixes";
  return r;
}

inline check_result check_vbf( Scenario const& s, RuleId rule, options const& opt )
{
  check_result r;
  r.name = "vbf";
  auto const n = s.sources.size();
  auto const base = detail::try_snapshot( fold( s, identity_order( n ), opt.prune_epsilon ), rule );
  auto const vacuous = vbf( s.model );

  auto run = [&]( std::vector<std::size_t> const& insert_before ) {
    FusionState state( s.model, opt.prune_epsilon );
    for ( std::size_t i = 0; i <= n; ++i )
    {
      for ( auto pos : insert_before )
        if ( pos == i )
          state.fuse( vacuous, "vbf" );
      if ( i < n )
        state.fuse( s.sources[i].mass, s.sources[i].name );
    }
    detail::compare( r, base, detail::try_snapshot( state, rule ), vbf_tolerance );
  };

  for ( std::size_t pos = 0; pos <= n; ++pos )
    run( { pos } );
  std::mt19937_64 rng( opt.seed );
  std::uniform_int_distribution<std::size_t> count_dist( 1, 3 ), pos_dist( 0, n );
  for ( std::size_t t = 0; t < opt.trials; ++t )
  {
    std::vector<std::size_t> positions( count_dist( rng ) );
    for ( auto& p : positions )
      p = pos_dist( rng );
    run( positions );
  }
  r.detail = std::to_string( n + 1 + opt.trials ) + " insertions";
  return r;
}

inline check_result check_eq7( Scenario const& s )
{
  check_result r;
  r.name = "eq7";
  auto const n = s.sources.size();
  if ( n < 2 )
  {
    r.skipped = true;
    r.detail = "needs at least two sources";
    return r;
  }
  std::size_t pairs = 0;
  for ( std::size_t i = 0; i < n; ++i )
    for ( std::size_t j = i + 1; j < n; ++j )
    {
      auto const& m1 = s.sources[i].mass;
      auto const& m2 = s.sources[j].mass;
      auto const direct = sdli2( m1, m2 );
      auto const engine = combine2( RuleId::sdli, m1, m2 );
      auto dev = max_deviation( direct.terms(), engine.terms() );
      r.deviation = std::max( r.deviation, dev );
      if ( !( dev <= eq7_tolerance ) )
        r.passed = false;
      ++pairs;
    }
  r.detail = std::to_string( pairs ) + " source pairs";
  return r;
}

inline int cmd_verify( Scenario const& s, options const& opt, std::ostream& out )
{
  if ( opt.trials < 1u )
    throw invalid_input( "--trials must be at least 1" );
  auto const rule = resolve_rule( s, opt );
  std::vector<check_result> results;
  for ( auto const& name : opt.checks )
  {
    if ( name == "permutation" )
      results.push_back( check_permutation( s, rule, opt ) );
    else if ( name == "markov" )
      results.push_back( check_markov( s, opt ) );
    else if ( name == "vbf" )
      results.push_back( check_vbf( s, rule, opt ) );
    else if ( name == "eq7" )
      results.push_back( check_eq7( s ) );
    else
      throw invalid_input( "--checks: unknown check '" + name + "'" );
  }

  bool all = true;
  if ( opt.output == output_format::json )
  {
    nlohmann::ordered_json j;
    j["rule"] = to_string( rule );
    j["checks"] = nlohmann::ordered_json::array();
    for ( auto const& c : results )
    {
      nlohmann::ordered_json e;
      e["name"] = c.name;
      e["status"] = c.skipped ? "SKIP" : ( c.passed ? "PASS" : "FAIL" );
      e["max_deviation"] = c.deviation;
      e["detail"] = c.detail;
      j["checks"].push_back( std::move( e ) );
      all = all && c.passed;
    }
    out << j.dump( 2 ) << '\n';
  }
  else
  {
    for ( auto const& c : results )
    {
      out << ( c.skipped ? "SKIP" : ( c.passed ? "PASS" : "FAIL" ) ) << '\t' << c.name << "\tmax_deviation="
          << scientific3( c.deviation ) << '\t' << c.detail << '\n';
      all = all && c.passed;
    }
  }
  return all ? ok : check_failed;
}

/// Full command-line entry point; returns the process exit code.
inline int run( int argc, char const* const* argv, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Belief-function fusion with stored conjunctive state", "evfuse" };
  app.require_subcommand( 1 );

  options opt;
  std::string path;
  std::string rule_name;
  std::string output_name = "table";
  std::string check_list;

  auto add_common = [&]( CLI::App* sub ) {
    sub->add_option( "scenario", path, "Scenario JSON file" )->required();
    sub->add_option( "--rule", rule_name, "Combination rule (overrides the scenario)" );
    sub->add_option( "--output", output_name, "Output format" )->check( CLI::IsMember( { "table", "json" } ) );
    sub->add_option( "--prune", opt.prune_epsilon, "Drop accumulator terms below this mass (approximation)" )
        ->check( CLI::NonNegativeNumber );
  };
  auto* fuse_cmd = app.add_subcommand( "fuse", "Fuse all sources and print the decision mass" );
  auto* stream_cmd = app.add_subcommand( "stream", "Fuse sources one by one, printing each snapshot" );
  auto* verify_cmd = app.add_subcommand( "verify", "Check order invariance, Markov property, VBF neutrality and the direct two-source SDLi formula" );
  add_common( fuse_cmd );
  add_common( stream_cmd );
  add_common( verify_cmd );
  verify_cmd->add_option( "--checks", check_list, "Comma-separated subset of permutation,markov,vbf,eq7" );
  verify_cmd->add_option( "--trials", opt.trials, "Sampled trials" );
  verify_cmd->add_option( "--seed", opt.seed, "Random seed" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& )
  {
    out << app.help();
    return ok;
  }
  catch ( CLI::ParseError const& e )
  {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try
  {
    if ( !rule_name.empty() )
    {
      opt.rule = rule_from_string( rule_name );
      if ( !opt.rule )
        throw invalid_input( "--rule: unknown rule '" + rule_name + "'" );
    }
    opt.output = output_name == "json" ? output_format::json : output_format::table;
    if ( !check_list.empty() )
    {
      opt.checks.clear();
      std::size_t start = 0;
      while ( start <= check_list.size() )
      {
        auto comma = std::min( check_list.find( ',', start ), check_list.size() );
        opt.checks.push_back( check_list.substr( start, comma - start ) );
        start = comma + 1;
      }
    }

    auto const scenario = load_scenario( path );
    if ( fuse_cmd->parsed() )
      return cmd_fuse( scenario, opt, out );
    if ( stream_cmd->parsed() )
      return cmd_stream( scenario, opt, out );
    return cmd_verify( scenario, opt, out );
  }
  catch ( invalid_input const& e )
  {
    err << "error: " << e.what() << '\n';
    return input_error;
  }
  catch ( rule_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return rule_failure;
  }
  catch ( numeric_drift const& e )
  {
    err << "error: " << e.what() << '\n';
    return rule_failure;
  }
}

} // namespace evfuse::cli
