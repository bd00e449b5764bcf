#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rules.hpp"

namespace evfuse
{

struct Source
{
  std::string name;
  MassFunction mass;
};

/// A frame, a model, an ordered list of sources and an optional default rule.
struct Scenario
{
  Frame frame;
  Model model;
  std::vector<Source> sources;
  std::optional<RuleId> rule;

  std::vector<MassFunction> masses() const
  {
    std::vector<MassFunction> out;
    for ( auto const& s : sources )
      out.push_back( s.mass );
    return out;
  }
};

namespace detail
{

inline invalid_input field_error( std::string const& field, std::string const& what )
{
  return invalid_input( field + ": " + what );
}

inline Model read_model( Frame const& frame, nlohmann::json const& j )
{
  if ( j.is_string() )
  {
    auto const kind = j.get<std::string>();
    if ( kind == "free" )
      return Model::free( frame );
    if ( kind == "exclusive" )
      return Model::exclusive( frame );
    throw field_error( "model", "expected \"free\", \"exclusive\" or {\"exclusive_pairs\": [...]}, got \"" + kind + "\"" );
  }
  if ( !j.is_object() || !j.contains( "exclusive_pairs" ) || !j["exclusive_pairs"].is_array() )
    throw field_error( "model", "expected \"free\", \"exclusive\" or {\"exclusive_pairs\": [...]}" );
  std::vector<std::pair<std::string, std::string>> pairs;
  auto const& list = j["exclusive_pairs"];
  for ( std::size_t i = 0; i < list.size(); ++i )
  {
    auto const& pair = list[i];
    if ( !pair.is_array() || pair.size() != 2u || !pair[0].is_string() || !pair[1].is_string() )
      throw field_error( "model.exclusive_pairs[" + std::to_string( i ) + "]", "expected a pair of atom names" );
    pairs.emplace_back( pair[0].get<std::string>(), pair[1].get<std::string>() );
  }
  try
  {
    return Model::with_exclusive_pairs( frame, pairs );
  }
  catch ( invalid_input const& e )
  {
    throw field_error( "model.exclusive_pairs", e.what() );
  }
}

} // namespace detail

inline Scenario read_scenario( nlohmann::json const& j )
{
  using detail::field_error;
  if ( !j.is_object() )
    throw invalid_input( "scenario must be a JSON object" );

  if ( !j.contains( "frame" ) || !j["frame"].is_array() )
    throw field_error( "frame", "expected an array of atom names" );
  std::vector<std::string> names;
  for ( auto const& n : j["frame"] )
  {
    if ( !n.is_string() )
      throw field_error( "frame", "atom names must be strings" );
    names.push_back( n.get<std::string>() );
  }
  auto frame = [&] {
    try
    {
      return Frame::make( std::move( names ) );
    }
    catch ( invalid_input const& e )
    {
      throw field_error( "frame", e.what() );
    }
  }();

  if ( !j.contains( "model" ) )
    throw field_error( "model", "missing" );
  auto model = detail::read_model( frame, j["model"] );

  std::optional<RuleId> rule;
  if ( j.contains( "rule" ) )
  {
    if ( !j["rule"].is_string() )
      throw field_error( "rule", "expected a rule name" );
    rule = rule_from_string( j["rule"].get<std::string>() );
    if ( !rule )
      throw field_error( "rule", "unknown rule '" + j["rule"].get<std::string>() + "'" );
  }

  if ( !j.contains( "sources" ) || !j["sources"].is_array() || j["sources"].empty() )
    throw field_error( "sources", "expected a non-empty array" );
  std::vector<Source> sources;
  auto const& list = j["sources"];
  for ( std::size_t i = 0; i < list.size(); ++i )
  {
    auto const field = "sources[" + std::to_string( i ) + "]";
    auto const& s = list[i];
    if ( !s.is_object() || !s.contains( "masses" ) || !s["masses"].is_object() )
      throw field_error( field, "expected {\"name\": ..., \"masses\": {expr: number}}" );
    std::string name = "s" + std::to_string( i + 1 );
    if ( s.contains( "name" ) )
    {
      if ( !s["name"].is_string() )
        throw field_error( field + ".name", "expected a string" );
      name = s["name"].get<std::string>();
    }
    std::vector<std::pair<Proposition, double>> assignments;
    for ( auto const& [expr, value] : s["masses"].items() )
    {
      auto const mass_field = field + ".masses[\"" + expr + "\"]";
      if ( !value.is_number() )
        throw field_error( mass_field, "expected a number" );
      try
      {
        assignments.emplace_back( parse_prop( frame, expr ), value.get<double>() );
      }
      catch ( invalid_input const& e )
      {
        throw field_error( mass_field, e.what() );
      }
    }
    try
    {
      sources.push_back( { std::move( name ), MassFunction::make( model, assignments ) } );
    }
    catch ( invalid_input const& e )
    {
      throw field_error( field + ".masses", e.what() );
    }
  }
  return Scenario{ std::move( frame ), std::move( model ), std::move( sources ), rule };
}

inline Scenario load_scenario( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw invalid_input( "cannot open scenario file '" + path + "'" );
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( in );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw invalid_input( path + ": " + e.what() );
  }
  return read_scenario( j );
}

} // namespace evfuse
