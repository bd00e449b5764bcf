#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evfuse
{

/// Malformed frames, propositions, masses or scenarios, and model mismatches.
class invalid_input : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Syntax error in a proposition expression; `position()` is the 0-based offset.
class parse_error : public invalid_input
{
public:
  parse_error( std::string const& what, std::size_t position )
      : invalid_input( what + " at position " + std::to_string( position ) ),
        position_( position )
  {
  }

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A combination rule is undefined on its input (Dempster under total conflict).
class rule_error : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Accumulated rounding drift larger than the renormalization tolerance.
class numeric_drift : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace evfuse
