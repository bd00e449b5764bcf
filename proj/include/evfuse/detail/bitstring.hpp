#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace evfuse::detail
{

/* fixed-length bit vector backed by 64-bit words; unused high bits stay zero */
class bitstring
{
public:
  bitstring() = default;

  explicit bitstring( std::size_t num_bits )
      : num_bits_( num_bits ), words_( ( num_bits + 63u ) / 64u, 0u )
  {
  }

  std::size_t size() const noexcept { return num_bits_; }

  bool test( std::size_t i ) const noexcept
  {
    return ( words_[i >> 6] >> ( i & 63u ) ) & 1u;
  }

  void set( std::size_t i ) noexcept { words_[i >> 6] |= std::uint64_t{ 1 } << ( i & 63u ); }

  void set_all() noexcept
  {
    std::fill( words_.begin(), words_.end(), ~std::uint64_t{ 0 } );
    trim();
  }

  bool none() const noexcept
  {
    return std::all_of( words_.begin(), words_.end(), []( auto w ) { return w == 0u; } );
  }

  std::size_t count() const noexcept
  {
    std::size_t c = 0;
    for ( auto w : words_ )
      c += static_cast<std::size_t>( std::popcount( w ) );
    return c;
  }

  bitstring& operator&=( bitstring const& other ) noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] &= other.words_[i];
    return *this;
  }

  bitstring& operator|=( bitstring const& other ) noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] |= other.words_[i];
    return *this;
  }

  /* this & ~other */
  bitstring& subtract( bitstring const& other ) noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] &= ~other.words_[i];
    return *this;
  }

  /* true iff (this & ~other) is all-zero */
  bool is_subset_of( bitstring const& other ) const noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      if ( words_[i] & ~other.words_[i] )
        return false;
    return true;
  }

  /* true iff (this & other & ~mask) has a set bit */
  bool intersects_outside( bitstring const& other, bitstring const& mask ) const noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      if ( words_[i] & other.words_[i] & ~mask.words_[i] )
        return true;
    return false;
  }

  /* true iff (this & ~mask) is all-zero */
  bool none_outside( bitstring const& mask ) const noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      if ( words_[i] & ~mask.words_[i] )
        return false;
    return true;
  }

  /* true iff (this & ~mask) is a subset of (other & ~mask) */
  bool is_subset_outside( bitstring const& other, bitstring const& mask ) const noexcept
  {
    for ( std::size_t i = 0; i < words_.size(); ++i )
      if ( words_[i] & ~mask.words_[i] & ~other.words_[i] )
        return false;
    return true;
  }

  friend bool operator==( bitstring const&, bitstring const& ) = default;

  /* orders by length, then by words from the most significant end */
  friend std::strong_ordering operator<=>( bitstring const& a, bitstring const& b ) noexcept
  {
    if ( auto c = a.num_bits_ <=> b.num_bits_; c != 0 )
      return c;
    for ( std::size_t i = a.words_.size(); i-- > 0; )
      if ( auto c = a.words_[i] <=> b.words_[i]; c != 0 )
        return c;
    return std::strong_ordering::equal;
  }

private:
  void trim() noexcept
  {
    if ( auto rest = num_bits_ & 63u; rest != 0u && !words_.empty() )
      words_.back() &= ( std::uint64_t{ 1 } << rest ) - 1u;
  }

  std::size_t num_bits_ = 0;
  std::vector<std::uint64_t> words_;
};

} // namespace evfuse::detail
