#pragma once

#include <evfuse/evfuse.hpp>

namespace evfuse::test_support
{

/* three exclusive hypotheses and the four sources of the worked example */
struct worked_example
{
  Frame frame = Frame::make( { "A", "B", "C" } );
  Model model = Model::exclusive( frame );
  Proposition a = atom( frame, "A" );
  Proposition b = atom( frame, "B" );
  Proposition c = atom( frame, "C" );
  Proposition a_or_c = a | c;
  Proposition a_or_b = a | b;
  Proposition a_and_b = a & b;
  Proposition b_and_a_or_c = b & a_or_c;
  Proposition top = total_ignorance( frame );

  MassFunction source( double on_a, double on_b, double on_a_or_c ) const
  {
    return MassFunction::make( model, { { a, on_a }, { b, on_b }, { a_or_c, on_a_or_c } } );
  }

  MassFunction m1 = source( 0.4, 0.5, 0.1 );
  MassFunction m2 = source( 0.6, 0.2, 0.2 );
  MassFunction m3 = source( 0.7, 0.2, 0.1 );
  MassFunction m4 = source( 0.5, 0.5, 0.0 );
};

} // namespace evfuse::test_support
