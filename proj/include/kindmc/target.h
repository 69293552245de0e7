#pragma once

#include "kindmc/ir.h"

namespace kindmc {

/** First state of an inductive-step counterexample, kept together with the
 *  path [first_state, ..., error state] it starts. Reaching first_state
 *  from an initial state proves the error state reachable. */
struct Target
{
  int id = 0;
  State first_state;
  Trace suffix;
  unsigned born_at_k = 0;
};

}  // namespace kindmc
