#pragma once

// Bad-prefix automata for regular k-safety hyperproperties: representation
// algebra, canonical constructions, representation equivalence, a safety-LTL
// frontend with universally quantified trace variables, and an active
// learner. Everything is header-only; include this to get the full library.

#include "alphabet.hpp"
#include "automata.hpp"
#include "constructions.hpp"
#include "equiv.hpp"
#include "errors.hpp"
#include "hyperltl.hpp"
#include "io.hpp"
#include "learner.hpp"
#include "ltl.hpp"
#include "repr.hpp"
