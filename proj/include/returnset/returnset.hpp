#pragma once

// Return-set analysis for discrete dynamical systems: integer-set machinery
// with exact densities and witness extraction, exact dynamics on finite
// topological spaces, exact-arithmetic polynomial orbits with plane-curve
// invariance, and the recursive quantitative bound calculator.

#include "returnset/apset.hpp"
#include "returnset/backward.hpp"
#include "returnset/bounds.hpp"
#include "returnset/curve.hpp"
#include "returnset/decompose.hpp"
#include "returnset/density.hpp"
#include "returnset/enumerate.hpp"
#include "returnset/errors.hpp"
#include "returnset/fields.hpp"
#include "returnset/finite_system.hpp"
#include "returnset/fset.hpp"
#include "returnset/io.hpp"
#include "returnset/polymap.hpp"
#include "returnset/polynomial.hpp"
#include "returnset/preorder.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"
#include "returnset/witness.hpp"
