#pragma once

#include "orbitcount/arith.hpp"
#include "orbitcount/algebra.hpp"
#include "orbitcount/numeric.hpp"
#include "orbitcount/lattice.hpp"
#include "orbitcount/orders.hpp"
#include "orbitcount/section.hpp"
#include "orbitcount/shells.hpp"
#include "orbitcount/symmetry.hpp"
#include "orbitcount/oracles.hpp"
#include "orbitcount/counting.hpp"
#include "orbitcount/asympt.hpp"
#include "orbitcount/validate.hpp"
#include "orbitcount/presets.hpp"
#include "orbitcount/serialize.hpp"
