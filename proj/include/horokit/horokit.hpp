#pragma once

// Umbrella header for the horokit numerical integral-geometry toolkit.

#include "horokit/bracket.hpp"
#include "horokit/canonical.hpp"
#include "horokit/charts.hpp"
#include "horokit/cycles.hpp"
#include "horokit/fundamental.hpp"
#include "horokit/horospherical.hpp"
#include "horokit/output.hpp"
#include "horokit/parallel.hpp"
#include "horokit/pseudo.hpp"
#include "horokit/pvline.hpp"
#include "horokit/quadratic.hpp"
#include "horokit/quadrature.hpp"
#include "horokit/radon.hpp"
#include "horokit/rng.hpp"
#include "horokit/testfunc.hpp"
#include "horokit/types.hpp"
