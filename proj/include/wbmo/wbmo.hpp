#pragma once

// Umbrella header.

#include "wbmo/errors.hpp"
#include "wbmo/summation.hpp"
#include "wbmo/grid.hpp"
#include "wbmo/oscillation.hpp"
#include "wbmo/maximal.hpp"
#include "wbmo/weights.hpp"
#include "wbmo/modulus.hpp"
#include "wbmo/b_condition.hpp"
#include "wbmo/bmo.hpp"
#include "wbmo/report.hpp"
#include "wbmo/sparse.hpp"
#include "wbmo/extrapolate.hpp"
#include "wbmo/czo.hpp"
#include "wbmo/io.hpp"
