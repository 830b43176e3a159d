#pragma once

// Scaled Bregman distances and phi-divergences of probability measures:
// exact discrete sums, exponential-family closed forms, and the quadrature
// oracle that cross-validates them.

#include "bregman/discrete.hpp"
#include "bregman/exp_family.hpp"
#include "bregman/ext_real.hpp"
#include "bregman/families.hpp"
#include "bregman/generator.hpp"
#include "bregman/grid.hpp"
#include "bregman/io.hpp"
#include "bregman/measure.hpp"
#include "bregman/oracle.hpp"
#include "bregman/stable_sum.hpp"
