#pragma once

// Umbrella header.

#include "classes.hpp"
#include "densities.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "group.hpp"
#include "harmonic.hpp"
#include "pointsets.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"
#include "random.hpp"
