#pragma once

// Spectral radius statistics for products of independent rectangular
// complex Ginibre matrices: an exact gamma-product sampler, a direct
// matrix-product sampler, the limiting-law normalizing constants, and
// the goodness-of-fit machinery tying them together.

#include "specrad/cli.hpp"
#include "specrad/ensemble.hpp"
#include "specrad/errors.hpp"
#include "specrad/limitlaw.hpp"
#include "specrad/matrix_sampler.hpp"
#include "specrad/repr_sampler.hpp"
#include "specrad/rng.hpp"
#include "specrad/specfun.hpp"
#include "specrad/stats.hpp"
