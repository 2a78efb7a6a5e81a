#pragma once

// Umbrella header for the scri library: far-field scattering amplitudes for
// the 2-D Helmholtz equation in unbounded media, computed on a compactified
// annulus whose outer boundary is null infinity.

#include "scri/errors.hpp"
#include "scri/experiments.hpp"
#include "scri/geometry.hpp"
#include "scri/media.hpp"
#include "scri/nic_operator.hpp"
#include "scri/pipeline.hpp"
#include "scri/reference.hpp"
#include "scri/specfun.hpp"
#include "scri/spectral.hpp"
